#include "perc/percolation.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <thread>

namespace perc {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t index) {
    std::uint64_t key = mix64(mix64(seed) ^ (sample * 0xD1B54A32D192ED03ull));
    std::uint64_t bits = mix64(key ^ mix64(index + 0x632BE59BD9B4E019ull));
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

LongRangeModel::LongRangeModel(std::size_t vertex_count, const std::vector<Pair>& weights)
    : n_(vertex_count), matrix_(vertex_count, std::vector<mpq_class>(vertex_count, 0)) {
    if (n_ == 0) throw InvalidArgument("long-range model needs at least one vertex");
    std::vector<std::vector<bool>> set(n_, std::vector<bool>(n_, false));
    for (const auto& w : weights) {
        if (w.a >= n_ || w.b >= n_) throw InvalidArgument("weight endpoint out of range");
        if (w.a == w.b) throw InvalidArgument("self-pairs carry no weight");
        if (w.mu < 0) throw InvalidArgument("weights must be nonnegative");
        if (set[w.a][w.b] && matrix_[w.a][w.b] != w.mu) throw InvalidArgument("asymmetric weight assignment");
        set[w.a][w.b] = set[w.b][w.a] = true;
        matrix_[w.a][w.b] = matrix_[w.b][w.a] = w.mu;
    }
    PatchBuilder b(PatchKind::long_range);
    for (std::size_t v = 0; v < n_; ++v) b.add_vertex({static_cast<int>(v)}, std::to_string(v));
    for (VertexId a = 0; a < n_; ++a)
        for (VertexId c = a + 1; c < n_; ++c)
            if (matrix_[a][c] > 0) {
                pairs_.push_back({a, c, matrix_[a][c]});
                b.add_edge(a, c);
            }
    b.set_origin(0);
    support_ = b.finish(false);
}

LongRangeModel LongRangeModel::uniform(std::size_t n, const mpq_class& mu) {
    std::vector<Pair> w;
    for (VertexId a = 0; a < n; ++a)
        for (VertexId b = a + 1; b < n; ++b) w.push_back({a, b, mu});
    return LongRangeModel(n, w);
}

LongRangeModel LongRangeModel::path(std::size_t n, const mpq_class& mu) {
    std::vector<Pair> w;
    for (VertexId a = 0; a + 1 < n; ++a) w.push_back({a, a + 1, mu});
    return LongRangeModel(n, w);
}

const mpq_class& LongRangeModel::weight(VertexId a, VertexId b) const { return matrix_.at(a).at(b); }

mpq_class LongRangeModel::row_sum(VertexId v) const {
    mpq_class s = 0;
    for (const auto& x : matrix_.at(v)) s += x;
    return s;
}

bool LongRangeModel::normalized() const {
    for (VertexId v = 0; v < n_; ++v)
        if (row_sum(v) > 1) return false;
    return true;
}

mpq_class LongRangeModel::incident_weight(const std::vector<VertexId>& vertices) const {
    std::vector<bool> in(n_, false);
    for (VertexId v : vertices) in.at(v) = true;
    mpq_class s = 0;
    for (const auto& p : pairs_)
        if (in[p.a] || in[p.b]) s += p.mu;
    return s;
}

bool Config::edge_open(EdgeId e) const {
    if (mode == Mode::bond) return occupied.at(e) != 0;
    const Edge& ed = patch->edge(e);
    return occupied.at(ed.a) != 0 && occupied.at(ed.b) != 0;
}

bool Config::vertex_open(VertexId v) const { return mode == Mode::bond || occupied.at(v) != 0; }

Config sample_config(const PatchPtr& patch, Mode mode, double p, std::uint64_t seed, std::uint64_t sample) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
    Config c;
    c.patch = patch;
    c.mode = mode;
    c.parameter = p;
    c.seed = seed;
    c.sample = sample;
    std::size_t n = mode == Mode::bond ? patch->edge_count() : patch->vertex_count();
    c.occupied.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.occupied[i] = uniform01(seed, sample, i) < p ? 1 : 0;
    return c;
}

Config sample_config(const LongRangeModel& model, double t, std::uint64_t seed, std::uint64_t sample) {
    if (!(t >= 0.0)) throw InvalidArgument("t must be nonnegative");
    Config c;
    c.patch = model.support();
    c.mode = Mode::bond;
    c.parameter = t;
    c.seed = seed;
    c.sample = sample;
    const auto& pairs = model.pairs();
    c.occupied.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double q = -std::expm1(-pairs[i].mu.get_d() * t);
        c.occupied[i] = uniform01(seed, sample, i) < q ? 1 : 0;
    }
    return c;
}

Config constant_config(const PatchPtr& patch, Mode mode, bool occupied) {
    Config c;
    c.patch = patch;
    c.mode = mode;
    c.parameter = occupied ? 1.0 : 0.0;
    std::size_t n = mode == Mode::bond ? patch->edge_count() : patch->vertex_count();
    c.occupied.assign(n, occupied ? 1 : 0);
    return c;
}

bool Cluster::contains(VertexId v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

Cluster cluster_of(const Config& config, VertexId v) {
    const LatticePatch& patch = *config.patch;
    if (v >= patch.vertex_count()) throw InvalidArgument("vertex out of range");
    Cluster c;
    if (!config.vertex_open(v)) {
        for (const auto& inc : patch.incident(v)) c.boundary.push_back(inc.edge);
        std::sort(c.boundary.begin(), c.boundary.end());
        return c;
    }
    std::vector<std::uint8_t> seen(patch.vertex_count(), 0);
    std::vector<VertexId> stack{v};
    seen[v] = 1;
    while (!stack.empty()) {
        VertexId u = stack.back();
        stack.pop_back();
        c.vertices.push_back(u);
        if (patch.is_escape(u)) c.touches_escape = true;
        for (const auto& inc : patch.incident(u)) {
            if (!config.edge_open(inc.edge) || seen[inc.neighbor]) continue;
            seen[inc.neighbor] = 1;
            stack.push_back(inc.neighbor);
        }
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    for (VertexId u : c.vertices)
        for (const auto& inc : patch.incident(u)) {
            if (inc.neighbor < u && seen[inc.neighbor]) continue;  // count each internal edge once
            if (config.edge_open(inc.edge))
                c.edges.push_back(inc.edge);
            else
                c.boundary.push_back(inc.edge);
        }
    std::sort(c.edges.begin(), c.edges.end());
    std::sort(c.boundary.begin(), c.boundary.end());
    c.boundary.erase(std::unique(c.boundary.begin(), c.boundary.end()), c.boundary.end());
    return c;
}

ClusterExplorer::ClusterExplorer(const LatticePatch& patch) : patch_(patch), stamp_(patch.vertex_count(), 0) {}

std::size_t resolve_threads(std::size_t requested) {
    if (requested > 0) return requested;
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_samples(std::uint64_t samples, std::size_t threads,
                      const std::function<void(std::uint64_t, std::uint64_t, std::size_t)>& body) {
    threads = std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(1, samples));
    if (threads <= 1) {
        body(0, samples, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::uint64_t chunk = samples / threads, extra = samples % threads, begin = 0;
    for (std::size_t w = 0; w < threads; ++w) {
        std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
        pool.emplace_back(body, begin, end, w);
        begin = end;
    }
    for (auto& t : pool) t.join();
}

namespace {

// Integer sums keep merged results independent of the worker count.
struct Moments {
    std::uint64_t n = 0;
    unsigned __int128 sum = 0;
    unsigned __int128 sum_sq = 0;

    void add(std::uint64_t x) {
        ++n;
        sum += x;
        sum_sq += static_cast<unsigned __int128>(x) * x;
    }
    void merge(const Moments& o) {
        n += o.n;
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    Estimate estimate() const {
        Estimate e;
        e.samples = n;
        if (n == 0) return e;
        long double mean = static_cast<long double>(sum) / n;
        e.value = static_cast<double>(mean);
        if (n > 1) {
            long double var = (static_cast<long double>(sum_sq) - static_cast<long double>(sum) * mean) / (n - 1);
            e.std_error = static_cast<double>(std::sqrt(std::max<long double>(var, 0.0L) / n));
        }
        return e;
    }
};

void check_p(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
}

void check_samples(std::uint64_t samples) {
    if (samples == 0) throw InvalidArgument("samples must be at least 1");
}

// Runs per-sample statistic(explorer, seed, sample) -> values and merges Moments.
template <std::size_t K, class Stat>
std::array<Moments, K> run_moments(const PatchPtr& patch, std::uint64_t samples, std::size_t threads, Stat&& stat) {
    std::size_t workers = resolve_threads(threads);
    std::vector<std::array<Moments, K>> partial(workers);
    parallel_samples(samples, workers, [&](std::uint64_t begin, std::uint64_t end, std::size_t w) {
        ClusterExplorer explorer(*patch);
        for (std::uint64_t s = begin; s < end; ++s) {
            auto values = stat(explorer, s);
            for (std::size_t k = 0; k < K; ++k) partial[w][k].add(values[k]);
        }
    });
    std::array<Moments, K> total{};
    for (const auto& part : partial)
        for (std::size_t k = 0; k < K; ++k) total[k].merge(part[k]);
    return total;
}

struct Opener {
    const LatticePatch* patch;
    Mode mode;
    double p;
    std::uint64_t seed;
    std::uint64_t sample;

    bool start_open(VertexId v) const { return mode == Mode::bond || uniform01(seed, sample, v) < p; }
    bool operator()(EdgeId e, VertexId to) const {
        return uniform01(seed, sample, mode == Mode::bond ? e : to) < p;
    }
};

}  // namespace

Estimate estimate_theta(const PatchPtr& patch, Mode mode, double p, std::uint64_t samples, std::uint64_t seed,
                        EstimatorOptions opts) {
    check_p(p);
    check_samples(samples);
    auto m = run_moments<1>(patch, samples, opts.threads, [&](ClusterExplorer& ex, std::uint64_t s) {
        Opener open{patch.get(), mode, p, seed, s};
        if (!open.start_open(patch->origin())) return std::array<std::uint64_t, 1>{0};
        auto r = ex.explore(patch->origin(), open, true);
        return std::array<std::uint64_t, 1>{r.touches_escape ? 1u : 0u};
    });
    return m[0].estimate();
}

Estimate estimate_chi_truncated(const PatchPtr& patch, Mode mode, double p, std::uint64_t samples,
                                std::uint64_t seed, EstimatorOptions opts) {
    check_p(p);
    check_samples(samples);
    auto m = run_moments<1>(patch, samples, opts.threads, [&](ClusterExplorer& ex, std::uint64_t s) {
        Opener open{patch.get(), mode, p, seed, s};
        if (!open.start_open(patch->origin())) return std::array<std::uint64_t, 1>{0};
        auto r = ex.explore(patch->origin(), open, true);
        return std::array<std::uint64_t, 1>{r.touches_escape ? 0u : r.size};
    });
    return m[0].estimate();
}

TauEstimate estimate_tau(const PatchPtr& patch, Mode mode, const std::vector<VertexId>& points, double p,
                         std::uint64_t samples, std::uint64_t seed, EstimatorOptions opts) {
    check_p(p);
    check_samples(samples);
    if (points.size() < 2) throw InvalidArgument("tau needs at least two points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i] >= patch->vertex_count()) throw InvalidArgument("point out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j]) throw InvalidArgument("points must be distinct");
    }
    auto m = run_moments<2>(patch, samples, opts.threads, [&](ClusterExplorer& ex, std::uint64_t s) {
        Opener open{patch.get(), mode, p, seed, s};
        if (!open.start_open(points[0])) return std::array<std::uint64_t, 2>{0, 0};
        auto r = ex.explore(points[0], open, false);
        bool all = std::all_of(points.begin() + 1, points.end(), [&](VertexId v) { return ex.visited(v); });
        return std::array<std::uint64_t, 2>{all ? 1u : 0u, (all && !r.touches_escape) ? 1u : 0u};
    });
    return {m[0].estimate(), m[1].estimate()};
}

Estimate tail_probability(const PatchPtr& patch, Mode mode, double p, std::size_t m, std::uint64_t samples,
                          std::uint64_t seed, EstimatorOptions opts) {
    check_p(p);
    check_samples(samples);
    if (m < 1) throw InvalidArgument("m must be at least 1");
    auto mom = run_moments<1>(patch, samples, opts.threads, [&](ClusterExplorer& ex, std::uint64_t s) {
        Opener open{patch.get(), mode, p, seed, s};
        if (!open.start_open(patch->origin())) return std::array<std::uint64_t, 1>{0};
        auto r = ex.explore(patch->origin(), open, true, m);
        return std::array<std::uint64_t, 1>{(r.touches_escape || r.size >= m) ? 1u : 0u};
    });
    return mom[0].estimate();
}

}  // namespace perc
