#include "perc/enumeration.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <optional>
#include <cmath>
#include <numbers>
#include <numeric>

namespace perc {

bool ClusterShape::operator<(const ClusterShape& o) const {
    if (vertices != o.vertices) return vertices < o.vertices;
    return edges < o.edges;
}

namespace {

struct ConnectedSetWalker {
    const LatticePatch& patch;
    std::size_t max_size;
    const std::function<void(std::span<const VertexId>)>& visit;
    std::size_t cap;
    const std::function<bool(VertexId)>& allowed;
    std::vector<std::uint8_t> marked;
    std::vector<VertexId> current;
    std::size_t visited = 0;

    void run(std::vector<VertexId> untried) {
        while (!untried.empty()) {
            VertexId v = untried.back();
            untried.pop_back();
            current.push_back(v);
            if (++visited > cap) throw CapExceeded("connected-set enumeration exceeded its cap");
            visit(current);
            if (current.size() < max_size) {
                std::vector<VertexId> next = untried;
                std::size_t before = next.size();
                for (const auto& inc : patch.incident(v)) {
                    VertexId w = inc.neighbor;
                    if (marked[w] || (allowed && !allowed(w))) continue;
                    marked[w] = 1;
                    next.push_back(w);
                }
                std::vector<VertexId> added(next.begin() + static_cast<long>(before), next.end());
                run(std::move(next));
                for (VertexId w : added) marked[w] = 0;
            }
            current.pop_back();
        }
    }
};

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

std::size_t resolve_cap(std::size_t cap) { return cap ? cap : enumeration_cap(kDefaultShapeCap); }

}  // namespace

void for_each_connected_set(const LatticePatch& patch, VertexId root, std::size_t max_size,
                            const std::function<void(std::span<const VertexId>)>& visit, std::size_t cap,
                            const std::function<bool(VertexId)>& allowed) {
    if (root >= patch.vertex_count()) throw InvalidArgument("root out of range");
    if (max_size == 0) return;
    if (allowed && !allowed(root)) return;
    ConnectedSetWalker walker{patch, max_size, visit, cap, allowed, std::vector<std::uint8_t>(patch.vertex_count(), 0), {}};
    walker.marked[root] = 1;
    walker.run({root});
}

std::vector<EdgeId> induced_edges(const LatticePatch& patch, std::span<const VertexId> sorted_vertices) {
    std::vector<EdgeId> out;
    for (VertexId v : sorted_vertices)
        for (const auto& inc : patch.incident(v))
            if (inc.neighbor > v && std::binary_search(sorted_vertices.begin(), sorted_vertices.end(), inc.neighbor))
                out.push_back(inc.edge);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> spanning_connected_subsets(std::span<const VertexId> vertices, std::span<const Edge> edges) {
    std::vector<VertexId> sorted(vertices.begin(), vertices.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = edges.size();
    if (m > 30) throw CapExceeded("too many induced edges for subset enumeration");
    if (sorted.size() > 1 && m + 1 < sorted.size()) return {};
    auto local = [&](VertexId v) {
        return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    };
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
    for (const auto& e : edges) ends.emplace_back(local(e.a), local(e.b));
    std::vector<std::uint64_t> out;
    const std::size_t need = sorted.size() - 1;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) < need) continue;
        UnionFind uf(sorted.size());
        std::size_t merges = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1u) merges += uf.unite(ends[i].first, ends[i].second);
        if (merges == need) out.push_back(mask);
    }
    return out;
}

std::vector<ClusterShape> enumerate_clusters(const LatticePatch& patch, VertexId o, std::size_t n, std::size_t cap) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    cap = resolve_cap(cap);
    std::vector<ClusterShape> shapes;
    for_each_connected_set(patch, o, n, [&](std::span<const VertexId> set) {
        if (set.size() != n) return;
        std::vector<VertexId> sorted(set.begin(), set.end());
        std::sort(sorted.begin(), sorted.end());
        auto edge_ids = induced_edges(patch, sorted);
        std::vector<Edge> edges;
        for (EdgeId e : edge_ids) edges.push_back(patch.edge(e));
        unsigned degree_sum = 0;
        for (VertexId v : sorted) degree_sum += static_cast<unsigned>(patch.degree(v));
        for (std::uint64_t mask : spanning_connected_subsets(sorted, edges)) {
            ClusterShape s;
            s.vertices = sorted;
            for (std::size_t i = 0; i < edge_ids.size(); ++i)
                if (mask >> i & 1u) s.edges.push_back(edge_ids[i]);
            s.boundary_size = degree_sum - static_cast<unsigned>(edge_ids.size()) - s.edge_count();
            shapes.push_back(std::move(s));
            if (shapes.size() > cap) throw CapExceeded("cluster enumeration exceeded its cap");
        }
    }, cap);
    std::sort(shapes.begin(), shapes.end());
    return shapes;
}

ShapeSum cluster_size_polynomial(const LatticePatch& patch, VertexId o, std::size_t n, std::size_t cap) {
    ShapeSum sum;
    for (const auto& s : enumerate_clusters(patch, o, n, cap)) sum.add(s.edge_count(), s.boundary_size);
    return sum;
}

namespace {

struct Explorer {
    const LatticePatch& patch;
    std::size_t n_max;
    std::size_t cap;
    std::vector<std::int8_t> state;  // -1 unrevealed, 0 vacant, 1 occupied
    std::vector<std::uint8_t> in_cluster;
    std::vector<VertexId> cluster;
    std::vector<ShapeSum> result;
    std::size_t leaves = 0;

    std::optional<EdgeId> next_edge() const {
        for (VertexId v : cluster)
            for (const auto& inc : patch.incident(v))
                if (state[inc.edge] < 0) return inc.edge;
        return std::nullopt;
    }

    void leaf(std::size_t slot, unsigned open, unsigned closed) {
        if (++leaves > cap) throw CapExceeded("exploration exceeded its cap");
        result[slot].add(open, closed);
    }

    void run(unsigned open, unsigned closed) {
        auto e = next_edge();
        if (!e) {
            leaf(cluster.size() - 1, open, closed);
            return;
        }
        state[*e] = 0;
        run(open, closed + 1);
        state[*e] = 1;
        const Edge& ed = patch.edge(*e);
        VertexId w = in_cluster[ed.a] ? ed.b : ed.a;
        if (in_cluster[w]) {
            run(open + 1, closed);
        } else if (cluster.size() == n_max) {
            leaf(n_max, open + 1, closed);
        } else {
            in_cluster[w] = 1;
            cluster.push_back(w);
            run(open + 1, closed);
            cluster.pop_back();
            in_cluster[w] = 0;
        }
        state[*e] = -1;
    }
};

}  // namespace

std::vector<ShapeSum> exploration_size_distribution(const LatticePatch& patch, VertexId o, std::size_t n_max,
                                                    std::size_t cap) {
    if (n_max == 0) throw InvalidArgument("n_max must be at least 1");
    Explorer ex{patch, n_max, resolve_cap(cap), std::vector<std::int8_t>(patch.edge_count(), -1),
                std::vector<std::uint8_t>(patch.vertex_count(), 0), {o}, std::vector<ShapeSum>(n_max + 1)};
    ex.in_cluster[o] = 1;
    ex.run(0, 0);
    return ex.result;
}

std::vector<std::vector<mpz_class>> brute_force_tally(const PatchPtr& patch, Mode mode,
                                                      const std::function<std::size_t(const Config&)>& classify,
                                                      std::size_t classes) {
    Config config = constant_config(patch, mode, false);
    const std::size_t units = config.occupied.size();
    if (units > kBruteForceMaxBits) throw CapExceeded("brute force needs at most 2^25 configurations");
    std::vector<std::vector<std::uint64_t>> counts(classes, std::vector<std::uint64_t>(units + 1, 0));
    std::size_t occupied = 0;
    const std::uint64_t total = std::uint64_t{1} << units;
    for (std::uint64_t i = 0; i < total; ++i) {
        if (i > 0) {
            auto bit = static_cast<std::size_t>(std::countr_zero(i));
            config.occupied[bit] ^= 1u;
            occupied += config.occupied[bit] ? 1 : std::size_t(-1);
        }
        std::size_t c = classify(config);
        if (c >= classes) throw InvalidArgument("classifier returned an out-of-range class");
        ++counts[c][occupied];
    }
    std::vector<std::vector<mpz_class>> out(classes, std::vector<mpz_class>(units + 1));
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t k = 0; k <= units; ++k) out[c][k] = mpz_class(std::to_string(counts[c][k]));
    return out;
}

mpq_class tally_probability(const std::vector<mpz_class>& counts, const mpq_class& p) {
    const auto units = static_cast<unsigned long>(counts.size() - 1);
    mpq_class q = 1 - p;
    mpq_class acc = 0;
    for (unsigned long k = 0; k <= units; ++k)
        if (counts[k] != 0) acc += mpq_class(counts[k]) * pow(p, k) * pow(q, units - k);
    return acc;
}

mpq_class brute_force_event_probability(const PatchPtr& patch, Mode mode,
                                        const std::function<bool(const Config&)>& predicate, const mpq_class& p) {
    if (p < 0 || p > 1) throw InvalidArgument("p must lie in [0,1]");
    auto tally = brute_force_tally(patch, mode, [&](const Config& c) { return predicate(c) ? 1u : 0u; }, 2);
    return tally_probability(tally[1], p);
}

std::size_t origin_cluster_size(const Config& config, ClusterExplorer& explorer) {
    VertexId o = config.patch->origin();
    if (!config.vertex_open(o)) return 0;
    return explorer.explore(o, [&](EdgeId e, VertexId) { return config.edge_open(e); }, false).size;
}

std::vector<mpz_class> partition_table(unsigned n_max) {
    std::vector<mpz_class> t(n_max + 1, 0);
    t[0] = 1;
    for (unsigned part = 1; part <= n_max; ++part)
        for (unsigned j = part; j <= n_max; ++j) t[j] += t[j - part];
    return t;
}

mpz_class count_partitions(unsigned n) { return partition_table(n)[n]; }

namespace {

double log_of(const mpz_class& z) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

}  // namespace

double hardy_ramanujan_ratio(unsigned n) {
    if (n == 0) throw InvalidArgument("n must be at least 1");
    const double nd = n;
    double log_asym = std::numbers::pi * std::sqrt(2.0 * nd / 3.0) - std::log(4.0 * nd * std::sqrt(3.0));
    return std::exp(log_of(count_partitions(n)) - log_asym);
}

mpz_class count_tree_animals(unsigned d, unsigned n, AnimalMethod method, std::size_t cap) {
    if (d < 3) throw InvalidArgument("d must be at least 3");
    if (n == 0) throw InvalidArgument("n must be at least 1");
    if (method == AnimalMethod::formula) {
        mpz_class a, b, c;
        mpz_fac_ui(a.get_mpz_t(), (d - 1) * n);
        mpz_fac_ui(b.get_mpz_t(), n - 1);
        mpz_fac_ui(c.get_mpz_t(), (d - 2) * n + 2);
        return mpz_class(d * a / (b * c));
    }
    cap = resolve_cap(cap);
    double tree_size = 1.0;
    for (unsigned k = 1; k < n; ++k) tree_size += d * std::pow(d - 1.0, k - 1.0);
    if (tree_size > 5e6) throw CapExceeded("tree patch for brute-force animal count too large");
    auto tree = build_tree_patch(static_cast<int>(d), static_cast<int>(std::max(1u, n)));
    std::uint64_t count = 0;
    for_each_connected_set(*tree, tree->origin(), n, [&](std::span<const VertexId> set) {
        if (set.size() == n) ++count;
    }, cap);
    return mpz_class(std::to_string(count));
}

AnimalBoundFit fit_tree_animal_bound(unsigned d, unsigned n_max) {
    AnimalBoundFit fit;
    fit.d = d;
    fit.n_max = n_max;
    const double log_base = std::log((d - 1.0) * std::numbers::e);
    double best = -std::numeric_limits<double>::infinity();
    for (unsigned n = 1; n <= n_max; ++n) {
        double lr = log_of(count_tree_animals(d, n, AnimalMethod::formula)) - n * log_base;
        if (lr > best) {
            best = lr;
            fit.argmax = n;
        }
    }
    fit.max_ratio = std::exp(best);
    fit.constant = mpz_class(static_cast<unsigned long>(std::floor(fit.max_ratio)) + 1);
    return fit;
}

}  // namespace perc
