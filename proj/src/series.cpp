#include <algorithm>
#include <cmath>
#include <numbers>

#include "perc/error.hpp"
#include "perc/series.hpp"

namespace perc {

ComplexValue eval_cluster_prob_complex(const ClusterShape& shape, std::complex<double> z) {
    std::complex<double> v = std::pow(1.0 - z, static_cast<int>(shape.boundary_size)) *
                             std::pow(z, static_cast<int>(shape.edge_count()));
    return {v.real(), v.imag(), std::nullopt};
}

ComplexValue eval_cluster_prob_exact(const ClusterShape& shape, const mpq_class& x) {
    mpq_class v = pow(1 - x, shape.boundary_size) * pow(x, shape.edge_count());
    ComplexValue out = eval_cluster_prob_complex(shape, {x.get_d(), 0.0});
    out.exact = v;
    return out;
}

ExpSum lr_event_expsum(const std::vector<VertexId>& vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
                       const LongRangeModel& model) {
    ExpSum s = ExpSum::exponential(1, model.incident_weight(vertices));
    for (auto [a, b] : edges) {
        const mpq_class& mu = model.weight(a, b);
        if (mu == 0) throw InvalidArgument("edge of S has zero weight");
        s = s * (ExpSum::exponential(1, -mu) - ExpSum::constant(1));
    }
    return s;
}

ExpSum pm_expsum(const LongRangeModel& model, std::size_t m, std::size_t cap) {
    ExpSum total;
    if (m == 0 || m > model.vertex_count()) return total;
    const LatticePatch& support = *model.support();
    if (cap == 0) cap = enumeration_cap(kDefaultShapeCap);
    for_each_connected_set(support, 0, m, [&](std::span<const VertexId> set) {
        if (set.size() != m) return;
        std::vector<VertexId> sorted(set.begin(), set.end());
        std::sort(sorted.begin(), sorted.end());
        auto induced = induced_edges(support, sorted);
        std::vector<std::pair<VertexId, VertexId>> pairs;
        if (induced.size() + 1 == m) {
            for (EdgeId e : induced) pairs.emplace_back(support.edge(e).a, support.edge(e).b);
            total += lr_event_expsum(sorted, pairs, model);
            return;
        }
        if (induced.size() > 30) throw CapExceeded("too many pairs inside a vertex set for spanning-subgraph enumeration");
        std::vector<Edge> ends;
        for (EdgeId e : induced) ends.push_back(support.edge(e));
        for (std::uint64_t mask : spanning_connected_subsets(sorted, ends)) {
            pairs.clear();
            for (std::size_t i = 0; i < induced.size(); ++i)
                if (mask >> i & 1u) pairs.emplace_back(ends[i].a, ends[i].b);
            total += lr_event_expsum(sorted, pairs, model);
        }
    }, cap);
    return total;
}

ExpSum fm_expsum(const LongRangeModel& model, std::size_t m, std::size_t cap) {
    ExpSum f = ExpSum::constant(1);
    for (std::size_t i = 1; i < m; ++i) f -= pm_expsum(model, i, cap);
    return f;
}

std::vector<std::complex<double>> disc_points(std::complex<double> centre, double radius, std::size_t count) {
    std::vector<std::complex<double>> pts;
    pts.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        pts.push_back(centre + std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count)));
    return pts;
}

DiscCheck cluster_disc_check(const ClusterShape& shape, double x, double M, std::size_t points) {
    if (M <= 0 || x + M >= 1.0) throw InvalidArgument("disc must satisfy M > 0 and x + M < 1");
    DiscCheck out;
    for (auto z : disc_points({x, 0.0}, M, points))
        out.sampled_sup = std::max(out.sampled_sup, eval_cluster_prob_complex(shape, z).modulus());
    const double c = (1.0 - x + M) / (1.0 - x - M);
    out.bound = std::pow(c, shape.boundary_size) * eval_cluster_prob_complex(shape, {x + M, 0.0}).re;
    return out;
}

DiscCheck pm_disc_check(const ExpSum& pm, std::size_t m, double x, double M, std::size_t points) {
    if (M <= 0) throw InvalidArgument("disc radius must be positive");
    DiscCheck out;
    for (auto z : disc_points({x, 0.0}, M, points)) out.sampled_sup = std::max(out.sampled_sup, std::abs(pm(z)));
    out.bound = std::exp(2.0 * M * static_cast<double>(m)) * pm(x + M);
    return out;
}

ThetaSeries theta_series_planar(const LatticePatch& patch, double p, std::size_t max_boundary, std::size_t cap) {
    if (p < 0.0 || p > 1.0) throw InvalidArgument("p must lie in [0,1]");
    InterfaceCatalog catalog = enumerate_planar_interfaces(patch, max_boundary, cap);
    const auto& list = catalog.interfaces;
    ThetaSeries out;
    out.interface_count = list.size();
    std::vector<ShapeSum> rings(max_boundary + 1);
    std::vector<std::size_t> counts(max_boundary + 1, 0);

    // Depth-first over pairwise vertex-disjoint subsets, tracking |∪ ∂S_i|.
    std::vector<std::uint32_t> vertex_use(patch.vertex_count(), 0), edge_use(patch.edge_count(), 0);
    std::size_t boundary = 0, inner = 0, parts = 0;
    std::function<void(std::size_t)> extend = [&](std::size_t from) {
        for (std::size_t i = from; i < list.size(); ++i) {
            const auto& s = list[i];
            if (s.outer.size() > max_boundary) break;
            if (std::any_of(s.vertices.begin(), s.vertices.end(), [&](VertexId v) { return vertex_use[v] != 0; }))
                continue;
            std::size_t added = 0;
            for (EdgeId e : s.outer) added += edge_use[e] == 0 ? 1 : 0;
            if (boundary + added > max_boundary) continue;
            for (VertexId v : s.vertices) ++vertex_use[v];
            for (EdgeId e : s.outer) ++edge_use[e];
            boundary += added;
            inner += s.inner.size();
            ++parts;
            rings[boundary].add(static_cast<unsigned>(inner), static_cast<unsigned>(boundary), parts % 2 == 1 ? 1 : -1);
            ++counts[boundary];
            extend(i + 1);
            --parts;
            inner -= s.inner.size();
            boundary -= added;
            for (EdgeId e : s.outer) --edge_use[e];
            for (VertexId v : s.vertices) --vertex_use[v];
        }
    };
    extend(0);

    std::size_t first = 0;
    while (first <= max_boundary && counts[first] == 0) ++first;
    double running = 0.0;
    for (std::size_t n = first; n <= max_boundary; ++n) {
        double magnitude = 0.0;
        for (const auto& [key, c] : rings[n].terms()) magnitude += std::abs(c.get_d()) * std::pow(p, key.first) * std::pow(1.0 - p, key.second);
        running += rings[n](p);
        out.caps.push_back(n);
        out.rings.push_back(rings[n]);
        out.ring_magnitude.push_back(magnitude);
        out.partial.push_back(running);
        out.theta.push_back(1.0 - running);
        out.multi_counts.push_back(counts[n]);
    }
    return out;
}

ChiSeries chi_series(const LatticePatch& patch, const mpq_class& p, std::size_t m_max, std::size_t cap) {
    if (p < 0 || p > 1) throw InvalidArgument("p must lie in [0,1]");
    auto dist = exploration_size_distribution(patch, patch.origin(), m_max, cap);
    ChiSeries out;
    mpq_class sum = 0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        sum += mpq_class(static_cast<unsigned long>(m)) * dist[m - 1](p);
        out.exact.push_back(sum);
        out.partial.push_back(sum.get_d());
    }
    return out;
}

ChiSeries chi_series(const LongRangeModel& model, double t, std::size_t m_max, std::size_t cap) {
    if (t < 0) throw InvalidArgument("t must be non-negative");
    ChiSeries out;
    BigFloat sum = 0;
    for (std::size_t m = 1; m <= m_max; ++m) {
        sum += BigFloat(m) * BigFloat(pm_expsum(model, m, cap)(t));
        out.partial.push_back(static_cast<double>(sum));
    }
    return out;
}

TreeTheta tree_theta(unsigned d, double p) {
    if (d < 3) throw InvalidArgument("tree degree must be at least 3");
    if (p < 0.0 || p > 1.0) throw InvalidArgument("p must lie in [0,1]");
    TreeTheta out;
    const double pc = 1.0 / (d - 1.0);
    if (p <= pc) return out;
    if (d == 3) {
        out.theta_rooted = (2.0 * p - 1.0) / (p * p);
    } else {
        // g(x) = 1 - x - (1-px)^{d-1} is concave with g(0) = 0 and g'(0) > 0;
        // the non-zero root lies right of the maximiser.
        auto g = [&](double x) { return 1.0 - x - std::pow(1.0 - p * x, d - 1.0); };
        double lo = (1.0 - std::pow(p * (d - 1.0), -1.0 / (d - 2.0))) / p, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            double mid = 0.5 * (lo + hi);
            (g(mid) > 0 ? lo : hi) = mid;
        }
        out.theta_rooted = 0.5 * (lo + hi);
    }
    out.theta = 1.0 - std::pow(1.0 - p * out.theta_rooted, static_cast<double>(d));
    return out;
}

std::pair<mpq_class, mpq_class> tree_theta_exact_d3(const mpq_class& p) {
    if (p < 0 || p > 1) throw InvalidArgument("p must lie in [0,1]");
    if (p <= mpq_class(1, 2)) return {0, 0};
    mpq_class rooted = (2 * p - 1) / (p * p);
    mpq_class q = (1 - p) / p;
    return {rooted, 1 - q * q * q};
}

namespace {

double fitted_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

NegativeThreshold negative_threshold(const std::function<ExpSum(std::size_t)>& family, const std::vector<double>& grid,
                                     std::size_t m_max) {
    if (m_max < 4) throw InvalidArgument("m_max must be at least 4");
    if (grid.size() < 2) throw InvalidArgument("grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i] >= 0 || (i > 0 && grid[i] <= grid[i - 1]))
            throw InvalidArgument("grid must be increasing and negative");
    const std::size_t m_lo = m_max / 2;
    std::vector<ExpSum> pm;
    for (std::size_t m = m_lo; m <= m_max; ++m) pm.push_back(family(m));

    NegativeThreshold out;
    std::vector<std::vector<double>> logs_on_grid;
    auto logs_at = [&](double r) {
        std::vector<double> logs;
        for (const auto& f : pm) logs.push_back(f.log_abs(r));
        return logs;
    };
    auto rates = [&](const std::vector<double>& logs) {
        std::vector<double> xs, ys, zs;
        for (std::size_t j = 0; j < logs.size(); ++j) {
            if (!std::isfinite(logs[j])) continue;
            double m = static_cast<double>(m_lo + j);
            xs.push_back(m);
            ys.push_back(logs[j]);
            zs.push_back(logs[j] + std::log(m));
        }
        if (xs.size() < 2) return std::pair{0.0, 0.0};
        return std::pair{std::exp(fitted_slope(xs, ys)), std::exp(fitted_slope(xs, zs))};
    };

    for (double r : grid) {
        auto logs = logs_at(r);
        auto [rate, chi] = rates(logs);
        out.grid.push_back({r, rate, chi});
        logs_on_grid.push_back(std::move(logs));
    }
    for (std::size_t i = 1; i < grid.size(); ++i)
        for (std::size_t j = 0; j < pm.size(); ++j)
            if (logs_on_grid[i][j] > logs_on_grid[i - 1][j] + 1e-12 * std::max(1.0, std::abs(logs_on_grid[i - 1][j]))) {
                ++out.monotonicity_violations;
                out.diagnostics.push_back("|p_" + std::to_string(m_lo + j) + "| increases between r=" +
                                          std::to_string(grid[i - 1]) + " and r=" + std::to_string(grid[i]));
            }

    auto crossing = [&](bool chi, double& result) {
        auto value = [&](double r) {
            auto [rate, c] = rates(logs_at(r));
            return (chi ? c : rate) - 1.0;
        };
        for (std::size_t i = 0; i + 1 < out.grid.size(); ++i) {
            double a = (chi ? out.grid[i].chi_rate : out.grid[i].rate) - 1.0;
            double b = (chi ? out.grid[i + 1].chi_rate : out.grid[i + 1].rate) - 1.0;
            if (a > 0 && b <= 0) {
                double lo = grid[i], hi = grid[i + 1];
                for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (value(mid) > 0 ? lo : hi) = mid;
                }
                result = 0.5 * (lo + hi);
                return;
            }
        }
        result = std::numeric_limits<double>::quiet_NaN();
        out.diagnostics.push_back(std::string(chi ? "chi" : "rate") + " criterion does not cross 1 on the grid");
    };
    crossing(false, out.t1);
    crossing(true, out.t1_chi);
    return out;
}

DiscMaximum max_modulus_disc(const ExpSum& f, double M, std::size_t points, std::size_t check_terms) {
    if (M <= 0) throw InvalidArgument("radius must be positive");
    MaclaurinSlice slice = maclaurin(f, check_terms, 0);
    if (slice.alternation_violation(0) && slice.alternation_violation(1))
        throw InvalidArgument("Maclaurin coefficients do not alternate");
    DiscMaximum out;
    out.value = std::abs(f(-M));
    for (auto z : disc_points({0.0, 0.0}, M, points)) out.sampled_sup = std::max(out.sampled_sup, std::abs(f(z)));
    return out;
}

bool hadamard_check(const ExpSum& f, double r1, double r, double r2) {
    if (!(r1 > 0 && r1 <= r && r <= r2 && r1 < r2)) throw InvalidArgument("radii must satisfy 0 < r1 <= r <= r2, r1 < r2");
    const double m1 = max_modulus_disc(f, r1).value, m = max_modulus_disc(f, r).value, m2 = max_modulus_disc(f, r2).value;
    if (m == 0.0) return true;
    if (m1 == 0.0 || m2 == 0.0) return false;
    const double span = std::log(r2 / r1);
    const double rhs = (std::log(r2 / r) * std::log(m1) + std::log(r / r1) * std::log(m2)) / span;
    return std::log(m) <= rhs + 1e-12 * std::max(1.0, std::abs(rhs));
}

}  // namespace perc
