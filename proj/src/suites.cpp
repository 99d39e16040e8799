#include "perc/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "perc/enumeration.hpp"
#include "perc/interfaces.hpp"
#include "perc/presentation.hpp"
#include "perc/series.hpp"

namespace perc {

bool SuiteResult::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

void SuiteResult::add(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
}

LongRangeModel asymmetric_model(std::size_t n) {
    if (n == 0 || n > 4) throw InvalidArgument("asymmetric model is defined on 1 to 4 vertices");
    const std::vector<LongRangeModel::Pair> all{
        {0, 1, mpq_class(1)},    {0, 2, mpq_class(1, 3)}, {0, 3, mpq_class(2, 3)},
        {1, 2, mpq_class(1, 2)}, {1, 3, mpq_class(1, 4)}, {2, 3, mpq_class(3, 4)},
    };
    std::vector<LongRangeModel::Pair> kept;
    for (const auto& p : all)
        if (p.b < n) kept.push_back(p);
    return LongRangeModel(n, kept);
}

std::vector<std::pair<std::string, LongRangeModel>> alternation_models(std::size_t max_vertices) {
    std::vector<std::pair<std::string, LongRangeModel>> out;
    for (std::size_t n = 1; n <= max_vertices; ++n) {
        const std::string tag = "n=" + std::to_string(n);
        out.emplace_back("uniform(1) " + tag, LongRangeModel::uniform(n, 1));
        out.emplace_back("uniform(1/2) " + tag, LongRangeModel::uniform(n, mpq_class(1, 2)));
        if (n <= 4) out.emplace_back("asymmetric " + tag, asymmetric_model(n));
    }
    return out;
}

SuiteResult alternation_suite(const AlternationOptions& opts) {
    SuiteResult result{"alternation", {}};
    for (const auto& [name, model] : alternation_models(opts.max_vertices)) {
        const std::size_t n = model.vertex_count();
        std::size_t at_zero = 0, at_negative = 0, zero_order = 0, f_bad = 0;
        std::ostringstream where;
        ExpSum total;
        ExpSum below;  // sum_{i<m} p_i
        for (std::size_t m = 1; m <= n; ++m) {
            ExpSum pm = pm_expsum(model, m);
            total += pm;
            ExpSum fm = ExpSum::constant(1) - below;
            below += pm;
            if (m > opts.m_max) continue;
            const int eps = static_cast<int>(m + 1);

            auto slice = maclaurin(pm, opts.k_max, 0);
            if (auto k = slice.alternation_violation(eps)) {
                ++at_zero;
                where << " p" << m << "[" << *k << "]@0";
            }
            if (slice.zero_order() + 1 < m) {
                ++zero_order;
                where << " ord(p" << m << ")=" << slice.zero_order();
            }
            auto fslice = maclaurin(fm, opts.k_max, 0);
            if (fslice.alternation_violation(eps) || fslice.zero_order() + 1 < m) {
                ++f_bad;
                where << " f" << m;
            }
            for (const auto& r : opts.negative_origins) {
                auto s = maclaurin(pm, opts.k_max, r);
                if (auto k = s.alternation_violation(eps)) {
                    ++at_negative;
                    where << " p" << m << "[" << *k << "]@" << perc::to_string(r);
                }
            }
        }
        const std::string bad = where.str();
        result.add(name + ": signs of p_m at 0", at_zero == 0, bad);
        result.add(name + ": signs of p_m at r<0", at_negative == 0, bad);
        result.add(name + ": zero order of p_m", zero_order == 0, bad);
        result.add(name + ": signs and zero order of f_m", f_bad == 0, bad);
        result.add(name + ": sum of p_m is 1", total == ExpSum::constant(1), total.to_string());
    }
    return result;
}

namespace {

template <class T>
bool is_subset(const std::vector<T>& small, const std::vector<T>& big) {
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

void note(UniquenessStats& st, std::string text) {
    if (st.examples.size() < 20) st.examples.push_back(std::move(text));
}

// Checks shared by planar and cube P-interfaces.
bool p_interface_ok(const Config& config, const Cluster& cluster, const PInterface& pi, UniquenessStats& st,
                    double d_pow_t) {
    const LatticePatch& patch = *config.patch;
    bool ok = true;
    auto report = verify_p_interface(patch, pi, cluster.vertices.front(), &config);
    if (!report.valid) ok = false;
    if (!p_interface_occurs(config, pi)) ok = false;
    if (!is_subset(pi.i_o, cluster.edges) || !is_subset(pi.i_v, cluster.boundary)) ok = false;
    if (!is_subset(cluster.vertices, pi.witness)) ok = false;
    if (!pi.i_o.empty()) {
        double ratio = static_cast<double>(pi.i_v.size()) * d_pow_t / static_cast<double>(pi.i_o.size());
        st.min_port_ratio = std::min(st.min_port_ratio, ratio);
        if (ratio < 1.0) ++st.port_violations;
    }
    return ok;
}

}  // namespace

SuiteResult uniqueness_suite(const UniquenessOptions& opts, UniquenessStats* stats_out) {
    UniquenessStats st;
    st.min_boundary_ratio = std::numeric_limits<double>::infinity();
    st.min_port_ratio = std::numeric_limits<double>::infinity();

    auto square = build_square_patch(opts.radius);
    const DualPatch dual = dual_patch(square);
    const double square_dt = std::pow(4.0, 4.0);
    for (double p : opts.planar_p) {
        for (std::uint64_t s = 0; s < opts.planar_samples; ++s) {
            ++st.planar_configs;
            Config config = sample_config(square, Mode::bond, p, opts.seed, s);
            Cluster c = cluster_of(config, square->origin());
            if (c.touches_escape) continue;
            ++st.planar_finite;
            const std::string tag = "p=" + fmt(p) + " sample=" + std::to_string(s);

            PlanarInterface si = extract_planar_interface(config, c);
            bool ok = interface_occurs(config, si) && is_subset(si.vertices, c.vertices) &&
                      is_subset(si.inner, c.edges) && is_subset(si.outer, c.boundary);
            std::size_t meeting = 0;
            bool matches = false;
            for (const auto& other : occurring_interfaces(config)) {
                bool meets = std::any_of(other.vertices.begin(), other.vertices.end(),
                                         [&](VertexId v) { return c.contains(v); });
                if (!meets) continue;
                ++meeting;
                matches = matches || other == si;
            }
            if (!ok || meeting != 1 || !matches) {
                ++st.planar_violations;
                note(st, "planar " + tag + " meeting=" + std::to_string(meeting));
            }
            if (!si.inner.empty()) {
                double ratio = static_cast<double>(si.outer.size()) / static_cast<double>(si.inner.size());
                st.min_boundary_ratio = std::min(st.min_boundary_ratio, ratio);
                if (2 * si.outer.size() < si.inner.size()) ++st.boundary_ratio_violations;
            }

            try {
                PInterface pi = extract_p_interface(config, c);
                if (!p_interface_ok(config, c, pi, st, square_dt)) {
                    ++st.planar_violations;
                    note(st, "square P-interface " + tag);
                }
                if (pi.i_v != si.outer || pi.i_o != si.inner) {
                    ++st.p_agreement_failures;
                    note(st, "P-interface differs from planar interface " + tag);
                }
            } catch (const PatchTooSmall&) {
            }

            for (const auto& multi : occurring_multi_interfaces(config, opts.multi_cap)) {
                ++st.multi_checked;
                if (dual_boundary_components(dual, multi) != multi.count()) {
                    ++st.dual_count_violations;
                    note(st, "dual components " + tag);
                }
            }
        }
    }

    if (opts.cube_samples > 0 && !opts.cube_p.empty()) {
        auto cube = build_cayley_patch(Presentation::free_abelian(3), opts.cube_radius);
        const double cube_dt = std::pow(6.0, static_cast<double>(cube->basis().max_length));
        for (double p : opts.cube_p) {
            for (std::uint64_t s = 0; s < opts.cube_samples; ++s) {
                ++st.cube_configs;
                Config config = sample_config(cube, Mode::bond, p, opts.seed, s);
                std::vector<std::uint8_t> seen(cube->vertex_count(), 0);
                for (VertexId v = 0; v < cube->vertex_count(); ++v) {
                    if (seen[v]) continue;
                    Cluster c = cluster_of(config, v);
                    for (VertexId u : c.vertices) seen[u] = 1;
                    if (c.touches_escape) continue;
                    try {
                        PInterface pi = extract_p_interface(config, c);
                        ++st.cube_clusters;
                        if (!p_interface_ok(config, c, pi, st, cube_dt)) {
                            ++st.cube_violations;
                            note(st, "cube p=" + fmt(p) + " sample=" + std::to_string(s) + " vertex=" + std::to_string(v));
                        }
                    } catch (const PatchTooSmall&) {
                        ++st.cube_too_small;
                    }
                }
            }
        }
    }

    SuiteResult result{"uniqueness", {}};
    result.add("planar interfaces unique and occurring", st.planar_violations == 0,
               std::to_string(st.planar_finite) + " finite clusters in " + std::to_string(st.planar_configs) +
                   " configs, " + std::to_string(st.planar_violations) + " violations");
    result.add("P-interfaces equal planar interfaces on Z^2", st.p_agreement_failures == 0,
               std::to_string(st.p_agreement_failures) + " mismatches");
    result.add("cube P-interfaces unique and occurring", st.cube_violations == 0,
               std::to_string(st.cube_clusters) + " finite clusters in " + std::to_string(st.cube_configs) +
                   " configs, " + std::to_string(st.cube_too_small) + " too close to the boundary, " +
                   std::to_string(st.cube_violations) + " violations");
    result.add("|outer| >= |inner|/2", st.boundary_ratio_violations == 0,
               "min |outer|/|inner| = " + fmt(st.min_boundary_ratio));
    result.add("|I_V| >= |I_O|/d^t", st.port_violations == 0, "min |I_V| d^t/|I_O| = " + fmt(st.min_port_ratio));
    result.add("dual components equal c(M)", st.dual_count_violations == 0,
               std::to_string(st.multi_checked) + " multi-interfaces");
    if (stats_out) *stats_out = std::move(st);
    return result;
}

SuiteResult bounds_suite(const BoundsOptions& opts) {
    SuiteResult result{"bounds", {}};
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Cluster shapes up to 6 vertices on Z^2.
    auto square = build_square_patch(8);
    std::vector<ClusterShape> shapes;
    for (std::size_t n = 1; n <= 6; ++n) {
        auto batch = enumerate_clusters(*square, square->origin(), n);
        shapes.insert(shapes.end(), batch.begin(), batch.end());
    }
    std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
    std::size_t cluster_bad = 0;
    double worst = 0.0;
    for (std::uint64_t i = 0; i < opts.shapes; ++i) {
        const ClusterShape& shape = shapes[pick(rng)];
        const double x = 0.95 * unit(rng);
        const double M = (1.0 - x) * (0.02 + 0.96 * unit(rng));
        DiscCheck dc = cluster_disc_check(shape, x, M, opts.points);
        worst = std::max(worst, dc.sampled_sup / dc.bound);
        if (!dc.holds()) ++cluster_bad;
    }
    result.add("|P(z)| <= c^|dS| P(x+M) on random shapes", cluster_bad == 0,
               std::to_string(opts.shapes) + " shapes, max ratio " + fmt(worst));

    // Long-range p_m on normalized models (row sums at most 1).
    std::vector<LongRangeModel> models;
    for (std::size_t n = 2; n <= 4; ++n) {
        models.push_back(LongRangeModel::uniform(n, mpq_class(1, static_cast<long>(n - 1))));
        models.push_back(LongRangeModel::path(n, mpq_class(1, 2)));
        auto asym = asymmetric_model(n);
        std::vector<LongRangeModel::Pair> half;
        for (const auto& p : asym.pairs()) half.push_back({p.a, p.b, p.mu / 2});
        models.emplace_back(n, half);
    }
    std::vector<std::pair<std::size_t, ExpSum>> pms;
    for (const auto& model : models)
        for (std::size_t m = 1; m <= model.vertex_count(); ++m) pms.emplace_back(m, pm_expsum(model, m));
    std::uniform_int_distribution<std::size_t> pick_pm(0, pms.size() - 1);
    std::size_t pm_bad = 0;
    worst = 0.0;
    for (std::uint64_t i = 0; i < opts.shapes; ++i) {
        const auto& [m, pm] = pms[pick_pm(rng)];
        const double x = 3.0 * unit(rng);
        const double M = 0.05 + 1.95 * unit(rng);
        DiscCheck dc = pm_disc_check(pm, m, x, M, opts.points);
        if (dc.bound > 0) worst = std::max(worst, dc.sampled_sup / dc.bound);
        if (!dc.holds()) ++pm_bad;
    }
    result.add("|p_m(z)| <= e^{2Mm} p_m(x+M) on normalized models", pm_bad == 0,
               std::to_string(opts.shapes) + " discs, max ratio " + fmt(worst));

    // Peierls constants for Z^d against ((4d-2)^2 - 1) e.
    bool peierls_ok = true;
    std::ostringstream pd;
    for (int d = 2; d <= 4; ++d) {
        PeierlsBound b = peierls_bound(Presentation::free_abelian(d));
        const double want = (std::pow(4.0 * d - 2.0, 2.0) - 1.0) * std::numbers::e;
        const bool ok = std::abs(b.gamma - want) <= 1e-12 * want && b.p_bound > 0.0 && b.p_bound < 1.0;
        peierls_ok = peierls_ok && ok;
        pd << " d=" << d << " gamma=" << fmt(b.gamma) << " p=" << fmt(b.p_bound);
    }
    result.add("Peierls constants for Z^d", peierls_ok, pd.str());

    // Subtrees of T_d: S_n < c_d b^n with b = (d-1)^{d-1}/(d-2)^{d-2} < (d-1)e and
    // c_d = (d-1)/(d-2)^2 from Pr(|C| = n) <= 1 at p = 1/(d-1). Exact form:
    // S_n (d-2)^{(d-2)n+2} < (d-1)^{(d-1)n+1}.
    bool animals_ok = true;
    std::ostringstream ad;
    for (unsigned d = 3; d <= opts.animal_d_max; ++d) {
        unsigned first_bad = 0;
        double worst = 0.0;
        for (unsigned n = 1; n <= opts.animal_n_max; ++n) {
            mpz_class lhs = count_tree_animals(d, n, AnimalMethod::formula), rhs;
            mpz_class scale;
            mpz_ui_pow_ui(scale.get_mpz_t(), d - 2, (d - 2) * n + 2);
            mpz_ui_pow_ui(rhs.get_mpz_t(), d - 1, (d - 1) * n + 1);
            lhs *= scale;
            worst = std::max(worst, mpq_class(lhs, rhs).get_d());
            if (lhs >= rhs && first_bad == 0) first_bad = n;
        }
        const double log_b = (d - 1.0) * std::log(d - 1.0) - (d - 2.0) * std::log(d - 2.0);
        const bool ok = first_bad == 0 && log_b < std::log((d - 1.0) * std::numbers::e);
        animals_ok = animals_ok && ok;
        ad << " d=" << d << " max S_n/(c_d b^n)=" << fmt(worst) << (ok ? "" : " fails at n=" + std::to_string(first_bad));
    }
    result.add("tree animal bound", animals_ok, ad.str());

    // Subtrees of Z^2 through o are at most those of T_4.
    bool lattice_ok = true;
    std::ostringstream ld;
    for (unsigned n = 1; n <= 6; ++n) {
        auto shapes_n = enumerate_clusters(*square, square->origin(), n);
        const auto trees = std::count_if(shapes_n.begin(), shapes_n.end(),
                                         [&](const ClusterShape& s) { return s.edges.size() + 1 == n; });
        mpz_class bound = count_tree_animals(4, n, AnimalMethod::formula);
        if (mpz_class(static_cast<long>(trees)) > bound) lattice_ok = false;
        ld << " n=" << n << ":" << trees << "<=" << bound.get_str();
    }
    result.add("subtrees of Z^2 bounded by T_4", lattice_ok, ld.str());
    return result;
}

}  // namespace perc
