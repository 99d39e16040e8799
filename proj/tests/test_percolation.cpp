#include <cmath>

#include "doctest.h"
#include "perc/enumeration.hpp"
#include "perc/percolation.hpp"

using namespace perc;

namespace {

// |x - want| within k standard errors (with a floor for exact hits).
bool within(const Estimate& e, double want, double k = 4.0) {
    return std::abs(e.value - want) <= k * std::max(e.std_error, 1e-3);
}

}  // namespace

TEST_CASE("counter-based uniforms are deterministic") {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        double u = uniform01(9, 2, i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == uniform01(9, 2, i));
    }
    CHECK(uniform01(9, 2, 0) != uniform01(9, 3, 0));
}

TEST_CASE("same seed and sample give the same configuration") {
    auto p = build_square_patch(5);
    Config a = sample_config(p, Mode::bond, 0.5, 4, 17);
    Config b = sample_config(p, Mode::bond, 0.5, 4, 17);
    CHECK(a.occupied == b.occupied);
    Config c = sample_config(p, Mode::bond, 0.5, 4, 18);
    CHECK(a.occupied != c.occupied);
}

TEST_CASE("theta at the extremes") {
    auto p = build_square_patch(6);
    CHECK(estimate_theta(p, Mode::bond, 0.0, 200, 1).value == 0.0);
    CHECK(estimate_theta(p, Mode::bond, 1.0, 200, 1).value == 1.0);
    Cluster all = cluster_of(constant_config(p, Mode::bond, true), p->origin());
    CHECK(all.vertices.size() == p->vertex_count());
    CHECK(all.touches_escape);
    Cluster none = cluster_of(constant_config(p, Mode::bond, false), p->origin());
    CHECK(none.vertices.size() == 1);
    CHECK(none.boundary.size() == 4);
}

TEST_CASE("half-line closed forms") {
    const int L = 6;
    auto line = build_half_line_patch(L);
    const double p = 0.7;
    // theta = p^L; escaping clusters count 0 in chi; the tail includes escape
    CHECK(within(estimate_theta(line, Mode::bond, p, 20000, 3), std::pow(p, L)));
    double chi = 0;
    for (int j = 0; j < L; ++j) chi += (j + 1) * std::pow(p, j) * (1 - p);
    CHECK(within(estimate_chi_truncated(line, Mode::bond, p, 20000, 3), chi));
    CHECK(within(tail_probability(line, Mode::bond, p, 3, 20000, 3), std::pow(p, 2)));

    auto target = *line->find_vertex({2});
    auto tau = estimate_tau(line, Mode::bond, {line->origin(), target}, p, 20000, 3);
    CHECK_THROWS_AS(estimate_tau(line, Mode::bond, {target}, p, 10, 3), InvalidArgument);
    CHECK(within(tau.tau, p * p));
    CHECK(within(tau.tau_f, p * p - std::pow(p, L)));
}

TEST_CASE("estimates do not depend on the thread count") {
    auto p = build_square_patch(8);
    auto one = estimate_theta(p, Mode::bond, 0.55, 3000, 5, {1});
    auto four = estimate_theta(p, Mode::bond, 0.55, 3000, 5, {4});
    CHECK(one.value == four.value);
    CHECK(one.std_error == four.std_error);
}

TEST_CASE("Monte Carlo agrees with brute force on a small box") {
    auto box = build_square_box(-1, 2, -1, 1);
    for (Mode mode : {Mode::bond, Mode::site}) {
        mpq_class exact = brute_force_event_probability(
            box, mode, [&](const Config& c) { return cluster_of(c, box->origin()).touches_escape; }, mpq_class(3, 5));
        CHECK(within(estimate_theta(box, mode, 0.6, 40000, 11), exact.get_d()));
    }
}

TEST_CASE("site mode: a vacant origin has an empty cluster") {
    auto p = build_square_patch(3);
    Config c = constant_config(p, Mode::site, false);
    Cluster cl = cluster_of(c, p->origin());
    CHECK(cl.vertices.empty());
    CHECK(cl.boundary.size() == 4);
}

TEST_CASE("long-range models") {
    auto m = LongRangeModel::uniform(4, mpq_class(1, 3));
    CHECK(m.normalized());
    CHECK(m.row_sum(0) == 1);
    CHECK(m.incident_weight({0}) == 1);
    CHECK(m.incident_weight({0, 1}) == mpq_class(5, 3));
    CHECK_FALSE(LongRangeModel::uniform(4, 1).normalized());
    CHECK(LongRangeModel::path(5, 1).support()->edge_count() == 4);
    CHECK_THROWS_AS(LongRangeModel(3, {{0, 1, mpq_class(1)}, {1, 0, mpq_class(2)}}), InvalidArgument);
    CHECK_THROWS_AS(LongRangeModel(3, {{0, 3, mpq_class(1)}}), InvalidArgument);

    // Each pair is occupied with probability 1 - e^{-t mu}.
    auto k2 = LongRangeModel::uniform(2, 1);
    std::uint64_t open = 0;
    for (std::uint64_t s = 0; s < 20000; ++s) open += sample_config(k2, 1.0, 2, s).occupied[0];
    double want = 1 - std::exp(-1.0);
    CHECK(std::abs(open / 20000.0 - want) < 4 * std::sqrt(want * (1 - want) / 20000));
}
