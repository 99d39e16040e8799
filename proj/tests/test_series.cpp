#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "perc/series.hpp"

using namespace perc;

namespace {

// Pr_t(|C(0)| = m) on a model by summing over all 2^pairs configurations.
double brute_pm(const LongRangeModel& model, std::size_t m, double t) {
    const auto& pairs = model.pairs();
    double total = 0;
    for (std::uint64_t mask = 0; mask < (1ull << pairs.size()); ++mask) {
        double prob = 1;
        std::vector<VertexId> parent(model.vertex_count());
        for (VertexId v = 0; v < parent.size(); ++v) parent[v] = v;
        auto find = [&](VertexId v) {
            while (parent[v] != v) v = parent[v];
            return v;
        };
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            double q = 1 - std::exp(-t * pairs[i].mu.get_d());
            if (mask >> i & 1) {
                prob *= q;
                parent[find(pairs[i].a)] = find(pairs[i].b);
            } else {
                prob *= 1 - q;
            }
        }
        std::size_t size = 0;
        for (VertexId v = 0; v < parent.size(); ++v) size += find(v) == find(0);
        if (size == m) total += prob;
    }
    return total;
}

std::vector<mpq_class> coeffs(const ExpSum& f, std::size_t k) { return maclaurin(f, k, 0).exact; }

}  // namespace

TEST_CASE("event expansions on K2") {
    auto k2 = LongRangeModel::uniform(2, 1);
    CHECK(lr_event_expsum({0}, {}, LongRangeModel::uniform(1, 1)) == ExpSum::constant(1));
    CHECK(pm_expsum(k2, 1) == ExpSum::exponential(1, 1));
    CHECK(pm_expsum(k2, 2).to_string() == "1 - exp(-t)");
    CHECK(lr_event_expsum({0, 1}, {{0, 1}}, k2) == pm_expsum(k2, 2));
}

TEST_CASE("p_m on K3 with weight 1/2") {
    auto k3 = LongRangeModel::uniform(3, mpq_class(1, 2));
    ExpSum p1 = pm_expsum(k3, 1), p2 = pm_expsum(k3, 2), p3 = pm_expsum(k3, 3);
    CHECK(p1.to_string() == "exp(-t)");
    CHECK(p1 + p2 + p3 == ExpSum::constant(1));
    for (double t : {0.5, 1.0, 2.0}) {
        CHECK(p2(t) == doctest::Approx(brute_pm(k3, 2, t)).epsilon(1e-12));
        CHECK(p3(t) == doctest::Approx(brute_pm(k3, 3, t)).epsilon(1e-12));
    }
    CHECK(fm_expsum(k3, 3) == p3);
}

TEST_CASE("p_m matches brute force on the asymmetric model") {
    LongRangeModel m(4, {{0, 1, mpq_class(1)}, {0, 2, mpq_class(1, 3)}, {1, 3, mpq_class(1, 4)}, {2, 3, mpq_class(3, 4)}});
    ExpSum total;
    for (std::size_t k = 1; k <= 4; ++k) {
        ExpSum pk = pm_expsum(m, k);
        total += pk;
        for (double t : {0.3, 1.7}) CHECK(pk(t) == doctest::Approx(brute_pm(m, k, t)).epsilon(1e-12));
    }
    CHECK(total == ExpSum::constant(1));
}

TEST_CASE("Maclaurin slices at 0") {
    auto e = ExpSum::exponential(1, 1);
    CHECK(coeffs(e, 3) == std::vector<mpq_class>{1, -1, mpq_class(1, 2), mpq_class(-1, 6)});
    auto s = maclaurin(ExpSum::constant(1) - e, 3, 0);
    CHECK(s.exact == std::vector<mpq_class>{0, 1, mpq_class(-1, 2), mpq_class(1, 6)});
    CHECK(s.zero_order() == 1);

    auto p2 = pm_expsum(LongRangeModel::uniform(3, mpq_class(1, 2)), 2);
    auto sl = maclaurin(p2, 12, 0);
    for (std::size_t k = 1; k <= 12; ++k) CHECK(sl.sign(k) == ((2 + 1 + k) % 2 == 0 ? 1 : -1));
    CHECK_FALSE(sl.alternation_violation(3).has_value());
}

TEST_CASE("Maclaurin slices away from 0 bound their rounding") {
    auto e = ExpSum::exponential(1, 1);
    auto s = maclaurin(e, 6, mpq_class(-1, 2));
    CHECK_FALSE(s.is_exact());
    const double base = std::exp(0.5);
    double fact = 1;
    for (std::size_t k = 0; k <= 6; ++k) {
        if (k > 0) fact *= k;
        double want = (k % 2 ? -1 : 1) * base / fact;
        CHECK(static_cast<double>(s.values[k]) == doctest::Approx(want).epsilon(1e-14));
        CHECK(static_cast<double>(s.errors[k]) < 1e-80);
    }
}

TEST_CASE("product of alternating expansions") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(1, 9), den(1, 5), coin(0, 1);
    // e^{-at} alternates with epsilon 0, 1 - e^{-at} with epsilon 1
    auto random_factor = [&](int& eps) {
        mpq_class rate(num(rng), den(rng));
        rate.canonicalize();
        if (coin(rng)) return ExpSum::exponential(1, rate);
        ++eps;
        return ExpSum::constant(1) - ExpSum::exponential(1, rate);
    };
    // sgn c_k is 0 or (-1)^{k+eps}
    auto alternates = [](const std::vector<mpq_class>& c, int eps) {
        for (std::size_t k = 0; k < c.size(); ++k)
            if (sgn(c[k]) != 0 && sgn(c[k]) != ((k + static_cast<std::size_t>(eps)) % 2 ? -1 : 1)) return false;
        return true;
    };
    for (int trial = 0; trial < 50; ++trial) {
        int ef = 0, eg = 0;
        ExpSum f = random_factor(ef);
        f = f * random_factor(ef);
        ExpSum g = random_factor(eg);
        CHECK(alternates(coeffs(f, 10), ef));
        CHECK(alternates(coeffs(g, 10), eg));
        CHECK(alternates(coeffs(f * g, 10), ef + eg));
        CHECK_FALSE(alternates(coeffs(f * g, 10), ef + eg + 1));
    }
}

TEST_CASE("triangle bound for exponentials") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> mu(0.01, 3.0), part(-4.0, 4.0);
    for (int i = 0; i < 1000; ++i) {
        double m = mu(rng);
        std::complex<double> z(part(rng), part(rng));
        CHECK(std::abs(std::exp(m * z) - 1.0) <= std::exp(m * std::abs(z)) - 1.0 + 1e-12);
    }
}

TEST_CASE("ExpSum algebra and evaluation") {
    auto a = ExpSum::exponential(2, 1) - ExpSum::exponential(2, mpq_class(3, 2));
    CHECK(a.to_string() == "2*exp(-t) - 2*exp(-3/2*t)");
    CHECK((a - a).is_zero());
    CHECK(a.at_zero() == 0);
    CHECK(a(1.0) == doctest::Approx(2 * std::exp(-1.0) - 2 * std::exp(-1.5)).epsilon(1e-14));
    auto z = a(std::complex<double>(0.3, 0.7));
    auto want = 2.0 * std::exp(-std::complex<double>(0.3, 0.7)) - 2.0 * std::exp(-1.5 * std::complex<double>(0.3, 0.7));
    CHECK(std::abs(z - want) < 1e-14);
    CHECK(std::isinf(ExpSum().log_abs(1.0)));
    // (1 - e^{-t})^60 e^{-t} at t = -0.7 evaluated without cancellation loss
    ExpSum pow60 = ExpSum::constant(1);
    for (int i = 0; i < 60; ++i) pow60 = pow60 * (ExpSum::constant(1) - ExpSum::exponential(1, 1));
    pow60 = pow60 * ExpSum::exponential(1, 1);
    const double want_log = 60 * std::log(std::abs(1 - std::exp(0.7))) + 0.7;
    CHECK(pow60.log_abs(-0.7) == doctest::Approx(want_log).epsilon(1e-12));
}

TEST_CASE("cluster disc bound") {
    ClusterShape s;
    s.vertices = {0, 1, 2};
    s.edges = {0, 1};
    s.boundary_size = 8;
    CHECK(eval_cluster_prob_exact(s, mpq_class(1, 2)).exact == mpq_class(1, 1024));
    auto v = eval_cluster_prob_complex(s, {0.5, 0.0});
    CHECK(v.re == doctest::Approx(1.0 / 1024));
    DiscCheck dc = cluster_disc_check(s, 0.3, 0.2);
    CHECK(dc.holds());
    CHECK(dc.bound == doctest::Approx(std::pow(0.9 / 0.5, 8) * 0.25 * std::pow(0.5, 8)));
}

TEST_CASE("p_m disc bound on K2") {
    auto p2 = pm_expsum(LongRangeModel::uniform(2, 1), 2);
    DiscCheck dc = pm_disc_check(p2, 2, 1.0, 0.5, 64);
    CHECK(dc.holds());
    CHECK(dc.bound == doctest::Approx(std::exp(2.0) * (1 - std::exp(-1.5))));
}

TEST_CASE("maximum modulus on discs at 0") {
    auto e = ExpSum::exponential(1, 1);
    CHECK(max_modulus_disc(e, 1.0).value == doctest::Approx(std::exp(1.0)));
    auto one_minus = ExpSum::constant(1) - e;
    auto mm = max_modulus_disc(one_minus, 1.0);
    CHECK(mm.value == doctest::Approx(std::exp(1.0) - 1));
    CHECK(mm.sampled_sup <= mm.value * (1 + 1e-10));

    auto p2 = pm_expsum(LongRangeModel::uniform(3, mpq_class(1, 2)), 2);
    auto m2 = max_modulus_disc(p2, 0.5);
    CHECK(m2.sampled_sup == doctest::Approx(m2.value).epsilon(1e-10));

    auto mixed = ExpSum::exponential(1, -1) + ExpSum::exponential(1, mpq_class(1, 2));  // c_0, c_1 both positive
    CHECK_THROWS_AS(max_modulus_disc(mixed, 1.0), InvalidArgument);
}

TEST_CASE("three circles") {
    auto e = ExpSum::exponential(1, 1);
    CHECK(hadamard_check(e, 0.5, 1, 2));
    CHECK(hadamard_check(pm_expsum(LongRangeModel::uniform(2, 1), 2), 0.5, 1, 2));
    CHECK(hadamard_check(e, 0.5, 0.5, 2));
    CHECK_THROWS_AS(hadamard_check(e, 2, 1, 0.5), InvalidArgument);
}

TEST_CASE("chi series") {
    auto line = build_half_line_patch(40);
    auto cs = chi_series(*line, mpq_class(1, 2), 20);
    CHECK(std::abs(cs.partial.back() - 2.0) < 1e-4);
    for (std::size_t i = 1; i < cs.partial.size(); ++i) CHECK(cs.partial[i] >= cs.partial[i - 1]);
    auto zero = chi_series(*line, 0, 3);
    CHECK(zero.partial[0] == 1.0);
    CHECK(zero.exact.back() == 1);

    // one-way path with weight 1: chi(t) = e^t
    auto path = LongRangeModel::path(30, 1);
    auto lr = chi_series(path, 0.5, 25);
    CHECK(lr.partial.back() == doctest::Approx(std::exp(0.5)).epsilon(1e-9));
}

TEST_CASE("tree percolation probability") {
    auto [rooted, theta] = tree_theta_exact_d3(mpq_class(3, 4));
    CHECK(rooted == mpq_class(8, 9));
    CHECK(theta == mpq_class(26, 27));
    CHECK(tree_theta(3, 0.75).theta == doctest::Approx(26.0 / 27).epsilon(1e-12));
    for (unsigned d = 3; d <= 6; ++d) {
        CHECK(tree_theta(d, 1.0 / (d - 1)).theta == 0.0);
        CHECK(tree_theta(d, 0.5 / (d - 1)).theta == 0.0);
        CHECK(tree_theta(d, 1.0).theta == doctest::Approx(1.0));
    }
    for (double p : {0.4, 0.6, 0.9}) {
        TreeTheta t = tree_theta(4, p);
        CHECK(1 - t.theta_rooted == doctest::Approx(std::pow(1 - p * t.theta_rooted, 3)).epsilon(1e-10));
        CHECK(t.theta == doctest::Approx(1 - std::pow(1 - p * t.theta_rooted, 4)).epsilon(1e-10));
        CHECK(t.theta_rooted > 0);
    }
}

TEST_CASE("negative threshold of the one-way path") {
    auto path = LongRangeModel::path(42, 1);
    std::vector<double> grid;
    for (double r = -1.0; r < -0.01; r += 0.02) grid.push_back(r);
    auto nt = negative_threshold([&](std::size_t m) { return pm_expsum(path, m); }, grid, 40);
    CHECK(nt.t1 == doctest::Approx(-std::log(2.0)).epsilon(1e-3));
    CHECK(nt.monotonicity_violations == 0);
    for (const auto& row : nt.grid) {
        // |p_m(r)| = |1 - e^{-r}|^{m-1} e^{-r}
        CHECK(row.rate == doctest::Approx(std::exp(-row.r) - 1).epsilon(1e-6));
    }
    CHECK_THROWS_AS(negative_threshold([&](std::size_t m) { return pm_expsum(path, m); }, {-0.5, -0.7}, 40),
                    InvalidArgument);
}
