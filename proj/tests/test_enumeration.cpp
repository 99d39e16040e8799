#include <cmath>
#include <set>

#include "doctest.h"
#include "perc/enumeration.hpp"

using namespace perc;

namespace {

// Euler's pentagonal recurrence.
std::vector<mpz_class> pentagonal_partitions(unsigned n_max) {
    std::vector<mpz_class> p(n_max + 1, 0);
    p[0] = 1;
    for (unsigned n = 1; n <= n_max; ++n)
        for (long k = 1;; ++k) {
            long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            if (g1 > static_cast<long>(n)) break;
            int s = (k % 2 == 1) ? 1 : -1;
            p[n] += s * p[n - g1];
            if (g2 <= static_cast<long>(n)) p[n] += s * p[n - g2];
        }
    return p;
}

// Subtrees of T_d through the root via B = x(1+B)^{d-1}, S = x(1+B)^d,
// truncated power series with integer coefficients.
std::vector<mpz_class> tree_series(unsigned d, unsigned n_max) {
    using Poly = std::vector<mpz_class>;
    auto mul = [&](const Poly& a, const Poly& b) {
        Poly c(n_max + 1, 0);
        for (unsigned i = 0; i <= n_max; ++i)
            for (unsigned j = 0; i + j <= n_max; ++j) c[i + j] += a[i] * b[j];
        return c;
    };
    auto power_times_x = [&](const Poly& base, unsigned e) {
        Poly r(n_max + 1, 0);
        r[0] = 1;
        for (unsigned i = 0; i < e; ++i) r = mul(r, base);
        Poly shifted(n_max + 1, 0);
        for (unsigned i = 0; i < n_max; ++i) shifted[i + 1] = r[i];
        return shifted;
    };
    Poly b(n_max + 1, 0);
    for (unsigned it = 0; it <= n_max; ++it) {
        Poly one_plus_b = b;
        one_plus_b[0] += 1;
        b = power_times_x(one_plus_b, d - 1);
    }
    Poly one_plus_b = b;
    one_plus_b[0] += 1;
    return power_times_x(one_plus_b, d);
}

}  // namespace

TEST_CASE("connected sets through o match fixed polyomino counts") {
    // n * (number of fixed polyominoes of size n)
    const std::vector<std::size_t> want{1, 4, 18, 76, 315, 1296};
    auto p = build_square_patch(8);
    std::vector<std::size_t> got(7, 0);
    for_each_connected_set(*p, p->origin(), 6, [&](std::span<const VertexId> s) { ++got[s.size()]; });
    for (std::size_t n = 1; n <= 6; ++n) CHECK(got[n] == want[n - 1]);
}

TEST_CASE("connected set enumeration respects its cap") {
    auto p = build_square_patch(8);
    CHECK_THROWS_AS(for_each_connected_set(*p, p->origin(), 6, [](auto) {}, 100), CapExceeded);
}

TEST_CASE("spanning connected subsets") {
    std::vector<VertexId> v{0, 1, 2};
    std::vector<Edge> triangle{{0, 1}, {1, 2}, {0, 2}};
    CHECK(spanning_connected_subsets(v, triangle).size() == 4);
    std::vector<Edge> path{{0, 1}, {1, 2}};
    CHECK(spanning_connected_subsets(v, path).size() == 1);
}

TEST_CASE("small cluster-size polynomials") {
    auto p = build_square_patch(8);
    CHECK(cluster_size_polynomial(*p, p->origin(), 1).to_string() == "(1-p)^4");
    CHECK(cluster_size_polynomial(*p, p->origin(), 2).to_string() == "4*p*(1-p)^6");
    CHECK(cluster_size_polynomial(*p, p->origin(), 3).to_string() == "18*p^2*(1-p)^8");
    CHECK(enumerate_clusters(*p, p->origin(), 3).size() == 18);
}

TEST_CASE("cluster-size polynomials agree with brute force on a box") {
    auto box = build_square_box(-1, 1, -1, 1);
    auto tally = brute_force_tally(
        box, Mode::bond,
        [&](const Config& c) { return std::min<std::size_t>(cluster_of(c, box->origin()).vertices.size(), 5); }, 6);
    for (std::size_t n = 1; n <= 4; ++n) {
        ShapeSum sum = cluster_size_polynomial(*box, box->origin(), n);
        for (mpq_class q : {mpq_class(1, 4), mpq_class(1, 2), mpq_class(2, 3)})
            CHECK(sum(q) == tally_probability(tally[n], q));
    }
}

TEST_CASE("exploration distribution matches shape enumeration and sums to 1") {
    auto p = build_square_patch(8);
    auto dist = exploration_size_distribution(*p, p->origin(), 5);
    REQUIRE(dist.size() == 6);
    RationalPolynomial total;
    for (std::size_t k = 1; k <= 5; ++k) {
        CHECK(dist[k - 1].expand() == cluster_size_polynomial(*p, p->origin(), k).expand());
        total += dist[k - 1].expand();
    }
    total += dist[5].expand();
    CHECK(total == RationalPolynomial::constant(1));
}

TEST_CASE("triangular lattice P_1 and P_2") {
    auto t = build_triangular_patch(6);
    CHECK(cluster_size_polynomial(*t, t->origin(), 1).to_string() == "(1-p)^6");
    CHECK(cluster_size_polynomial(*t, t->origin(), 2).to_string() == "6*p*(1-p)^10");
}

TEST_CASE("partition numbers") {
    CHECK(count_partitions(5) == 7);
    CHECK(count_partitions(10) == 42);
    CHECK(count_partitions(100) == mpz_class("190569292"));
    auto oracle = pentagonal_partitions(400);
    auto table = partition_table(400);
    for (unsigned n = 0; n <= 400; ++n) CHECK(table[n] == oracle[n]);
    CHECK(std::abs(hardy_ramanujan_ratio(200) - 1.0) < 0.1);
}

TEST_CASE("p(n)^{1/n} decreases towards 1") {
    auto table = partition_table(1000);
    auto root = [&](unsigned n) { return std::exp(std::log(table[n].get_d()) / n); };
    CHECK(root(200) < 1.16);
    CHECK(root(200) > 1.15);
    for (unsigned n = 21; n <= 1000; ++n) CHECK(root(n) < root(n - 1));
    CHECK(root(1000) < 1.1);
}

TEST_CASE("tree animals") {
    for (unsigned d = 3; d <= 5; ++d) {
        auto series = tree_series(d, 12);
        for (unsigned n = 1; n <= 12; ++n) CHECK(count_tree_animals(d, n, AnimalMethod::formula) == series[n]);
    }
    for (unsigned n = 1; n <= 8; ++n)
        CHECK(count_tree_animals(3, n, AnimalMethod::brute) == count_tree_animals(3, n, AnimalMethod::formula));
    CHECK(count_tree_animals(3, 8, AnimalMethod::formula) == 3432);
    CHECK_THROWS_AS(count_tree_animals(2, 4, AnimalMethod::formula), InvalidArgument);

    auto fit = fit_tree_animal_bound(3, 40);
    for (unsigned n = 1; n <= 40; ++n) {
        mpz_class s = count_tree_animals(3, n, AnimalMethod::formula);
        CHECK(s.get_d() < fit.constant.get_d() * std::pow(2 * std::exp(1.0), n));
    }
}
