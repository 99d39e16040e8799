#include "doctest.h"
#include "perc/suites.hpp"

using namespace perc;

TEST_CASE("asymmetric model weights") {
    auto m = asymmetric_model(4);
    CHECK(m.weight(0, 2) == mpq_class(1, 3));
    CHECK(m.weight(2, 3) == mpq_class(3, 4));
    CHECK(asymmetric_model(2).pairs().size() == 1);
    CHECK_THROWS_AS(asymmetric_model(5), InvalidArgument);
    CHECK(alternation_models(4).size() == 12);
}

TEST_CASE("alternation suite on small models") {
    AlternationOptions o;
    o.max_vertices = 3;
    o.k_max = 8;
    auto r = alternation_suite(o);
    CHECK(r.passed());
    CHECK(r.checks.size() == 9 * 5);
}

TEST_CASE("uniqueness suite on a reduced sample") {
    UniquenessOptions o;
    o.radius = 12;
    o.planar_p = {0.5, 0.6};
    o.planar_samples = 300;
    o.cube_radius = 7;
    o.cube_p = {0.3};
    o.cube_samples = 20;
    UniquenessStats st;
    auto r = uniqueness_suite(o, &st);
    for (const auto& c : r.checks) INFO(c.name << ": " << c.detail);
    CHECK(r.passed());
    CHECK(st.planar_finite > 50);
    CHECK(st.cube_clusters > 20);
    CHECK(st.multi_checked > 0);
}

TEST_CASE("bounds suite on a reduced sample") {
    BoundsOptions o;
    o.shapes = 100;
    o.points = 64;
    o.animal_n_max = 20;
    auto r = bounds_suite(o);
    for (const auto& c : r.checks) INFO(c.name << ": " << c.detail);
    CHECK(r.passed());
}
