#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "perc/interfaces.hpp"
#include "perc/presentation.hpp"
#include "perc/series.hpp"

using namespace perc;

namespace {

EdgeId edge_at(const LatticePatch& p, std::vector<int> a, std::vector<int> b) {
    return *p.find_edge(*p.find_vertex(a), *p.find_vertex(b));
}

Config open_edges(const PatchPtr& p, const std::vector<EdgeId>& open) {
    Config c = constant_config(p, Mode::bond, false);
    for (EdgeId e : open) c.occupied[e] = 1;
    return c;
}

}  // namespace

TEST_CASE("interface of an isolated origin") {
    auto p = build_square_patch(5);
    Config c = constant_config(p, Mode::bond, false);
    Cluster cl = cluster_of(c, p->origin());
    PlanarInterface s = extract_planar_interface(c, cl);
    CHECK(s.vertices == std::vector<VertexId>{p->origin()});
    CHECK(s.inner.empty());
    CHECK(s.outer.size() == 4);
    CHECK(interface_occurs(c, s));
    CHECK(dual_boundary_components(dual_patch(p), s.outer) == 1);
}

TEST_CASE("interface of a single edge and of a square") {
    auto p = build_square_patch(5);
    const EdgeId e = edge_at(*p, {0, 0}, {1, 0});
    Config c = open_edges(p, {e});
    PlanarInterface s = extract_planar_interface(c, cluster_of(c, p->origin()));
    CHECK(s.inner == std::vector<EdgeId>{e});
    CHECK(s.outer.size() == 6);

    // A unit square: all four edges on the walk, eight outer edges.
    std::vector<EdgeId> sq{edge_at(*p, {0, 0}, {1, 0}), edge_at(*p, {1, 0}, {1, 1}), edge_at(*p, {0, 1}, {1, 1}),
                           edge_at(*p, {0, 0}, {0, 1})};
    Config c2 = open_edges(p, sq);
    PlanarInterface s2 = extract_planar_interface(c2, cluster_of(c2, p->origin()));
    CHECK(s2.inner.size() == 4);
    CHECK(s2.outer.size() == 8);
    CHECK(interface_occurs(c2, s2));
}

TEST_CASE("a ring around the origin hides the inside") {
    auto p = build_square_patch(6);
    // Occupied 3x3 ring centred at (0,0); the origin itself is isolated.
    std::vector<EdgeId> ring;
    for (int i = -1; i < 1; ++i) {
        ring.push_back(edge_at(*p, {i, -1}, {i + 1, -1}));
        ring.push_back(edge_at(*p, {i, 1}, {i + 1, 1}));
        ring.push_back(edge_at(*p, {-1, i}, {-1, i + 1}));
        ring.push_back(edge_at(*p, {1, i}, {1, i + 1}));
    }
    Config c = open_edges(p, ring);
    auto found = occurring_interfaces(c);
    REQUIRE(found.size() == 2);  // the origin's own interface, then the ring
    CHECK(found[0].vertices == std::vector<VertexId>{p->origin()});
    CHECK(found[1].inner.size() == 8);
    CHECK(found[1].outer.size() == 12);
    CHECK(interface_surrounds(*p, found[1], p->origin()));

    auto multis = occurring_multi_interfaces(c, 40);
    CHECK(multis.size() == 3);  // {S0}, {S1}, {S0, S1}
    auto dual = dual_patch(p);
    for (const auto& m : multis) CHECK(dual_boundary_components(dual, m) == m.count());
}

TEST_CASE("catalog rings for small boundary sizes") {
    auto p = build_square_patch(10);
    auto cat = enumerate_planar_interfaces(*p, 8);
    ShapeSum by_boundary[9];
    for (const auto& s : cat.interfaces) by_boundary[s.outer.size()].add(s.inner.size(), s.outer.size());
    CHECK(by_boundary[4].to_string() == "(1-p)^4");
    CHECK(by_boundary[6].to_string() == "4*p*(1-p)^6");
    // 3-vertex trees through o, plus unit squares through o
    CHECK(by_boundary[8].to_string() == "18*p^2*(1-p)^8 + 4*p^4*(1-p)^8");
    CHECK(by_boundary[5].terms().empty());
    CHECK(by_boundary[7].terms().empty());
}

TEST_CASE("theta series at the spec anchors") {
    auto p = build_square_patch(10);
    auto ts = theta_series_planar(*p, 0.9, 4);
    REQUIRE(ts.partial.size() == 1);
    CHECK(ts.partial[0] == doctest::Approx(1e-4).epsilon(1e-9));
    auto one = theta_series_planar(*p, 1.0, 10);
    for (double s : one.partial) CHECK(s == 0.0);
}

TEST_CASE("extracted interfaces on random configurations") {
    auto p = build_square_patch(15);
    std::size_t checked = 0;
    for (std::uint64_t s = 0; s < 400; ++s) {
        Config c = sample_config(p, Mode::bond, 0.5, 21, s);
        Cluster cl = cluster_of(c, p->origin());
        if (cl.touches_escape) continue;
        ++checked;
        PlanarInterface si = extract_planar_interface(c, cl);
        CHECK(interface_occurs(c, si));
        CHECK(std::includes(cl.edges.begin(), cl.edges.end(), si.inner.begin(), si.inner.end()));
        CHECK(std::includes(cl.boundary.begin(), cl.boundary.end(), si.outer.begin(), si.outer.end()));
        CHECK(2 * si.outer.size() >= si.inner.size());
    }
    CHECK(checked > 50);
}

TEST_CASE("P-interface of an isolated origin on Z^2") {
    auto p = build_square_patch(6);
    Config c = constant_config(p, Mode::bond, false);
    Cluster cl = cluster_of(c, p->origin());
    PInterface pi = extract_p_interface(c, cl);
    CHECK(pi.i_v == cl.boundary);
    CHECK(pi.i_o.empty());
    CHECK(pi.witness == std::vector<VertexId>{p->origin()});
    CHECK(verify_p_interface(*p, pi, {}, &c).valid);
    CHECK(p_interface_occurs(c, pi));

    PInterface broken = pi;
    broken.i_v.pop_back();
    auto report = verify_p_interface(*p, broken);
    CHECK_FALSE(report.valid);
    CHECK(std::find(report.violations.begin(), report.violations.end(), "1") != report.violations.end());
}

TEST_CASE("P-interface extraction needs room and bond mode") {
    auto p = build_square_patch(3);
    Config c = constant_config(p, Mode::bond, false);
    c.occupied[edge_at(*p, {0, 0}, {1, 0})] = 1;
    CHECK_THROWS_AS(extract_p_interface(c, cluster_of(c, p->origin())), PatchTooSmall);
    Config site = constant_config(p, Mode::site, true);
    Cluster cl = cluster_of(site, p->origin());
    CHECK_THROWS_AS(extract_p_interface(site, cl), InvalidArgument);
}

TEST_CASE("P-paths along a face") {
    auto p = build_square_patch(4);
    const EdgeId a = edge_at(*p, {0, 0}, {1, 0});
    const EdgeId b = edge_at(*p, {1, 0}, {1, 1});
    std::vector<std::uint8_t> none(p->edge_count(), 0);
    // darts found by the scan point back along the walk
    CHECK(p_path_exists(*p, p->dart_from(a, p->origin()), p->dart_from(b, *p->find_vertex({1, 1})), none));
    CHECK_FALSE(p_path_exists(*p, p->dart_from(a, p->origin()), p->dart_from(b, *p->find_vertex({1, 0})), none));
    const Dart far = p->dart_from(edge_at(*p, {0, 1}, {1, 1}), *p->find_vertex({0, 1}));
    CHECK(p_path_exists(*p, p->dart_from(a, p->origin()), far, none));
    auto blocked = none;
    for (EdgeId e : {edge_at(*p, {1, 0}, {1, 1}), edge_at(*p, {1, -1}, {1, 0}), edge_at(*p, {1, 0}, {2, 0})})
        blocked[e] = 1;
    // every cycle through a leaves (1,0) through a blocked edge
    CHECK_FALSE(p_path_exists(*p, p->dart_from(a, p->origin()), far, blocked));
}

TEST_CASE("P-interfaces on Z^3") {
    auto z3 = build_cayley_patch(Presentation::free_abelian(3), 7);
    std::size_t checked = 0;
    for (std::uint64_t s = 0; s < 60; ++s) {
        Config c = sample_config(z3, Mode::bond, 0.2, 5, s);
        Cluster cl = cluster_of(c, z3->origin());
        if (cl.touches_escape) continue;
        try {
            PInterface pi = extract_p_interface(c, cl);
            ++checked;
            CHECK(verify_p_interface(*z3, pi, {}, &c).valid);
            CHECK(std::includes(cl.boundary.begin(), cl.boundary.end(), pi.i_v.begin(), pi.i_v.end()));
            CHECK(std::includes(cl.edges.begin(), cl.edges.end(), pi.i_o.begin(), pi.i_o.end()));
        } catch (const PatchTooSmall&) {
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("Peierls bounds") {
    for (int d = 2; d <= 4; ++d) {
        auto b = peierls_bound(Presentation::free_abelian(d));
        double want = (std::pow(4.0 * d - 2, 2) - 1) * std::exp(1.0);
        CHECK(b.gamma == doctest::Approx(want).epsilon(1e-12));
        CHECK(b.p_bound > 0);
        CHECK(b.p_bound < 1);
    }
    CHECK(peierls_bound(4, 4, Mode::site).gamma == doctest::Approx(15 * std::exp(1.0)));
    CHECK(peierls_bound(3, 6).gamma == doctest::Approx(63 * std::exp(1.0)));
    CHECK_THROWS_AS(peierls_bound(4, 2), InvalidArgument);
}
