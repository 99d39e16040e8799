#include <cctype>
#include "doctest.h"
#include "perc/graph_core.hpp"
#include "perc/presentation.hpp"

using namespace perc;

namespace {

std::size_t count_escape(const LatticePatch& p) {
    std::size_t n = 0;
    for (VertexId v = 0; v < p.vertex_count(); ++v) n += p.is_escape(v);
    return n;
}

}  // namespace

TEST_CASE("square patch sizes and Euler relations") {
    auto p = build_square_patch(3);
    CHECK(p->vertex_count() == 49);
    CHECK(p->edge_count() == 84);
    CHECK(count_escape(*p) == 24);
    CHECK(p->coords(p->origin()) == std::vector<int>{0, 0});
    CHECK(p->degree(p->origin()) == 4);
    CHECK(cycle_space_rank(*p) == p->edge_count() - p->vertex_count() + 1);
    CHECK(p->basis().max_length == 4);

    auto faces = compute_faces(*p);
    CHECK(faces.face_count() == p->edge_count() - p->vertex_count() + 2);
    for (FaceId f = 0; f < faces.face_count(); ++f)
        if (f != faces.outer) CHECK(faces.walks[f].size() == 4);
}

TEST_CASE("box window keeps the origin") {
    auto p = build_square_box(-1, 2, -1, 2);
    CHECK(p->vertex_count() == 16);
    CHECK(p->edge_count() == 24);
    CHECK(p->coords(p->origin()) == std::vector<int>{0, 0});
    CHECK_THROWS_AS(build_square_box(1, 3, 0, 2), InvalidArgument);
}

TEST_CASE("triangular patch counts") {
    auto p = build_triangular_patch(2);
    CHECK(p->vertex_count() == 19);
    CHECK(p->edge_count() == 42);
    CHECK(p->degree(p->origin()) == 6);
    CHECK(cycle_space_rank(*p) == 24);
    CHECK(compute_faces(*p).face_count() == 25);
}

TEST_CASE("tree patch") {
    auto p = build_tree_patch(3, 3);
    CHECK(p->vertex_count() == 22);
    CHECK(p->edge_count() == 21);
    CHECK(count_escape(*p) == 12);
    CHECK(p->tree_degree() == 3);
    CHECK(is_connected(*p));
    CHECK_THROWS_AS(build_tree_patch(2, 3), InvalidArgument);
}

TEST_CASE("half line") {
    auto p = build_half_line_patch(5);
    CHECK(p->vertex_count() == 6);
    CHECK(p->escape_vertices() == std::vector<VertexId>{*p->find_vertex({5})});
    auto dist = bfs_distances(*p, p->origin());
    CHECK(dist[*p->find_vertex({5})] == 5);
}

TEST_CASE("dual patch has one dual edge per primal edge") {
    auto p = build_square_patch(2);
    auto dual = dual_patch(p);
    CHECK(dual.dual_edges.size() == p->edge_count());
    CHECK(dual.vertex_count() == 17);
    for (EdgeId e = 0; e < p->edge_count(); ++e) CHECK(dual.dual_to_primal[dual.primal_to_dual[e]] == e);
}

TEST_CASE("axis runs from the origin to the escape layer") {
    auto p = build_square_patch(4);
    Axis a = axis_of(*p);
    CHECK(a.vertices.front() == p->origin());
    CHECK(p->is_escape(a.vertices.back()));
    CHECK(a.edges.size() == 4);
    CHECK(p->coords(a.vertices[2]) == std::vector<int>{2, 0});
}

TEST_CASE("darts") {
    auto p = build_square_patch(1);
    EdgeId e = *p->find_edge(p->origin(), *p->find_vertex({1, 0}));
    Dart d = p->dart_from(e, p->origin());
    CHECK(p->dart_tail(d) == p->origin());
    CHECK(p->dart_head(dart_reverse(d)) == p->origin());
    CHECK(dart_edge(d) == e);
}

TEST_CASE("Cayley balls of Z^d") {
    auto z2 = build_cayley_patch(Presentation::free_abelian(2), 3);
    CHECK(z2->vertex_count() == 25);
    CHECK(z2->basis().max_length == 4);
    CHECK(cycle_space_rank(*z2) == z2->edge_count() - z2->vertex_count() + 1);

    auto z3 = build_cayley_patch(Presentation::free_abelian(3), 8);
    CHECK(z3->vertex_count() == 833);  // octahedral number (2r+1)(2r^2+2r+3)/3
    CHECK(z3->edge_count() == 2064);
    CHECK(z3->degree(z3->origin()) == 6);
}

TEST_CASE("presentations") {
    auto pres = parse_presentation_json(R"({"generators": 2, "relators": ["xyXY"]})");
    CHECK(pres.generator_count == 2);
    CHECK(pres.max_relator_length() == 4);
    CHECK(parse_presentation_json(presentation_to_json(pres)).relators == pres.relators);

    CHECK_THROWS_AS(parse_presentation_json("{not json"), InvalidArgument);
    CHECK_THROWS_AS(parse_presentation_json(R"({"relators": []})"), InvalidArgument);
    CHECK_THROWS_AS(parse_presentation_json(R"({"generators": 1, "relators": ["xq"]})"), InvalidArgument);
    CHECK_THROWS_AS(parse_presentation_json(R"({"generators": 1, "relators": ["xX"]})"), InvalidArgument);
}

namespace {

// Letter codes: generator i is 2*i, its inverse 2*i+1.
std::string enc(const std::string& w) {
    std::string out;
    for (char c : w) out += std::islower(static_cast<unsigned char>(c)) ? char(2 * (c - 'x')) : char(2 * (c - 'X') + 1);
    return out;
}

}  // namespace

TEST_CASE("rewriting normal forms") {
    RewritingSystem z2(Presentation::free_abelian(2));
    CHECK(z2.normal_form(enc("yx")) == z2.normal_form(enc("xy")));
    CHECK(z2.normal_form(enc("xyXY")).empty());
    CHECK(z2.normal_form(enc("xX")).empty());

    Presentation cyclic{1, {"xxxx"}};
    RewritingSystem z4(cyclic);
    CHECK(z4.normal_form(enc("xxx")) == enc("X"));
    CHECK(z4.normal_form(enc("xxxxx")) == enc("x"));
    CHECK(z4.normal_form(enc("XX")) == enc("xx"));
}
