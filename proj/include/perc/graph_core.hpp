#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "perc/error.hpp"

namespace perc {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using FaceId = std::uint32_t;

enum class PatchKind { square, triangular, tree, cayley, path, plane, long_range };

std::string_view kind_name(PatchKind kind);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Endpoints are stored with a < b.
struct Edge {
    VertexId a = 0;
    VertexId b = 0;

    VertexId other(VertexId v) const { return v == a ? b : a; }
};

struct Incidence {
    VertexId neighbor;
    EdgeId edge;
};

// A direction of an edge, encoded as 2*edge + (1 if it runs b -> a).
using Dart = std::uint32_t;

inline Dart make_dart(EdgeId e, bool reversed) { return 2 * e + (reversed ? 1u : 0u); }
inline EdgeId dart_edge(Dart d) { return d >> 1; }
inline Dart dart_reverse(Dart d) { return d ^ 1u; }

// Relator cycles restricted to a patch. cycles[i] lists the vertices in
// order; cycle_edges[i][j] joins cycles[i][j] and cycles[i][j+1 mod len].
struct CycleBasis {
    std::vector<std::vector<VertexId>> cycles;
    std::vector<std::vector<EdgeId>> cycle_edges;
    std::vector<std::vector<std::uint32_t>> cycles_of_edge;
    std::size_t max_length = 0;

    std::size_t size() const { return cycles.size(); }
};

class LatticePatch {
public:
    PatchKind kind() const { return kind_; }
    std::size_t vertex_count() const { return coords_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    VertexId origin() const { return origin_; }

    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const Incidence> incident(VertexId v) const { return adjacency_.at(v); }
    std::size_t degree(VertexId v) const { return adjacency_.at(v).size(); }

    bool is_escape(VertexId v) const { return escape_.at(v) != 0; }
    const std::vector<VertexId>& escape_vertices() const { return escape_list_; }

    // Lattice degree of interior vertices; 0 for irregular patches.
    std::size_t full_degree() const { return full_degree_; }
    // Branching number d for trees, 0 otherwise.
    std::size_t tree_degree() const { return tree_degree_; }

    const std::vector<int>& coords(VertexId v) const { return coords_.at(v); }
    const std::string& label(VertexId v) const { return labels_.at(v); }
    std::optional<VertexId> find_vertex(const std::vector<int>& coords) const;
    std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

    VertexId dart_tail(Dart d) const;
    VertexId dart_head(Dart d) const;
    Dart dart_from(EdgeId e, VertexId tail) const;

    bool has_embedding() const { return !positions_.empty(); }
    Point position(VertexId v) const { return positions_.at(v); }

    bool has_basis() const { return basis_ != nullptr; }
    const CycleBasis& basis() const;

private:
    friend class PatchBuilder;

    PatchKind kind_ = PatchKind::plane;
    VertexId origin_ = 0;
    std::size_t full_degree_ = 0;
    std::size_t tree_degree_ = 0;
    std::vector<std::vector<int>> coords_;
    std::vector<std::string> labels_;
    std::vector<Point> positions_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adjacency_;
    std::vector<std::uint8_t> escape_;
    std::vector<VertexId> escape_list_;
    std::map<std::vector<int>, VertexId> by_coords_;
    std::shared_ptr<const CycleBasis> basis_;
};

using PatchPtr = std::shared_ptr<const LatticePatch>;

// Assembles a patch. finish() sorts incidences counter-clockwise when
// positions are supplied and validates the lattice invariants.
class PatchBuilder {
public:
    explicit PatchBuilder(PatchKind kind);

    VertexId add_vertex(std::vector<int> coords, std::string label, std::optional<Point> pos = {});
    EdgeId add_edge(VertexId a, VertexId b);
    void set_escape(VertexId v, bool escape = true);
    void set_origin(VertexId v);
    void set_full_degree(std::size_t d);
    void set_tree_degree(std::size_t d);
    std::optional<VertexId> find_vertex(const std::vector<int>& coords) const;
    std::size_t vertex_count() const { return patch_->coords_.size(); }

    // Basis cycles given as closed vertex sequences (without repetition of
    // the first vertex).
    void set_basis(const std::vector<std::vector<VertexId>>& cycles);
    // Uses the bounded faces of the embedding as basis.
    void use_face_basis();

    PatchPtr finish(bool validate_lattice = true);

private:
    std::shared_ptr<LatticePatch> patch_;
    std::vector<std::vector<VertexId>> pending_basis_;
    bool has_pending_basis_ = false;
    bool face_basis_ = false;
};

PatchPtr build_square_patch(int radius);
// Rectangular window [x0,x1] x [y0,y1] of Z^2 containing (0,0); escape = perimeter.
PatchPtr build_square_box(int x0, int x1, int y0, int y1);
PatchPtr build_triangular_patch(int radius);
PatchPtr build_tree_patch(int d, int depth);
// Vertices 0..length on a half-line; o = 0, escape = {length}.
PatchPtr build_half_line_patch(int length);
// Arbitrary plane graph from positions; no lattice invariants enforced.
PatchPtr build_plane_graph(const std::vector<Point>& points,
                           const std::vector<std::pair<VertexId, VertexId>>& edges,
                           VertexId origin = 0);

// Faces of an embedded patch traced from the rotation system.
struct PlanarFaces {
    std::vector<FaceId> face_of_dart;          // face to the left of each dart
    std::vector<std::vector<Dart>> walks;      // boundary walk per face
    std::vector<double> signed_area;
    FaceId outer = 0;

    std::size_t face_count() const { return walks.size(); }
};

PlanarFaces compute_faces(const LatticePatch& patch);

// Next dart along the face to the left of d.
Dart next_dart_in_face(const LatticePatch& patch, Dart d);

struct DualPatch {
    PatchPtr base;
    PlanarFaces faces;
    std::vector<Point> centroids;                          // per face; outer face gets a far point
    std::vector<std::pair<FaceId, FaceId>> dual_edges;     // indexed by dual edge id
    std::vector<EdgeId> dual_to_primal;
    std::vector<std::uint32_t> primal_to_dual;

    std::size_t vertex_count() const { return faces.face_count(); }
    FaceId outer_face() const { return faces.outer; }
};

DualPatch dual_patch(const PatchPtr& patch);

// The bounded faces of the dual as a plane graph positioned at face centroids.
PatchPtr bounded_dual_graph(const DualPatch& dual);

struct Axis {
    std::vector<VertexId> vertices;
    std::vector<EdgeId> edges;
};

Axis axis_of(const LatticePatch& patch);

std::vector<std::size_t> bfs_distances(const LatticePatch& patch, VertexId source);
bool is_connected(const LatticePatch& patch);

// Rank over GF(2) of the edge-incidence vectors of the basis cycles.
std::size_t cycle_space_rank(const LatticePatch& patch);

}  // namespace perc
