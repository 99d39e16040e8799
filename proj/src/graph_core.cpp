#include "perc/graph_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

namespace perc {

std::size_t enumeration_cap(std::size_t fallback) {
    if (const char* env = std::getenv("PERC_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return fallback;
}

std::string_view kind_name(PatchKind kind) {
    switch (kind) {
        case PatchKind::square: return "square";
        case PatchKind::triangular: return "triangular";
        case PatchKind::tree: return "tree";
        case PatchKind::cayley: return "cayley";
        case PatchKind::path: return "path";
        case PatchKind::plane: return "plane";
        case PatchKind::long_range: return "long_range";
    }
    return "unknown";
}

std::optional<VertexId> LatticePatch::find_vertex(const std::vector<int>& coords) const {
    auto it = by_coords_.find(coords);
    if (it == by_coords_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeId> LatticePatch::find_edge(VertexId a, VertexId b) const {
    for (const auto& inc : adjacency_.at(a))
        if (inc.neighbor == b) return inc.edge;
    return std::nullopt;
}

VertexId LatticePatch::dart_tail(Dart d) const {
    const Edge& e = edges_.at(dart_edge(d));
    return (d & 1u) ? e.b : e.a;
}

VertexId LatticePatch::dart_head(Dart d) const {
    const Edge& e = edges_.at(dart_edge(d));
    return (d & 1u) ? e.a : e.b;
}

Dart LatticePatch::dart_from(EdgeId e, VertexId tail) const {
    const Edge& ed = edges_.at(e);
    if (tail == ed.a) return make_dart(e, false);
    if (tail == ed.b) return make_dart(e, true);
    throw InvalidArgument("vertex is not an endpoint of the edge");
}

const CycleBasis& LatticePatch::basis() const {
    if (!basis_) throw InvalidArgument("patch has no cycle basis");
    return *basis_;
}

PatchBuilder::PatchBuilder(PatchKind kind) : patch_(std::make_shared<LatticePatch>()) {
    patch_->kind_ = kind;
}

VertexId PatchBuilder::add_vertex(std::vector<int> coords, std::string label, std::optional<Point> pos) {
    auto& p = *patch_;
    if (pos) {
        if (p.positions_.size() != p.coords_.size())
            throw InvalidArgument("either all or no vertices carry positions");
        p.positions_.push_back(*pos);
    } else if (!p.positions_.empty()) {
        throw InvalidArgument("either all or no vertices carry positions");
    }
    VertexId id = static_cast<VertexId>(p.coords_.size());
    if (!p.by_coords_.emplace(coords, id).second) throw InvalidArgument("duplicate vertex coordinates");
    p.coords_.push_back(std::move(coords));
    p.labels_.push_back(std::move(label));
    p.adjacency_.emplace_back();
    p.escape_.push_back(0);
    return id;
}

EdgeId PatchBuilder::add_edge(VertexId a, VertexId b) {
    auto& p = *patch_;
    if (a == b) throw InvalidArgument("loops are not supported");
    if (a >= p.coords_.size() || b >= p.coords_.size()) throw InvalidArgument("edge endpoint out of range");
    if (a > b) std::swap(a, b);
    for (const auto& inc : p.adjacency_[a])
        if (inc.neighbor == b) return inc.edge;
    EdgeId id = static_cast<EdgeId>(p.edges_.size());
    p.edges_.push_back({a, b});
    p.adjacency_[a].push_back({b, id});
    p.adjacency_[b].push_back({a, id});
    return id;
}

void PatchBuilder::set_escape(VertexId v, bool escape) { patch_->escape_.at(v) = escape ? 1 : 0; }
void PatchBuilder::set_origin(VertexId v) { patch_->origin_ = v; }
void PatchBuilder::set_full_degree(std::size_t d) { patch_->full_degree_ = d; }
void PatchBuilder::set_tree_degree(std::size_t d) { patch_->tree_degree_ = d; }

std::optional<VertexId> PatchBuilder::find_vertex(const std::vector<int>& coords) const {
    return patch_->find_vertex(coords);
}

void PatchBuilder::set_basis(const std::vector<std::vector<VertexId>>& cycles) {
    pending_basis_ = cycles;
    has_pending_basis_ = true;
    face_basis_ = false;
}

void PatchBuilder::use_face_basis() {
    face_basis_ = true;
    has_pending_basis_ = false;
}

namespace {

std::shared_ptr<CycleBasis> make_basis(const LatticePatch& patch, const std::vector<std::vector<VertexId>>& cycles) {
    auto basis = std::make_shared<CycleBasis>();
    basis->cycles_of_edge.assign(patch.edge_count(), {});
    for (const auto& cyc : cycles) {
        if (cyc.size() < 2) throw StructuralError("basis cycle too short");
        std::vector<EdgeId> edges;
        edges.reserve(cyc.size());
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            auto e = patch.find_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
            if (!e) throw StructuralError("basis cycle uses a missing edge");
            edges.push_back(*e);
        }
        auto idx = static_cast<std::uint32_t>(basis->cycles.size());
        for (EdgeId e : edges) {
            auto& list = basis->cycles_of_edge[e];
            if (list.empty() || list.back() != idx) list.push_back(idx);
        }
        basis->max_length = std::max(basis->max_length, cyc.size());
        basis->cycles.push_back(cyc);
        basis->cycle_edges.push_back(std::move(edges));
    }
    return basis;
}

}  // namespace

PatchPtr PatchBuilder::finish(bool validate_lattice) {
    auto& p = *patch_;
    if (p.coords_.empty()) throw InvalidArgument("empty patch");
    if (p.origin_ >= p.coords_.size()) throw InvalidArgument("origin out of range");
    p.escape_list_.clear();
    for (VertexId v = 0; v < p.coords_.size(); ++v)
        if (p.escape_[v]) p.escape_list_.push_back(v);

    if (p.has_embedding()) {
        for (VertexId v = 0; v < p.coords_.size(); ++v) {
            const Point c = p.positions_[v];
            auto angle = [&](const Incidence& inc) {
                const Point q = p.positions_[inc.neighbor];
                return std::atan2(q.y - c.y, q.x - c.x);
            };
            std::sort(p.adjacency_[v].begin(), p.adjacency_[v].end(),
                      [&](const Incidence& l, const Incidence& r) { return angle(l) < angle(r); });
        }
    }

    if (validate_lattice) {
        if (!is_connected(p)) throw StructuralError("patch is not connected");
        if (p.is_escape(p.origin_)) throw InvalidArgument("origin must not be an escape vertex");
        if (p.full_degree_ > 0) {
            for (VertexId v = 0; v < p.coords_.size(); ++v)
                if (!p.escape_[v] && p.adjacency_[v].size() != p.full_degree_)
                    throw StructuralError("interior vertex " + p.labels_[v] + " lacks full degree");
        }
        if (p.has_embedding()) {
            auto faces = compute_faces(p);
            long euler = static_cast<long>(p.vertex_count()) - static_cast<long>(p.edge_count()) +
                         static_cast<long>(faces.face_count());
            if (euler != 2) throw StructuralError("embedding violates Euler's formula");
        }
    }

    if (face_basis_) {
        auto faces = compute_faces(p);
        std::vector<std::vector<VertexId>> cycles;
        for (FaceId f = 0; f < faces.face_count(); ++f) {
            if (f == faces.outer) continue;
            std::vector<VertexId> cyc;
            for (Dart d : faces.walks[f]) cyc.push_back(p.dart_tail(d));
            cycles.push_back(std::move(cyc));
        }
        p.basis_ = make_basis(p, cycles);
    } else if (has_pending_basis_) {
        p.basis_ = make_basis(p, pending_basis_);
    }
    return patch_;
}

PatchPtr build_square_box(int x0, int x1, int y0, int y1) {
    if (x0 > 0 || x1 < 0 || y0 > 0 || y1 < 0) throw InvalidArgument("box must contain the origin");
    PatchBuilder b(PatchKind::square);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            VertexId v = b.add_vertex({x, y}, "(" + std::to_string(x) + "," + std::to_string(y) + ")",
                                      Point{double(x), double(y)});
            if (x == x0 || x == x1 || y == y0 || y == y1) b.set_escape(v);
            if (x == 0 && y == 0) b.set_origin(v);
        }
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            VertexId v = *b.find_vertex({x, y});
            if (x < x1) b.add_edge(v, *b.find_vertex({x + 1, y}));
            if (y < y1) b.add_edge(v, *b.find_vertex({x, y + 1}));
        }
    b.set_full_degree(4);
    b.use_face_basis();
    bool interior_origin = x0 < 0 && x1 > 0 && y0 < 0 && y1 > 0;
    return b.finish(interior_origin);
}

PatchPtr build_square_patch(int radius) {
    if (radius < 1) throw InvalidArgument("radius must be at least 1");
    return build_square_box(-radius, radius, -radius, radius);
}

PatchPtr build_triangular_patch(int radius) {
    if (radius < 1) throw InvalidArgument("radius must be at least 1");
    static const int dirs[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
    PatchBuilder b(PatchKind::triangular);
    auto dist = [](int q, int r) { return (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2; };
    const double h = std::sqrt(3.0) / 2.0;
    for (int r = -radius; r <= radius; ++r)
        for (int q = -radius; q <= radius; ++q) {
            int d = dist(q, r);
            if (d > radius) continue;
            VertexId v = b.add_vertex({q, r}, "(" + std::to_string(q) + "," + std::to_string(r) + ")",
                                      Point{q + 0.5 * r, h * r});
            if (d == radius) b.set_escape(v);
            if (q == 0 && r == 0) b.set_origin(v);
        }
    for (int r = -radius; r <= radius; ++r)
        for (int q = -radius; q <= radius; ++q) {
            auto v = b.find_vertex({q, r});
            if (!v) continue;
            for (const auto& dir : dirs) {
                auto w = b.find_vertex({q + dir[0], r + dir[1]});
                if (w && *v < *w) b.add_edge(*v, *w);
            }
        }
    b.set_full_degree(6);
    b.use_face_basis();
    return b.finish();
}

PatchPtr build_tree_patch(int d, int depth) {
    if (d < 3) throw InvalidArgument("tree degree must be at least 3");
    if (depth < 1) throw InvalidArgument("depth must be at least 1");
    PatchBuilder b(PatchKind::tree);
    std::vector<VertexId> level{b.add_vertex({0, 0}, "r")};
    std::vector<std::string> names{"r"};
    b.set_origin(level[0]);
    for (int k = 1; k <= depth; ++k) {
        std::vector<VertexId> next;
        std::vector<std::string> next_names;
        int index = 0;
        for (std::size_t i = 0; i < level.size(); ++i) {
            int children = (k == 1) ? d : d - 1;
            for (int c = 0; c < children; ++c) {
                std::string name = names[i] + "." + std::to_string(c);
                VertexId v = b.add_vertex({k, index++}, name);
                b.add_edge(level[i], v);
                if (k == depth) b.set_escape(v);
                next.push_back(v);
                next_names.push_back(std::move(name));
            }
        }
        level = std::move(next);
        names = std::move(next_names);
    }
    b.set_full_degree(static_cast<std::size_t>(d));
    b.set_tree_degree(static_cast<std::size_t>(d));
    b.set_basis({});
    return b.finish();
}

PatchPtr build_half_line_patch(int length) {
    if (length < 1) throw InvalidArgument("length must be at least 1");
    PatchBuilder b(PatchKind::path);
    for (int i = 0; i <= length; ++i) {
        VertexId v = b.add_vertex({i}, std::to_string(i));
        if (i > 0) b.add_edge(v - 1, v);
    }
    b.set_escape(static_cast<VertexId>(length));
    b.set_origin(0);
    b.set_basis({});
    return b.finish();
}

PatchPtr build_plane_graph(const std::vector<Point>& points,
                           const std::vector<std::pair<VertexId, VertexId>>& edges, VertexId origin) {
    PatchBuilder b(PatchKind::plane);
    for (std::size_t i = 0; i < points.size(); ++i)
        b.add_vertex({static_cast<int>(i)}, std::to_string(i), points[i]);
    for (auto [u, v] : edges) b.add_edge(u, v);
    b.set_origin(origin);
    return b.finish(false);
}

Dart next_dart_in_face(const LatticePatch& patch, Dart d) {
    VertexId u = patch.dart_tail(d);
    VertexId v = patch.dart_head(d);
    auto inc = patch.incident(v);
    EdgeId e = dart_edge(d);
    std::size_t idx = 0;
    while (inc[idx].edge != e || inc[idx].neighbor != u) ++idx;
    std::size_t prev = (idx + inc.size() - 1) % inc.size();
    return patch.dart_from(inc[prev].edge, v);
}

PlanarFaces compute_faces(const LatticePatch& patch) {
    if (!patch.has_embedding()) throw InvalidArgument("patch has no planar embedding");
    PlanarFaces faces;
    const std::size_t darts = 2 * patch.edge_count();
    constexpr FaceId unset = std::numeric_limits<FaceId>::max();
    faces.face_of_dart.assign(darts, unset);
    for (Dart start = 0; start < darts; ++start) {
        if (faces.face_of_dart[start] != unset) continue;
        auto id = static_cast<FaceId>(faces.walks.size());
        std::vector<Dart> walk;
        double area = 0.0;
        Dart d = start;
        do {
            faces.face_of_dart[d] = id;
            walk.push_back(d);
            Point a = patch.position(patch.dart_tail(d));
            Point c = patch.position(patch.dart_head(d));
            area += a.x * c.y - c.x * a.y;
            d = next_dart_in_face(patch, d);
        } while (d != start);
        faces.walks.push_back(std::move(walk));
        faces.signed_area.push_back(area / 2.0);
    }
    // Isolated single vertex: one face, which is the outer one.
    if (faces.walks.empty()) {
        faces.walks.emplace_back();
        faces.signed_area.push_back(0.0);
        faces.outer = 0;
        return faces;
    }
    faces.outer = static_cast<FaceId>(
        std::min_element(faces.signed_area.begin(), faces.signed_area.end()) - faces.signed_area.begin());
    return faces;
}

DualPatch dual_patch(const PatchPtr& patch) {
    if (!patch->has_embedding()) throw InvalidArgument("dual requires a planar embedding");
    DualPatch dual;
    dual.base = patch;
    dual.faces = compute_faces(*patch);
    const std::size_t nf = dual.faces.face_count();
    dual.centroids.assign(nf, Point{});
    double max_abs = 1.0;
    for (VertexId v = 0; v < patch->vertex_count(); ++v) {
        Point q = patch->position(v);
        max_abs = std::max({max_abs, std::abs(q.x), std::abs(q.y)});
    }
    for (FaceId f = 0; f < nf; ++f) {
        if (f == dual.faces.outer) {
            dual.centroids[f] = Point{4.0 * max_abs, 0.0};
            continue;
        }
        Point c{};
        for (Dart d : dual.faces.walks[f]) {
            Point q = patch->position(patch->dart_tail(d));
            c.x += q.x;
            c.y += q.y;
        }
        double n = static_cast<double>(dual.faces.walks[f].size());
        dual.centroids[f] = Point{c.x / n, c.y / n};
    }
    dual.primal_to_dual.assign(patch->edge_count(), 0);
    for (EdgeId e = 0; e < patch->edge_count(); ++e) {
        FaceId l = dual.faces.face_of_dart[make_dart(e, false)];
        FaceId r = dual.faces.face_of_dart[make_dart(e, true)];
        dual.primal_to_dual[e] = static_cast<std::uint32_t>(dual.dual_edges.size());
        dual.dual_edges.emplace_back(std::min(l, r), std::max(l, r));
        dual.dual_to_primal.push_back(e);
    }
    return dual;
}

PatchPtr bounded_dual_graph(const DualPatch& dual) {
    PatchBuilder b(PatchKind::plane);
    std::vector<VertexId> id_of_face(dual.vertex_count(), std::numeric_limits<VertexId>::max());
    Point o = dual.base->position(dual.base->origin());
    VertexId origin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (FaceId f = 0; f < dual.vertex_count(); ++f) {
        if (f == dual.outer_face()) continue;
        Point c = dual.centroids[f];
        id_of_face[f] = b.add_vertex({static_cast<int>(f)}, "f" + std::to_string(f), c);
        double dist = std::hypot(c.x - o.x, c.y - o.y);
        if (dist < best) {
            best = dist;
            origin = id_of_face[f];
        }
    }
    if (b.vertex_count() == 0) throw InvalidArgument("patch has no bounded faces");
    for (auto [f, g] : dual.dual_edges) {
        if (f == g || f == dual.outer_face() || g == dual.outer_face()) continue;
        b.add_edge(id_of_face[f], id_of_face[g]);
    }
    b.set_origin(origin);
    return b.finish(false);
}

std::vector<std::size_t> bfs_distances(const LatticePatch& patch, VertexId source) {
    constexpr auto inf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(patch.vertex_count(), inf);
    std::deque<VertexId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (const auto& inc : patch.incident(v))
            if (dist[inc.neighbor] == inf) {
                dist[inc.neighbor] = dist[v] + 1;
                queue.push_back(inc.neighbor);
            }
    }
    return dist;
}

bool is_connected(const LatticePatch& patch) {
    auto dist = bfs_distances(patch, 0);
    return std::none_of(dist.begin(), dist.end(),
                        [](std::size_t d) { return d == std::numeric_limits<std::size_t>::max(); });
}

Axis axis_of(const LatticePatch& patch) {
    auto dist = bfs_distances(patch, patch.origin());
    Axis axis;
    VertexId v = patch.origin();
    axis.vertices.push_back(v);
    while (!patch.is_escape(v)) {
        std::vector<int> preferred = patch.coords(v);
        preferred[0] += 1;
        std::optional<Incidence> pick;
        for (const auto& inc : patch.incident(v)) {
            if (dist[inc.neighbor] != dist[v] + 1) continue;
            if (patch.coords(inc.neighbor) == preferred) {
                pick = inc;
                break;
            }
            if (!pick || inc.neighbor < pick->neighbor) pick = inc;
        }
        if (!pick) throw StructuralError("no geodesic continuation towards the escape boundary");
        axis.edges.push_back(pick->edge);
        v = pick->neighbor;
        axis.vertices.push_back(v);
    }
    return axis;
}

std::size_t cycle_space_rank(const LatticePatch& patch) {
    if (!patch.has_basis()) return 0;
    const auto& basis = patch.basis();
    const std::size_t words = (patch.edge_count() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> pivots(patch.edge_count());
    std::size_t rank = 0;
    for (const auto& edges : basis.cycle_edges) {
        std::vector<std::uint64_t> row(words, 0);
        for (EdgeId e : edges) row[e / 64] ^= std::uint64_t{1} << (e % 64);
        for (std::size_t w = 0; w < words; ++w) {
            while (row[w] != 0) {
                std::size_t col = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row[w]));
                if (pivots[col].empty()) {
                    pivots[col] = row;
                    ++rank;
                    goto next_row;
                }
                for (std::size_t k = w; k < words; ++k) row[k] ^= pivots[col][k];
            }
        }
    next_row:;
    }
    return rank;
}

}  // namespace perc
