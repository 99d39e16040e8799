#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "perc/enumeration.hpp"
#include "perc/interfaces.hpp"

namespace perc {

namespace {

std::size_t index_in_rotation(std::span<const Incidence> rot, EdgeId e) {
    for (std::size_t i = 0; i < rot.size(); ++i)
        if (rot[i].edge == e) return i;
    throw StructuralError("edge missing from rotation");
}

bool spans_connected(const std::vector<VertexId>& sorted, const std::vector<Edge>& edges) {
    std::vector<std::uint32_t> parent(sorted.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto local = [&](VertexId v) {
        return static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
    };
    std::size_t merges = 0;
    for (const auto& e : edges) {
        auto a = find(local(e.a)), b = find(local(e.b));
        if (a != b) {
            parent[a] = b;
            ++merges;
        }
    }
    return merges + 1 == sorted.size();
}

}  // namespace

PlanarInterface planar_interface_of(const LatticePatch& patch, std::span<const VertexId> vertices,
                                    std::span<const EdgeId> edges) {
    if (!patch.has_embedding()) throw InvalidArgument("planar interfaces need an embedded patch");
    if (vertices.empty()) throw InvalidArgument("empty subgraph");
    PlanarInterface out;
    if (edges.empty()) {
        if (vertices.size() != 1) throw InvalidArgument("subgraph is not connected");
        VertexId v = vertices.front();
        out.vertices = {v};
        for (const auto& inc : patch.incident(v)) out.outer.push_back(inc.edge);
        std::sort(out.outer.begin(), out.outer.end());
        return out;
    }

    std::vector<std::uint8_t> in_h(patch.edge_count(), 0);
    for (EdgeId e : edges) in_h[e] = 1;
    auto h_next = [&](Dart d) {
        VertexId v = patch.dart_head(d);
        auto rot = patch.incident(v);
        std::size_t idx = index_in_rotation(rot, dart_edge(d));
        for (std::size_t step = 1; step <= rot.size(); ++step) {
            const auto& inc = rot[(idx + rot.size() - step) % rot.size()];
            if (in_h[inc.edge]) return patch.dart_from(inc.edge, v);
        }
        throw StructuralError("dangling dart");
    };

    // Trace every face of H; the unbounded one has the smallest signed area.
    std::vector<Dart> darts;
    for (EdgeId e : edges) {
        darts.push_back(make_dart(e, false));
        darts.push_back(make_dart(e, true));
    }
    std::sort(darts.begin(), darts.end());
    std::vector<std::uint8_t> seen(darts.size(), 0);
    auto slot = [&](Dart d) { return static_cast<std::size_t>(std::lower_bound(darts.begin(), darts.end(), d) - darts.begin()); };
    double best_area = std::numeric_limits<double>::infinity();
    std::vector<Dart> best;
    for (std::size_t i = 0; i < darts.size(); ++i) {
        if (seen[i]) continue;
        std::vector<Dart> walk;
        double area = 0.0;
        Dart d = darts[i];
        do {
            seen[slot(d)] = 1;
            walk.push_back(d);
            Point a = patch.position(patch.dart_tail(d)), c = patch.position(patch.dart_head(d));
            area += a.x * c.y - c.x * a.y;
            d = h_next(d);
        } while (d != darts[i]);
        if (area < best_area - 1e-9) {
            best_area = area;
            best = std::move(walk);
        }
    }

    // Deterministic start: the walk position whose tail is the smallest vertex.
    auto start = std::min_element(best.begin(), best.end(), [&](Dart l, Dart r) {
        return std::make_pair(patch.dart_tail(l), l) < std::make_pair(patch.dart_tail(r), r);
    });
    std::rotate(best.begin(), start, best.end());
    out.walk = best;

    for (std::size_t j = 0; j < best.size(); ++j) {
        Dart in = best[j], next = best[(j + 1) % best.size()];
        out.vertices.push_back(patch.dart_tail(in));
        out.inner.push_back(dart_edge(in));
        VertexId v = patch.dart_head(in);
        auto rot = patch.incident(v);
        std::size_t idx_in = index_in_rotation(rot, dart_edge(in));
        std::size_t idx_out = index_in_rotation(rot, dart_edge(next));
        for (std::size_t k = (idx_in + rot.size() - 1) % rot.size(); k != idx_out; k = (k + rot.size() - 1) % rot.size())
            out.outer.push_back(rot[k].edge);
    }
    for (auto* v : {&out.inner, &out.outer}) {
        std::sort(v->begin(), v->end());
        v->erase(std::unique(v->begin(), v->end()), v->end());
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
    return out;
}

PlanarInterface extract_planar_interface(const Config& config, const Cluster& cluster) {
    if (cluster.touches_escape) throw InvalidArgument("cluster touches the escape boundary");
    if (cluster.vertices.empty()) throw InvalidArgument("empty cluster");
    return planar_interface_of(*config.patch, cluster.vertices, cluster.edges);
}

bool interface_occurs(const Config& config, const PlanarInterface& interface) {
    for (VertexId v : interface.vertices)
        if (!config.vertex_open(v)) return false;
    for (EdgeId e : interface.inner)
        if (!config.edge_open(e)) return false;
    for (EdgeId e : interface.outer)
        if (config.edge_open(e)) return false;
    return true;
}

bool interface_surrounds(const LatticePatch& patch, const PlanarInterface& interface, VertexId v) {
    if (std::binary_search(interface.vertices.begin(), interface.vertices.end(), v)) return true;
    if (interface.walk.empty()) return false;
    Point o = patch.position(v);
    double winding = 0.0;
    for (Dart d : interface.walk) {
        Point a = patch.position(patch.dart_tail(d)), b = patch.position(patch.dart_head(d));
        double a1 = std::atan2(a.y - o.y, a.x - o.x), a2 = std::atan2(b.y - o.y, b.x - o.x);
        double delta = a2 - a1;
        while (delta > std::numbers::pi) delta -= 2 * std::numbers::pi;
        while (delta < -std::numbers::pi) delta += 2 * std::numbers::pi;
        winding += delta;
    }
    return std::abs(winding) > std::numbers::pi;
}

std::size_t MultiInterface::boundary_size() const {
    std::vector<EdgeId> all;
    for (const auto& p : parts) all.insert(all.end(), p.outer.begin(), p.outer.end());
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

std::size_t MultiInterface::inner_size() const {
    std::size_t s = 0;
    for (const auto& p : parts) s += p.inner.size();
    return s;
}

std::vector<PlanarInterface> occurring_interfaces(const Config& config, std::optional<VertexId> around) {
    const LatticePatch& patch = *config.patch;
    VertexId centre = around.value_or(patch.origin());
    std::vector<VertexId> ray{centre};
    for (;;) {
        if (patch.is_escape(ray.back())) break;
        auto c = patch.coords(ray.back());
        c[0] += 1;
        auto next = patch.find_vertex(c);
        if (!next) break;
        ray.push_back(*next);
    }
    std::vector<std::uint8_t> done(patch.vertex_count(), 0);
    std::vector<PlanarInterface> out;
    for (VertexId x : ray) {
        if (done[x] || !config.vertex_open(x)) continue;
        Cluster c = cluster_of(config, x);
        for (VertexId v : c.vertices) done[v] = 1;
        if (c.touches_escape) continue;
        PlanarInterface s = planar_interface_of(patch, c.vertices, c.edges);
        if (interface_surrounds(patch, s, centre)) out.push_back(std::move(s));
    }
    return out;
}

std::vector<MultiInterface> occurring_multi_interfaces(const Config& config, std::size_t boundary_cap,
                                                       std::optional<VertexId> around) {
    std::vector<PlanarInterface> found;
    for (auto& s : occurring_interfaces(config, around))
        if (s.boundary_size() <= boundary_cap) found.push_back(std::move(s));
    for (std::size_t i = 0; i < found.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = found[i].vertices;
            const auto& b = found[j].vertices;
            std::vector<VertexId> common;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
            if (!common.empty()) throw StructuralError("distinct occurring interfaces share a vertex");
        }
    if (found.size() > 20) throw CapExceeded("too many occurring interfaces to list their subsets");
    std::vector<MultiInterface> out;
    for (std::uint32_t mask = 1; mask < (1u << found.size()); ++mask) {
        MultiInterface m;
        for (std::size_t i = 0; i < found.size(); ++i)
            if (mask >> i & 1u) m.parts.push_back(found[i]);
        if (m.boundary_size() <= boundary_cap) out.push_back(std::move(m));
    }
    return out;
}

std::size_t dual_boundary_components(const DualPatch& dual, std::span<const EdgeId> outer_edges) {
    std::vector<std::uint32_t> parent(dual.vertex_count());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::uint32_t> touched;
    for (EdgeId e : outer_edges) {
        auto [f, g] = dual.dual_edges.at(dual.primal_to_dual.at(e));
        touched.push_back(f);
        touched.push_back(g);
        parent[find(f)] = find(g);
    }
    std::vector<std::uint32_t> roots;
    for (auto f : touched) roots.push_back(find(f));
    std::sort(roots.begin(), roots.end());
    return static_cast<std::size_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

std::size_t dual_boundary_components(const DualPatch& dual, const MultiInterface& multi) {
    std::vector<EdgeId> all;
    for (const auto& p : multi.parts) all.insert(all.end(), p.outer.begin(), p.outer.end());
    return dual_boundary_components(dual, all);
}

InterfaceCatalog enumerate_planar_interfaces(const LatticePatch& patch, std::size_t max_boundary, std::size_t cap) {
    if (!patch.has_embedding()) throw InvalidArgument("planar interfaces need an embedded patch");
    if (cap == 0) cap = enumeration_cap(kDefaultShapeCap);
    InterfaceCatalog catalog;
    catalog.max_boundary = max_boundary;
    auto interior = [&](VertexId v) { return !patch.is_escape(v); };

    for (std::size_t size = 1;; ++size) {
        std::size_t min_perimeter = std::numeric_limits<std::size_t>::max();
        for_each_connected_set(patch, patch.origin(), size, [&](std::span<const VertexId> set) {
            if (set.size() != size) return;
            std::vector<VertexId> sorted(set.begin(), set.end());
            std::sort(sorted.begin(), sorted.end());
            auto induced = induced_edges(patch, sorted);
            std::size_t degree_sum = 0;
            for (VertexId v : sorted) degree_sum += patch.degree(v);
            std::size_t perimeter = degree_sum - 2 * induced.size();
            min_perimeter = std::min(min_perimeter, perimeter);
            if (perimeter > max_boundary) return;
            for (VertexId v : sorted)
                for (const auto& inc : patch.incident(v))
                    if (patch.is_escape(inc.neighbor)) throw PatchTooSmall("interface enumeration reaches the escape boundary");
            const std::size_t slack = max_boundary - perimeter;
            const std::size_t m = induced.size();
            // Remove up to `slack` induced edges. H is kept when every removed edge and
            // every edge leaving the set lies on the unbounded side, which picks the
            // closed region of each interface exactly once.
            std::vector<std::size_t> chosen;
            std::function<void(std::size_t)> choose = [&](std::size_t from) {
                std::vector<EdgeId> kept;
                for (std::size_t i = 0, c = 0; i < m; ++i) {
                    if (c < chosen.size() && chosen[c] == i) {
                        ++c;
                        continue;
                    }
                    kept.push_back(induced[i]);
                }
                std::vector<Edge> ends;
                for (EdgeId e : kept) ends.push_back(patch.edge(e));
                if (spans_connected(sorted, ends)) {
                    PlanarInterface s = planar_interface_of(patch, sorted, kept);
                    if (s.outer.size() == perimeter + chosen.size()) {
                        catalog.interfaces.push_back(std::move(s));
                        catalog.largest_vertex_count = std::max(catalog.largest_vertex_count, sorted.size());
                        if (catalog.interfaces.size() > cap) throw CapExceeded("interface enumeration exceeded its cap");
                    }
                }
                if (chosen.size() == slack) return;
                for (std::size_t i = from; i < m; ++i) {
                    chosen.push_back(i);
                    choose(i + 1);
                    chosen.pop_back();
                }
            };
            choose(0);
        }, cap, interior);
        if (min_perimeter > max_boundary) break;
    }
    std::sort(catalog.interfaces.begin(), catalog.interfaces.end(), [](const PlanarInterface& a, const PlanarInterface& b) {
        if (a.outer.size() != b.outer.size()) return a.outer.size() < b.outer.size();
        if (a.vertices != b.vertices) return a.vertices < b.vertices;
        return a.inner < b.inner;
    });
    return catalog;
}

}  // namespace perc
