#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

#include "perc/interfaces.hpp"

namespace perc {

namespace {

// Calls visit(b, edge_of_b) for every directed edge b such that some basis
// cycle traverses v w P y x with a = vw, b = xy (head y), scanning outward
// from a; the scan along a cycle stops after an edge of F. The walk may close
// up, so b can be the reverse of a: the parity argument behind uniqueness
// needs a cycle meeting F once to link both directions of that edge.
template <class Visit>
void scan_p_paths(const LatticePatch& patch, Dart a, const std::vector<std::uint8_t>& forbidden, Visit&& visit) {
    const CycleBasis& basis = patch.basis();
    const EdgeId ea = dart_edge(a);
    const VertexId tail_a = patch.dart_tail(a);
    for (std::uint32_t idx : basis.cycles_of_edge[ea]) {
        const auto& cyc = basis.cycles[idx];
        const auto& ce = basis.cycle_edges[idx];
        const std::size_t t = cyc.size();
        for (int orientation = 0; orientation < 2; ++orientation) {
            auto vertex = [&](std::size_t j) { return orientation == 0 ? cyc[j % t] : cyc[(t - j % t) % t]; };
            auto edge = [&](std::size_t j) { return orientation == 0 ? ce[j % t] : ce[(2 * t - j % t - 1) % t]; };
            for (std::size_t i = 0; i < t; ++i) {
                if (edge(i) != ea || vertex(i) != tail_a) continue;
                for (std::size_t k = i + 1; k <= i + t; ++k) {
                    EdgeId ek = edge(k);
                    visit(patch.dart_from(ek, vertex(k + 1)), ek);
                    if (forbidden[ek]) break;
                }
            }
        }
    }
}

std::vector<std::uint8_t> component_flags(const LatticePatch& patch, std::span<const VertexId> sources,
                                          const std::vector<std::uint8_t>& blocked) {
    std::vector<std::uint8_t> in(patch.vertex_count(), 0);
    std::deque<VertexId> queue;
    for (VertexId s : sources)
        if (!in[s]) {
            in[s] = 1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (const auto& inc : patch.incident(v))
            if (!blocked[inc.edge] && !in[inc.neighbor]) {
                in[inc.neighbor] = 1;
                queue.push_back(inc.neighbor);
            }
    }
    return in;
}

std::vector<Dart> arriving_darts(const LatticePatch& patch, std::span<const EdgeId> edges,
                                 const std::vector<std::uint8_t>& region) {
    std::vector<Dart> out;
    for (EdgeId e : edges) {
        const Edge& ed = patch.edge(e);
        if (region[ed.b]) out.push_back(make_dart(e, false));
        if (region[ed.a]) out.push_back(make_dart(e, true));
    }
    return out;
}

std::vector<EdgeId> condition_four_set(const LatticePatch& patch, std::span<const Dart> J,
                                       const std::vector<std::uint8_t>& iv, const std::vector<std::uint8_t>& in_d) {
    std::vector<std::uint8_t> hit(patch.edge_count(), 0);
    for (Dart a : J)
        scan_p_paths(patch, a, iv, [&](Dart, EdgeId e) {
            const Edge& ed = patch.edge(e);
            if (!iv[e] && in_d[ed.a] && in_d[ed.b]) hit[e] = 1;
        });
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < patch.edge_count(); ++e)
        if (hit[e]) out.push_back(e);
    return out;
}

std::vector<VertexId> flagged(const std::vector<std::uint8_t>& flags) {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < flags.size(); ++v)
        if (flags[v]) out.push_back(v);
    return out;
}

bool has_escape(const LatticePatch& patch, const std::vector<std::uint8_t>& region) {
    for (VertexId v : patch.escape_vertices())
        if (region[v]) return true;
    return false;
}

}  // namespace

std::vector<std::uint8_t> edge_flags(const LatticePatch& patch, std::span<const EdgeId> edges) {
    std::vector<std::uint8_t> f(patch.edge_count(), 0);
    for (EdgeId e : edges) f.at(e) = 1;
    return f;
}

bool p_path_exists(const LatticePatch& patch, Dart from, Dart to, const std::vector<std::uint8_t>& forbidden) {
    bool found = false;
    scan_p_paths(patch, from, forbidden, [&](Dart b, EdgeId) { found = found || b == to; });
    return found;
}

std::vector<std::size_t> f_components(const LatticePatch& patch, std::span<const Dart> J,
                                      const std::vector<std::uint8_t>& forbidden) {
    std::vector<std::int64_t> slot(2 * patch.edge_count(), -1);
    for (std::size_t i = 0; i < J.size(); ++i) slot.at(J[i]) = static_cast<std::int64_t>(i);
    std::vector<std::size_t> parent(J.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < J.size(); ++i)
        scan_p_paths(patch, J[i], forbidden, [&](Dart b, EdgeId) {
            if (slot[b] >= 0) parent[find(i)] = find(static_cast<std::size_t>(slot[b]));
        });
    std::vector<std::size_t> label(J.size());
    std::vector<std::int64_t> relabel(J.size(), -1);
    std::size_t next = 0;
    for (std::size_t i = 0; i < J.size(); ++i) {
        std::size_t r = find(i);
        if (relabel[r] < 0) relabel[r] = static_cast<std::int64_t>(next++);
        label[i] = static_cast<std::size_t>(relabel[r]);
    }
    return label;
}

PInterface extract_p_interface(const Config& config, const Cluster& cluster) {
    const LatticePatch& patch = *config.patch;
    if (config.mode != Mode::bond) throw InvalidArgument("P-interfaces are defined for bond percolation");
    if (cluster.touches_escape) throw InvalidArgument("cluster touches the escape boundary");
    if (cluster.vertices.empty()) throw InvalidArgument("empty cluster");
    if (!patch.has_basis()) throw InvalidArgument("patch has no cycle basis");
    const std::size_t t = patch.basis().max_length;

    // The cluster's t-neighbourhood must stay inside the patch.
    {
        std::vector<std::size_t> dist(patch.vertex_count(), std::numeric_limits<std::size_t>::max());
        std::deque<VertexId> queue;
        for (VertexId v : cluster.vertices) {
            dist[v] = 0;
            queue.push_back(v);
        }
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            if (patch.is_escape(v)) throw PatchTooSmall("cluster is within the cycle length of the escape boundary; enlarge radius");
            if (dist[v] == t) continue;
            for (const auto& inc : patch.incident(v))
                if (dist[inc.neighbor] == std::numeric_limits<std::size_t>::max()) {
                    dist[inc.neighbor] = dist[v] + 1;
                    queue.push_back(inc.neighbor);
                }
        }
    }

    const auto boundary_flags = edge_flags(patch, cluster.boundary);
    auto outside = component_flags(patch, patch.escape_vertices(), boundary_flags);
    std::vector<std::uint8_t> in_c(patch.vertex_count(), 0);
    for (VertexId v : cluster.vertices) in_c[v] = 1;

    std::vector<Dart> toward_c;  // directions of B pointing into C
    for (EdgeId e : cluster.boundary) {
        const Edge& ed = patch.edge(e);
        if (outside[ed.a] && in_c[ed.b]) toward_c.push_back(make_dart(e, false));
        if (outside[ed.b] && in_c[ed.a]) toward_c.push_back(make_dart(e, true));
    }
    if (toward_c.empty()) throw StructuralError("cluster boundary does not face the escape boundary");

    std::vector<Dart> all;
    for (EdgeId e : cluster.boundary) {
        all.push_back(make_dart(e, false));
        all.push_back(make_dart(e, true));
    }
    auto label = f_components(patch, all, boundary_flags);
    std::vector<std::uint8_t> chosen(all.size(), 0);
    for (Dart d : toward_c) {
        std::size_t i = static_cast<std::size_t>(std::find(all.begin(), all.end(), d) - all.begin());
        chosen[label[i]] = 1;
    }

    PInterface out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (chosen[label[i]]) out.i_v.push_back(dart_edge(all[i]));
    std::sort(out.i_v.begin(), out.i_v.end());
    out.i_v.erase(std::unique(out.i_v.begin(), out.i_v.end()), out.i_v.end());

    const auto iv = edge_flags(patch, out.i_v);
    auto in_d = component_flags(patch, std::span<const VertexId>(cluster.vertices.data(), 1), iv);
    if (has_escape(patch, in_d)) throw PatchTooSmall("interface does not enclose a finite region; enlarge radius");
    out.witness = flagged(in_d);
    auto J = arriving_darts(patch, out.i_v, in_d);
    out.i_o = condition_four_set(patch, J, iv, in_d);
    return out;
}

VerificationReport verify_p_interface(const LatticePatch& patch, const PInterface& candidate,
                                      std::optional<VertexId> origin, const Config* config) {
    VerificationReport report;
    auto fail = [&](std::string id) {
        report.valid = false;
        report.violations.push_back(std::move(id));
    };
    if (!patch.has_basis()) throw InvalidArgument("patch has no cycle basis");
    const VertexId o = origin.value_or(patch.origin());
    const auto iv = edge_flags(patch, candidate.i_v);

    auto from_o = component_flags(patch, std::span<const VertexId>(&o, 1), iv);
    if (candidate.i_v.empty() || has_escape(patch, from_o)) fail("1");

    // Components of G - I_V, marking the finite ones meeting every I_V edge.
    std::vector<std::int64_t> comp(patch.vertex_count(), -1);
    std::vector<std::vector<VertexId>> members;
    for (VertexId s = 0; s < patch.vertex_count(); ++s) {
        if (comp[s] >= 0) continue;
        auto flags = component_flags(patch, std::span<const VertexId>(&s, 1), iv);
        members.push_back(flagged(flags));
        for (VertexId v : members.back()) comp[v] = static_cast<std::int64_t>(members.size() - 1);
    }
    std::vector<std::size_t> candidates;
    for (std::size_t c = 0; c < members.size(); ++c) {
        bool finite = std::none_of(members[c].begin(), members[c].end(), [&](VertexId v) { return patch.is_escape(v); });
        if (!finite || candidate.i_v.empty()) continue;
        bool meets_all = std::all_of(candidate.i_v.begin(), candidate.i_v.end(), [&](EdgeId e) {
            const Edge& ed = patch.edge(e);
            return comp[ed.a] == static_cast<std::int64_t>(c) || comp[ed.b] == static_cast<std::int64_t>(c);
        });
        if (meets_all) candidates.push_back(c);
    }
    if (candidates.size() != 1) {
        fail("2");
    } else {
        std::vector<std::uint8_t> in_d(patch.vertex_count(), 0);
        for (VertexId v : members[candidates[0]]) in_d[v] = 1;
        auto J = arriving_darts(patch, candidate.i_v, in_d);
        auto label = f_components(patch, J, iv);
        if (std::any_of(label.begin(), label.end(), [](std::size_t l) { return l != 0; })) fail("3");
        if (condition_four_set(patch, J, iv, in_d) != candidate.i_o) fail("4");
    }
    if (config && !p_interface_occurs(*config, candidate)) fail("occurrence");
    return report;
}

bool p_interface_occurs(const Config& config, const PInterface& interface) {
    for (EdgeId e : interface.i_v)
        if (config.edge_open(e)) return false;
    for (EdgeId e : interface.i_o)
        if (!config.edge_open(e)) return false;
    return true;
}

PeierlsBound peierls_bound(unsigned degree, unsigned t, Mode mode) {
    if (t < 3) throw InvalidArgument("relator length t must be at least 3");
    if (degree < 3) throw InvalidArgument("degree must be at least 3");
    const double m = std::floor(t / 2.0);
    const double base = mode == Mode::bond ? 2.0 * degree - 2.0 : static_cast<double>(degree);
    PeierlsBound b;
    b.gamma = (std::pow(base, m) - 1.0) * std::numbers::e;
    b.p_bound = 1.0 - 1.0 / b.gamma;
    return b;
}

PeierlsBound peierls_bound(const Presentation& pres, Mode mode) {
    pres.validate();
    return peierls_bound(static_cast<unsigned>(2 * pres.generator_count),
                         static_cast<unsigned>(pres.max_relator_length()), mode);
}

}  // namespace perc
