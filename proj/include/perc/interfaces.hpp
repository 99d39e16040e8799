#pragma once

#include <span>
#include <string>
#include <vector>

#include "perc/graph_core.hpp"
#include "perc/percolation.hpp"
#include "perc/presentation.hpp"

namespace perc {

// ---- planar interfaces ----

struct PlanarInterface {
    std::vector<VertexId> vertices;  // vertices on the outer walk, sorted
    std::vector<EdgeId> inner;       // edges on the outer walk, sorted
    std::vector<EdgeId> outer;       // lattice edges at the walk on the unbounded side, sorted
    std::vector<Dart> walk;          // outer walk, empty for a single vertex

    std::size_t boundary_size() const { return outer.size(); }
    bool operator==(const PlanarInterface& o) const {
        return vertices == o.vertices && inner == o.inner && outer == o.outer;
    }
};

// Interface of a connected subgraph H of an embedded patch: S is everything
// incident with the unbounded face of H.
PlanarInterface planar_interface_of(const LatticePatch& patch, std::span<const VertexId> vertices,
                                    std::span<const EdgeId> edges);

PlanarInterface extract_planar_interface(const Config& config, const Cluster& cluster);

bool interface_occurs(const Config& config, const PlanarInterface& interface);

// True iff v lies on S or inside the region bounded by the outer walk.
bool interface_surrounds(const LatticePatch& patch, const PlanarInterface& interface, VertexId v);

struct MultiInterface {
    std::vector<PlanarInterface> parts;

    std::size_t count() const { return parts.size(); }
    std::size_t boundary_size() const;
    std::size_t inner_size() const;
    int sign() const { return parts.size() % 2 == 1 ? 1 : -1; }
};

// Every occurring interface surrounding `around` (default: origin), found
// through the finite clusters meeting the axis, innermost first.
std::vector<PlanarInterface> occurring_interfaces(const Config& config, std::optional<VertexId> around = {});

// All occurring multi-interfaces around o with |∂M| <= boundary_cap.
std::vector<MultiInterface> occurring_multi_interfaces(const Config& config, std::size_t boundary_cap,
                                                       std::optional<VertexId> around = {});

std::size_t dual_boundary_components(const DualPatch& dual, std::span<const EdgeId> outer_edges);
std::size_t dual_boundary_components(const DualPatch& dual, const MultiInterface& multi);

// Every separating interface (occurring or not) surrounding the origin with
// |∂S| <= max_boundary, each exactly once. Built from filled subgraphs H ∋ o,
// which are in bijection with interfaces.
struct InterfaceCatalog {
    std::vector<PlanarInterface> interfaces;
    std::size_t max_boundary = 0;
    std::size_t largest_vertex_count = 0;
};
InterfaceCatalog enumerate_planar_interfaces(const LatticePatch& patch, std::size_t max_boundary,
                                             std::size_t cap = 0);

// ---- P-interfaces ----

struct PInterface {
    std::vector<EdgeId> i_v;              // sorted
    std::vector<EdgeId> i_o;              // sorted
    std::vector<VertexId> witness;        // the finite component D, sorted
};

struct VerificationReport {
    bool valid = true;
    std::vector<std::string> violations;  // condition ids "1".."4", "occurrence"
};

// Edge flags helper.
std::vector<std::uint8_t> edge_flags(const LatticePatch& patch, std::span<const EdgeId> edges);

bool p_path_exists(const LatticePatch& patch, Dart from, Dart to, const std::vector<std::uint8_t>& forbidden);

// Component label per element of J under P-path reachability in G - F.
std::vector<std::size_t> f_components(const LatticePatch& patch, std::span<const Dart> J,
                                      const std::vector<std::uint8_t>& forbidden);

PInterface extract_p_interface(const Config& config, const Cluster& cluster);

VerificationReport verify_p_interface(const LatticePatch& patch, const PInterface& candidate,
                                      std::optional<VertexId> origin = {}, const Config* config = nullptr);

bool p_interface_occurs(const Config& config, const PInterface& interface);

struct PeierlsBound {
    double gamma = 0.0;
    double p_bound = 0.0;
};

// Bond: gamma = ((2d-2)^{floor(t/2)} - 1) e; site: (d^{floor(t/2)} - 1) e.
PeierlsBound peierls_bound(unsigned degree, unsigned t, Mode mode = Mode::bond);
PeierlsBound peierls_bound(const Presentation& pres, Mode mode = Mode::bond);

}  // namespace perc
