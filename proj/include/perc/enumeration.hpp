#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "perc/graph_core.hpp"
#include "perc/percolation.hpp"
#include "perc/rational.hpp"

namespace perc {

inline constexpr std::size_t kDefaultShapeCap = 20'000'000;
inline constexpr unsigned kBruteForceMaxBits = 25;

struct ClusterShape {
    std::vector<VertexId> vertices;  // sorted, contains o
    std::vector<EdgeId> edges;       // sorted, spans the vertices
    unsigned boundary_size = 0;      // |∂S| in the patch

    unsigned edge_count() const { return static_cast<unsigned>(edges.size()); }
    bool operator<(const ClusterShape& o) const;
    bool operator==(const ClusterShape& o) const { return vertices == o.vertices && edges == o.edges; }
};

// Every connected vertex set containing root with at most max_size
// vertices, each exactly once (Redelmeier's extension-set scheme). allowed
// may exclude vertices. Throws CapExceeded after cap sets.
void for_each_connected_set(const LatticePatch& patch, VertexId root, std::size_t max_size,
                            const std::function<void(std::span<const VertexId>)>& visit,
                            std::size_t cap = kDefaultShapeCap,
                            const std::function<bool(VertexId)>& allowed = {});

// Edge subsets of `edges` that connect all of `vertices`, as bit masks.
std::vector<std::uint64_t> spanning_connected_subsets(std::span<const VertexId> vertices,
                                                      std::span<const Edge> edges);

// Edges of the patch with both ends in the (sorted) vertex set.
std::vector<EdgeId> induced_edges(const LatticePatch& patch, std::span<const VertexId> sorted_vertices);

std::vector<ClusterShape> enumerate_clusters(const LatticePatch& patch, VertexId o, std::size_t n,
                                             std::size_t cap = 0);

// P_n(p) grouped by (|E(S)|, |∂S|); boundary counted in the patch itself,
// which matches the infinite lattice once radius > n.
ShapeSum cluster_size_polynomial(const LatticePatch& patch, VertexId o, std::size_t n, std::size_t cap = 0);

// Exact distribution of |C(o)| by exploring the cluster edge by edge and
// branching on each revealed edge. Entry k-1 holds Pr(|C(o)| = k) for
// k <= n_max; the last entry holds Pr(|C(o)| > n_max). Bond percolation.
std::vector<ShapeSum> exploration_size_distribution(const LatticePatch& patch, VertexId o, std::size_t n_max,
                                                    std::size_t cap = 0);

// counts[c][k] = number of configurations with k occupied units whose
// classify() value is c, over all 2^units configurations.
std::vector<std::vector<mpz_class>> brute_force_tally(const PatchPtr& patch, Mode mode,
                                                      const std::function<std::size_t(const Config&)>& classify,
                                                      std::size_t classes);
mpq_class tally_probability(const std::vector<mpz_class>& counts, const mpq_class& p);

mpq_class brute_force_event_probability(const PatchPtr& patch, Mode mode,
                                        const std::function<bool(const Config&)>& predicate, const mpq_class& p);

// |C(o)| in a config; 0 for a vacant site.
std::size_t origin_cluster_size(const Config& config, ClusterExplorer& explorer);

mpz_class count_partitions(unsigned n);
std::vector<mpz_class> partition_table(unsigned n_max);
double hardy_ramanujan_ratio(unsigned n);

enum class AnimalMethod { formula, brute };
mpz_class count_tree_animals(unsigned d, unsigned n, AnimalMethod method, std::size_t cap = 0);

struct AnimalBoundFit {
    unsigned d = 0;
    unsigned n_max = 0;
    mpz_class constant;       // smallest integer c with S_n < c ((d-1)e)^n for n <= n_max
    double max_ratio = 0.0;   // max over n of S_n / ((d-1)e)^n
    unsigned argmax = 0;
};
AnimalBoundFit fit_tree_animal_bound(unsigned d, unsigned n_max);

}  // namespace perc
