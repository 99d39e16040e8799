#pragma once

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "perc/graph_core.hpp"

namespace perc {

enum class Mode { bond, site };

// Counter-based uniform draw in [0,1) keyed by (seed, sample, index).
std::uint64_t mix64(std::uint64_t x);
double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t index);

class LongRangeModel {
public:
    struct Pair {
        VertexId a;
        VertexId b;
        mpq_class mu;
    };

    // Pairs may be listed once; listing a pair twice with different weights
    // is rejected. Zero weights are dropped.
    LongRangeModel(std::size_t vertex_count, const std::vector<Pair>& weights);

    static LongRangeModel uniform(std::size_t n, const mpq_class& mu);
    // Nearest-neighbour support on 0..n-1.
    static LongRangeModel path(std::size_t n, const mpq_class& mu);

    std::size_t vertex_count() const { return n_; }
    const mpq_class& weight(VertexId a, VertexId b) const;
    const std::vector<Pair>& pairs() const { return pairs_; }
    mpq_class row_sum(VertexId v) const;
    // Every row sum is at most 1.
    bool normalized() const;
    // Sum of mu over all pairs with at least one end in the set.
    mpq_class incident_weight(const std::vector<VertexId>& vertices) const;

    // Graph on the positive-weight pairs; edge ids follow pairs() order.
    const PatchPtr& support() const { return support_; }

private:
    std::size_t n_;
    std::vector<Pair> pairs_;
    std::vector<std::vector<mpq_class>> matrix_;
    PatchPtr support_;
};

struct Config {
    PatchPtr patch;
    Mode mode = Mode::bond;
    std::vector<std::uint8_t> occupied;  // per edge (bond) or vertex (site)
    double parameter = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t sample = 0;

    bool edge_open(EdgeId e) const;
    bool vertex_open(VertexId v) const;
};

Config sample_config(const PatchPtr& patch, Mode mode, double p, std::uint64_t seed, std::uint64_t sample = 0);
Config sample_config(const LongRangeModel& model, double t, std::uint64_t seed, std::uint64_t sample = 0);
Config constant_config(const PatchPtr& patch, Mode mode, bool occupied);

struct Cluster {
    std::vector<VertexId> vertices;   // sorted
    std::vector<EdgeId> edges;        // E(S), sorted
    std::vector<EdgeId> boundary;     // edges with an end in S outside E(S), sorted
    bool touches_escape = false;

    bool contains(VertexId v) const;
};

// In site mode a vacant vertex has an empty cluster whose boundary is its
// incident edges.
Cluster cluster_of(const Config& config, VertexId v);

// Reusable search scratch for hot loops.
class ClusterExplorer {
public:
    explicit ClusterExplorer(const LatticePatch& patch);

    struct Result {
        std::size_t size = 0;
        bool touches_escape = false;
    };

    // open(edge, neighbour) decides whether the search may cross an edge.
    template <class Open>
    Result explore(VertexId start, Open&& open, bool stop_at_escape, std::size_t stop_at_size = 0);

    bool visited(VertexId v) const { return stamp_[v] == epoch_; }

private:
    const LatticePatch& patch_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
    std::vector<VertexId> stack_;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
};

struct EstimatorOptions {
    std::size_t threads = 0;  // 0 = hardware concurrency
};

Estimate estimate_theta(const PatchPtr& patch, Mode mode, double p, std::uint64_t samples, std::uint64_t seed,
                        EstimatorOptions opts = {});
Estimate estimate_chi_truncated(const PatchPtr& patch, Mode mode, double p, std::uint64_t samples,
                                std::uint64_t seed, EstimatorOptions opts = {});

struct TauEstimate {
    Estimate tau;
    Estimate tau_f;
};

TauEstimate estimate_tau(const PatchPtr& patch, Mode mode, const std::vector<VertexId>& points, double p,
                         std::uint64_t samples, std::uint64_t seed, EstimatorOptions opts = {});
Estimate tail_probability(const PatchPtr& patch, Mode mode, double p, std::size_t m, std::uint64_t samples,
                          std::uint64_t seed, EstimatorOptions opts = {});

// Runs body(begin, end, worker) over [0, samples) on a worker pool with
// contiguous blocks per worker.
void parallel_samples(std::uint64_t samples, std::size_t threads,
                      const std::function<void(std::uint64_t begin, std::uint64_t end, std::size_t worker)>& body);
std::size_t resolve_threads(std::size_t requested);

// ---- template implementation ----

template <class Open>
ClusterExplorer::Result ClusterExplorer::explore(VertexId start, Open&& open, bool stop_at_escape,
                                                  std::size_t stop_at_size) {
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    Result result;
    stack_.clear();
    stack_.push_back(start);
    stamp_[start] = epoch_;
    while (!stack_.empty()) {
        VertexId v = stack_.back();
        stack_.pop_back();
        ++result.size;
        if (stop_at_size != 0 && result.size >= stop_at_size) return result;
        if (patch_.is_escape(v)) {
            result.touches_escape = true;
            if (stop_at_escape) return result;
        }
        for (const auto& inc : patch_.incident(v)) {
            if (stamp_[inc.neighbor] == epoch_) continue;
            if (!open(inc.edge, inc.neighbor)) continue;
            stamp_[inc.neighbor] = epoch_;
            stack_.push_back(inc.neighbor);
        }
    }
    return result;
}

}  // namespace perc
