#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "perc/percolation.hpp"

namespace perc {

struct SuiteCheck {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<SuiteCheck> checks;

    bool passed() const;
    void add(std::string name, bool passed, std::string detail = {});
};

// Fixed rational weights on {0,1,2,3}, restricted to the first n vertices.
LongRangeModel asymmetric_model(std::size_t n);

// uniform 1, uniform 1/2 and the asymmetric weights on 1..max_vertices vertices.
std::vector<std::pair<std::string, LongRangeModel>> alternation_models(std::size_t max_vertices);

struct AlternationOptions {
    std::size_t max_vertices = 4;
    std::size_t m_max = 4;
    std::size_t k_max = 12;
    std::vector<mpq_class> negative_origins{mpq_class(-1, 2), mpq_class(-1)};
};

// Sign patterns of p_m and f_m at 0 and of p_m at negative origins, zero
// order at 0, and the exact identity sum_m p_m = 1.
SuiteResult alternation_suite(const AlternationOptions& opts);

struct UniquenessOptions {
    int radius = 20;
    std::vector<double> planar_p{0.55, 0.7, 0.9};
    std::uint64_t planar_samples = 10'000;
    int cube_radius = 8;
    std::vector<double> cube_p{0.8, 0.9};
    std::uint64_t cube_samples = 1'000;
    std::uint64_t seed = 1;
    std::size_t multi_cap = 40;  // boundary cap for multi-interface listing
};

struct UniquenessStats {
    std::uint64_t planar_configs = 0;
    std::uint64_t planar_finite = 0;
    std::uint64_t planar_violations = 0;
    std::uint64_t p_agreement_failures = 0;   // P-interface vs planar interface on Z^2
    std::uint64_t cube_configs = 0;
    std::uint64_t cube_clusters = 0;          // finite clusters checked
    std::uint64_t cube_too_small = 0;
    std::uint64_t cube_violations = 0;
    std::uint64_t boundary_ratio_violations = 0;  // |outer| < |inner| / 2
    std::uint64_t port_violations = 0;            // |I_V| < |I_O| / d^t
    std::uint64_t multi_checked = 0;
    std::uint64_t dual_count_violations = 0;
    double min_boundary_ratio = 0.0;  // min |outer| / |inner|
    double min_port_ratio = 0.0;      // min |I_V| d^t / |I_O|
    std::vector<std::string> examples;
};

// Interface uniqueness on square patches and Z^3 Cayley patches, with the
// boundary-size lemmas and the dual component count checked on every
// interface met along the way.
SuiteResult uniqueness_suite(const UniquenessOptions& opts, UniquenessStats* stats = nullptr);

struct BoundsOptions {
    std::uint64_t shapes = 1'000;
    std::size_t points = 256;
    std::uint64_t seed = 1;
    unsigned animal_d_max = 6;
    unsigned animal_n_max = 40;
};

// Disc bounds on random cluster shapes and long-range p_m, Peierls
// constants for Z^d, tree-animal bounds.
SuiteResult bounds_suite(const BoundsOptions& opts);

}  // namespace perc
