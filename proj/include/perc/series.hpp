#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>
#include <gmpxx.h>

#include "perc/enumeration.hpp"
#include "perc/graph_core.hpp"
#include "perc/interfaces.hpp"
#include "perc/percolation.hpp"
#include "perc/rational.hpp"

namespace perc {

// 100 decimal digits; used where exact rationals are impossible (e^{-a r}
// with r != 0) and for cancellation-prone sums.
using BigFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<100>,
                                               boost::multiprecision::et_off>;

BigFloat to_big(const mpq_class& q);

// Sum of c_j e^{-a_j t} with exact rational c_j, a_j; terms are keyed by the
// rate and never hold a zero coefficient.
class ExpSum {
public:
    ExpSum() = default;
    static ExpSum constant(const mpq_class& c);
    static ExpSum exponential(const mpq_class& coefficient, const mpq_class& rate);

    void add_term(const mpq_class& coefficient, const mpq_class& rate);
    const std::map<mpq_class, mpq_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    mpq_class at_zero() const;
    // Real evaluation at whatever precision resolves the cancellation.
    double operator()(double t) const;
    // log|f(t)|, -inf when f(t) = 0; stays finite far below double range.
    double log_abs(double t) const;
    BigFloat eval(const BigFloat& t) const;
    // Real and imaginary parts are accumulated in BigFloat.
    std::complex<double> operator()(std::complex<double> z) const;

    ExpSum& operator+=(const ExpSum& o);
    ExpSum& operator-=(const ExpSum& o);
    ExpSum operator+(const ExpSum& o) const;
    ExpSum operator-(const ExpSum& o) const;
    ExpSum operator*(const ExpSum& o) const;
    ExpSum operator*(const mpq_class& c) const;
    bool operator==(const ExpSum& o) const { return terms_ == o.terms_; }

    std::string to_string() const;

private:
    std::map<mpq_class, mpq_class> terms_;
};

// Taylor coefficients c_0..c_K at r. Exact when r = 0; otherwise each
// coefficient carries a rigorous bound on its rounding error and its sign is
// reported as 0 when the value is within that bound.
struct MaclaurinSlice {
    mpq_class origin;
    std::vector<mpq_class> exact;  // filled iff origin == 0
    std::vector<BigFloat> values;
    std::vector<BigFloat> errors;

    std::size_t size() const { return values.size(); }
    bool is_exact() const { return !exact.empty(); }
    int sign(std::size_t k) const;
    // First k with sign(k) not in {0, (-1)^{k+epsilon}}, if any.
    std::optional<std::size_t> alternation_violation(int epsilon) const;
    // Number of leading coefficients that vanish (exactly at r = 0).
    std::size_t zero_order() const;
};

MaclaurinSlice maclaurin(const ExpSum& f, std::size_t K, const mpq_class& r);

struct ComplexValue {
    double re = 0.0;
    double im = 0.0;
    std::optional<mpq_class> exact;  // set for real rational arguments

    double modulus() const { return std::hypot(re, im); }
};

// (1-z)^{|∂S|} z^{|E(S)|}.
ComplexValue eval_cluster_prob_complex(const ClusterShape& shape, std::complex<double> z);
ComplexValue eval_cluster_prob_exact(const ClusterShape& shape, const mpq_class& x);

// e^{-t mu(S)} prod_{e in E(S)} (e^{t mu(e)} - 1) for the graph (vertices,
// edges) on model vertices: the probability that exactly the pairs in edges
// are occupied among all pairs meeting the vertex set.
ExpSum lr_event_expsum(const std::vector<VertexId>& vertices, const std::vector<std::pair<VertexId, VertexId>>& edges,
                       const LongRangeModel& model);

// Pr_t(|C(o)| = m) with o = vertex 0.
ExpSum pm_expsum(const LongRangeModel& model, std::size_t m, std::size_t cap = 0);
// f_m = 1 - sum_{i<m} p_i.
ExpSum fm_expsum(const LongRangeModel& model, std::size_t m, std::size_t cap = 0);

// Points z_k = x + M e^{2 pi i k / count}.
std::vector<std::complex<double>> disc_points(std::complex<double> centre, double radius, std::size_t count);

struct DiscCheck {
    double sampled_sup = 0.0;
    double bound = 0.0;
    bool holds(double slack = 1e-10) const { return sampled_sup <= bound * (1.0 + slack); }
};

// sup |P(z)| over the sampled circle |z - x| = M against c^{|∂S|} P(x+M)
// with c = (1-x+M)/(1-x-M).
DiscCheck cluster_disc_check(const ClusterShape& shape, double x, double M, std::size_t points = 256);
// sup |p_m(z)| over the sampled circle against e^{2Mm} p_m(x+M).
DiscCheck pm_disc_check(const ExpSum& pm, std::size_t m, double x, double M, std::size_t points = 256);

struct ThetaSeries {
    std::vector<std::size_t> caps;       // N = smallest ring .. max_boundary
    std::vector<ShapeSum> rings;         // signed sum over multi-interfaces with |∂M| = N
    std::vector<double> ring_magnitude;  // sum of Q_M with |∂M| = N
    std::vector<double> partial;         // S_N, approximating 1 - theta
    std::vector<double> theta;           // 1 - S_N
    std::vector<std::size_t> multi_counts;
    std::size_t interface_count = 0;
};

ThetaSeries theta_series_planar(const LatticePatch& patch, double p, std::size_t max_boundary, std::size_t cap = 0);

struct ChiSeries {
    std::vector<double> partial;                  // entry m-1: sum_{k<=m} k P_k
    std::vector<mpq_class> exact;                 // nearest-neighbour with rational p
};

ChiSeries chi_series(const LatticePatch& patch, const mpq_class& p, std::size_t m_max, std::size_t cap = 0);
ChiSeries chi_series(const LongRangeModel& model, double t, std::size_t m_max, std::size_t cap = 0);

struct TreeTheta {
    double theta_rooted = 0.0;  // theta'
    double theta = 0.0;
};

TreeTheta tree_theta(unsigned d, double p);
// d = 3 and p > 1/2: theta' = (2p-1)/p^2, theta = 1 - ((1-p)/p)^3.
std::pair<mpq_class, mpq_class> tree_theta_exact_d3(const mpq_class& p);

struct ThresholdRow {
    double r = 0.0;
    double rate = 0.0;      // fitted geometric rate of |p_m(r)|
    double chi_rate = 0.0;  // fitted geometric rate of m |p_m(r)|
};

struct NegativeThreshold {
    double t1 = 0.0;          // crossing of rate = 1
    double t1_chi = 0.0;      // crossing of chi_rate = 1
    std::vector<ThresholdRow> grid;
    std::size_t monotonicity_violations = 0;
    std::vector<std::string> diagnostics;
};

// family(m) returns the exact p_m. The grid must be increasing and negative.
NegativeThreshold negative_threshold(const std::function<ExpSum(std::size_t)>& family, const std::vector<double>& grid,
                                     std::size_t m_max);

// |f(-M)|, valid when the Maclaurin coefficients at 0 alternate; sampled_sup
// is the largest |f| over `points` points of the circle |z| = M.
struct DiscMaximum {
    double value = 0.0;
    double sampled_sup = 0.0;
};
DiscMaximum max_modulus_disc(const ExpSum& f, double M, std::size_t points = 256, std::size_t check_terms = 24);

// Three-circles inequality log M(r) <= (log(r2/r) log M(r1) + log(r/r1) log M(r2)) / log(r2/r1).
bool hadamard_check(const ExpSum& f, double r1, double r, double r2);

}  // namespace perc
