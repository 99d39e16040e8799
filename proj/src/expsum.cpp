#include <cmath>
#include <limits>
#include <numbers>

#include "perc/series.hpp"

namespace perc {

BigFloat to_big(const mpq_class& q) {
    BigFloat x;
    mpfr_set_q(x.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return x;
}

namespace {

// f(t) as mantissa * 2^exponent. Precision doubles until the rounding error,
// bounded by the absolute term mass, is small against the result.
struct Scaled {
    double mantissa = 0.0;
    long exponent = 0;
};

Scaled certified_eval(const std::map<mpq_class, mpq_class>& terms, double t) {
    if (terms.empty()) return {};
    const long slack = 8 + static_cast<long>(std::log2(static_cast<double>(terms.size()) + 1.0));
    for (mpfr_prec_t prec = 256;; prec *= 2) {
        mpfr_t sum, mass, term, factor;
        mpfr_inits2(prec, sum, mass, term, factor, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_zero(sum, 1);
        mpfr_set_zero(mass, 1);
        for (const auto& [rate, c] : terms) {
            mpfr_set_q(factor, rate.get_mpq_t(), MPFR_RNDN);
            mpfr_mul_d(factor, factor, -t, MPFR_RNDN);
            mpfr_exp(factor, factor, MPFR_RNDN);
            mpfr_set_q(term, c.get_mpq_t(), MPFR_RNDN);
            mpfr_mul(term, term, factor, MPFR_RNDN);
            mpfr_add(sum, sum, term, MPFR_RNDN);
            mpfr_abs(term, term, MPFR_RNDN);
            mpfr_add(mass, mass, term, MPFR_RNDN);
        }
        const bool resolved = !mpfr_zero_p(sum) && mpfr_get_exp(sum) > mpfr_get_exp(mass) - static_cast<long>(prec) + slack + 64;
        Scaled out;
        if (resolved || prec >= (mpfr_prec_t{1} << 18)) {
            if (resolved) out.mantissa = mpfr_get_d_2exp(&out.exponent, sum, MPFR_RNDN);
            mpfr_clears(sum, mass, term, factor, static_cast<mpfr_ptr>(nullptr));
            return out;
        }
        mpfr_clears(sum, mass, term, factor, static_cast<mpfr_ptr>(nullptr));
    }
}

}  // namespace

ExpSum ExpSum::constant(const mpq_class& c) { return exponential(c, 0); }

ExpSum ExpSum::exponential(const mpq_class& coefficient, const mpq_class& rate) {
    ExpSum s;
    s.add_term(coefficient, rate);
    return s;
}

void ExpSum::add_term(const mpq_class& coefficient, const mpq_class& rate) {
    if (coefficient == 0) return;
    auto [it, inserted] = terms_.try_emplace(rate, coefficient);
    if (inserted) return;
    it->second += coefficient;
    if (it->second == 0) terms_.erase(it);
}

mpq_class ExpSum::at_zero() const {
    mpq_class s = 0;
    for (const auto& [rate, c] : terms_) s += c;
    return s;
}

double ExpSum::operator()(double t) const {
    Scaled v = certified_eval(terms_, t);
    return std::ldexp(v.mantissa, static_cast<int>(v.exponent));
}

double ExpSum::log_abs(double t) const {
    Scaled v = certified_eval(terms_, t);
    if (v.mantissa == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(v.mantissa)) + static_cast<double>(v.exponent) * std::numbers::ln2;
}

BigFloat ExpSum::eval(const BigFloat& t) const {
    BigFloat s = 0;
    for (const auto& [rate, c] : terms_) s += to_big(c) * exp(-to_big(rate) * t);
    return s;
}

std::complex<double> ExpSum::operator()(std::complex<double> z) const {
    BigFloat re = 0, im = 0;
    const BigFloat x(z.real()), y(z.imag());
    for (const auto& [rate, c] : terms_) {
        BigFloat a = to_big(rate);
        BigFloat scale = to_big(c) * exp(-a * x);
        re += scale * cos(a * y);
        im -= scale * sin(a * y);
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

ExpSum& ExpSum::operator+=(const ExpSum& o) {
    for (const auto& [rate, c] : o.terms_) add_term(c, rate);
    return *this;
}

ExpSum& ExpSum::operator-=(const ExpSum& o) {
    for (const auto& [rate, c] : o.terms_) add_term(-c, rate);
    return *this;
}

ExpSum ExpSum::operator+(const ExpSum& o) const {
    ExpSum s = *this;
    return s += o;
}

ExpSum ExpSum::operator-(const ExpSum& o) const {
    ExpSum s = *this;
    return s -= o;
}

ExpSum ExpSum::operator*(const ExpSum& o) const {
    ExpSum s;
    for (const auto& [ra, ca] : terms_)
        for (const auto& [rb, cb] : o.terms_) s.add_term(ca * cb, ra + rb);
    return s;
}

ExpSum ExpSum::operator*(const mpq_class& c) const {
    ExpSum s;
    for (const auto& [rate, k] : terms_) s.add_term(k * c, rate);
    return s;
}

std::string ExpSum::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [rate, c] : terms_) {
        mpq_class mag = abs(c);
        if (out.empty())
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        if (rate == 0) {
            out += perc::to_string(mag);
            continue;
        }
        if (mag != 1) out += perc::to_string(mag) + "*";
        out += "exp(" + std::string(rate > 0 ? "-" : "");
        mpq_class r = abs(rate);
        if (r != 1) out += perc::to_string(r) + "*";
        out += "t)";
    }
    return out;
}

int MaclaurinSlice::sign(std::size_t k) const {
    if (is_exact()) return sgn(exact.at(k));
    if (abs(values.at(k)) <= errors.at(k)) return 0;
    return values[k] > 0 ? 1 : -1;
}

std::optional<std::size_t> MaclaurinSlice::alternation_violation(int epsilon) const {
    for (std::size_t k = 0; k < size(); ++k) {
        int s = sign(k);
        int want = (k + static_cast<std::size_t>(epsilon)) % 2 == 0 ? 1 : -1;
        if (s != 0 && s != want) return k;
    }
    return std::nullopt;
}

std::size_t MaclaurinSlice::zero_order() const {
    std::size_t k = 0;
    while (k < size() && sign(k) == 0) ++k;
    return k;
}

MaclaurinSlice maclaurin(const ExpSum& f, std::size_t K, const mpq_class& r) {
    MaclaurinSlice slice;
    slice.origin = r;
    if (r == 0) {
        // c_k = sum_j c_j (-a_j)^k / k!
        std::vector<mpq_class> power;
        for (const auto& [rate, c] : f.terms()) power.push_back(c);
        mpz_class factorial = 1;
        for (std::size_t k = 0; k <= K; ++k) {
            if (k > 0) factorial *= static_cast<unsigned long>(k);
            mpq_class sum = 0;
            std::size_t j = 0;
            for (const auto& [rate, c] : f.terms()) {
                if (k > 0) power[j] *= -rate;
                sum += power[j++];
            }
            mpq_class ck = sum / mpq_class(factorial);
            ck.canonicalize();
            slice.exact.push_back(ck);
            slice.values.push_back(to_big(ck));
            slice.errors.push_back(0);
        }
        return slice;
    }
    const BigFloat x = to_big(r);
    std::vector<BigFloat> term;
    std::vector<BigFloat> rates;
    for (const auto& [rate, c] : f.terms()) {
        rates.push_back(to_big(rate));
        term.push_back(to_big(c) * exp(-rates.back() * x));
    }
    // Relative rounding per operation is about 1e-100; 1e-90 per unit of
    // absolute mass leaves a wide margin for the few hundred operations.
    const BigFloat unit("1e-90");
    for (std::size_t k = 0; k <= K; ++k) {
        if (k > 0)
            for (std::size_t j = 0; j < term.size(); ++j) term[j] *= -rates[j] / BigFloat(k);
        BigFloat sum = 0, mass = 0;
        for (const auto& v : term) {
            sum += v;
            mass += abs(v);
        }
        slice.values.push_back(sum);
        slice.errors.push_back(mass * unit * BigFloat(term.size() + k + 1));
    }
    return slice;
}

}  // namespace perc
