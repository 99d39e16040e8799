#include "perc/rational.hpp"

#include <cmath>
#include <sstream>

#include "perc/error.hpp"

namespace perc {

mpq_class parse_rational(const std::string& text) {
    std::string s = text;
    auto dot = s.find('.');
    try {
        if (dot != std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            if (digits.empty() || digits == "-" || digits == "+") throw InvalidArgument("bad rational: " + text);
            mpz_class num(digits, 10);
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            mpq_class q(num, den);
            q.canonicalize();
            return q;
        }
        mpq_class q(s, 10);
        if (q.get_den() == 0) throw InvalidArgument("zero denominator: " + text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw InvalidArgument("bad rational: " + text);
    }
}

std::string to_string(const mpq_class& q) { return q.get_str(10); }
std::string to_string(const mpz_class& z) { return z.get_str(10); }

mpq_class pow(const mpq_class& base, unsigned long exponent) {
    mpq_class r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    r.canonicalize();
    return r;
}

RationalPolynomial::RationalPolynomial(std::vector<mpq_class> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
}

void RationalPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

RationalPolynomial RationalPolynomial::constant(const mpq_class& c) { return RationalPolynomial({c}); }

RationalPolynomial RationalPolynomial::monomial_pair(const mpq_class& c, unsigned a, unsigned b) {
    std::vector<mpq_class> coeffs(a + b + 1, 0);
    mpz_class binom;
    for (unsigned j = 0; j <= b; ++j) {
        mpz_bin_uiui(binom.get_mpz_t(), b, j);
        mpq_class term = c * mpq_class(binom);
        coeffs[a + j] = (j % 2) ? mpq_class(-term) : term;
    }
    return RationalPolynomial(std::move(coeffs));
}

mpq_class RationalPolynomial::operator()(const mpq_class& p) const {
    mpq_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * p + *it;
    return acc;
}

double RationalPolynomial::operator()(double p) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * p + it->get_d();
    return acc;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
}

RationalPolynomial RationalPolynomial::operator+(const RationalPolynomial& o) const {
    RationalPolynomial r = *this;
    r += o;
    return r;
}

RationalPolynomial RationalPolynomial::operator-(const RationalPolynomial& o) const {
    RationalPolynomial r = *this;
    if (o.coeffs_.size() > r.coeffs_.size()) r.coeffs_.resize(o.coeffs_.size(), 0);
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) r.coeffs_[i] -= o.coeffs_[i];
    r.trim();
    return r;
}

RationalPolynomial RationalPolynomial::operator*(const RationalPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<mpq_class> out(coeffs_.size() + o.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return RationalPolynomial(std::move(out));
}

std::string RationalPolynomial::to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const mpq_class& c = coeffs_[i];
        if (c == 0) continue;
        mpq_class mag = abs(c);
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        bool unit = mag == 1 && i > 0;
        if (!unit) os << mag.get_str();
        if (i > 0) os << (unit ? "" : "*") << "p" << (i > 1 ? "^" + std::to_string(i) : "");
    }
    return os.str();
}

void ShapeSum::add(unsigned edges, unsigned boundary, const mpz_class& count) {
    auto& slot = terms_[{edges, boundary}];
    slot += count;
    if (slot == 0) terms_.erase({edges, boundary});
}

RationalPolynomial ShapeSum::expand() const {
    RationalPolynomial r;
    for (const auto& [key, count] : terms_) r += RationalPolynomial::monomial_pair(mpq_class(count), key.first, key.second);
    return r;
}

mpq_class ShapeSum::operator()(const mpq_class& p) const {
    mpq_class acc = 0;
    mpq_class q = 1 - p;
    for (const auto& [key, count] : terms_) acc += mpq_class(count) * pow(p, key.first) * pow(q, key.second);
    return acc;
}

double ShapeSum::operator()(double p) const {
    double acc = 0.0;
    for (const auto& [key, count] : terms_)
        acc += count.get_d() * std::pow(p, key.first) * std::pow(1.0 - p, key.second);
    return acc;
}

ShapeSum& ShapeSum::operator+=(const ShapeSum& o) {
    for (const auto& [key, count] : o.terms_) add(key.first, key.second, count);
    return *this;
}

std::string ShapeSum::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [key, count] : terms_) {
        if (!first) os << " + ";
        first = false;
        std::vector<std::string> factors;
        if (count != 1 || (key.first == 0 && key.second == 0)) factors.push_back(count.get_str());
        if (key.first == 1) factors.push_back("p");
        if (key.first > 1) factors.push_back("p^" + std::to_string(key.first));
        if (key.second == 1) factors.push_back("(1-p)");
        if (key.second > 1) factors.push_back("(1-p)^" + std::to_string(key.second));
        for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    }
    return os.str();
}

}  // namespace perc
