#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace perc {

mpq_class parse_rational(const std::string& text);
std::string to_string(const mpq_class& q);
std::string to_string(const mpz_class& z);
mpq_class pow(const mpq_class& base, unsigned long exponent);

// Polynomial in p with exact rational coefficients; index = power of p.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<mpq_class> coefficients);

    static RationalPolynomial constant(const mpq_class& c);
    // c * p^a * (1-p)^b
    static RationalPolynomial monomial_pair(const mpq_class& c, unsigned a, unsigned b);

    const std::vector<mpq_class>& coefficients() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    mpq_class operator()(const mpq_class& p) const;
    double operator()(double p) const;

    RationalPolynomial& operator+=(const RationalPolynomial& o);
    RationalPolynomial operator+(const RationalPolynomial& o) const;
    RationalPolynomial operator-(const RationalPolynomial& o) const;
    RationalPolynomial operator*(const RationalPolynomial& o) const;
    bool operator==(const RationalPolynomial& o) const { return coeffs_ == o.coeffs_; }

    std::string to_string() const;

private:
    std::vector<mpq_class> coeffs_;

    void trim();
};

// Sum of count * p^a * (1-p)^b grouped by (a, b): the natural form of a
// cluster-event probability.
class ShapeSum {
public:
    void add(unsigned edges, unsigned boundary, const mpz_class& count = 1);
    const std::map<std::pair<unsigned, unsigned>, mpz_class>& terms() const { return terms_; }

    RationalPolynomial expand() const;
    mpq_class operator()(const mpq_class& p) const;
    double operator()(double p) const;
    ShapeSum& operator+=(const ShapeSum& o);
    bool operator==(const ShapeSum& o) const { return terms_ == o.terms_; }

    // "18*p^2*(1-p)^8 + ..." in increasing (a, b) order.
    std::string to_string() const;

private:
    std::map<std::pair<unsigned, unsigned>, mpz_class> terms_;
};

}  // namespace perc
