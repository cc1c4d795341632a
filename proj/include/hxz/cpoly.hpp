#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "hxz/bignum.hpp"

namespace hxz {

// Dense univariate polynomial, coefficients in ascending degree.
class CPoly {
public:
    CPoly() = default;
    explicit CPoly(std::vector<BigComplex> coeffs);
    CPoly(std::initializer_list<BigComplex> coeffs);

    static CPoly constant(const BigComplex& c);
    static CPoly monomial(int k, const BigComplex& c = BigComplex(1L));
    static CPoly linear_factor(const BigComplex& root);  // z - root
    static CPoly from_roots(const std::vector<BigComplex>& roots, const BigComplex& lead = BigComplex(1L));

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }
    const std::vector<BigComplex>& coeffs() const { return c_; }
    const BigComplex& operator[](std::size_t k) const { return c_[k]; }
    // Coefficient of z^k, zero beyond the degree.
    BigComplex coeff(int k) const;
    const BigComplex& lc() const { return c_.back(); }

    BigComplex eval(const BigComplex& z) const;
    // Value and first derivative in one Horner pass.
    void eval2(const BigComplex& z, BigComplex& p, BigComplex& dp) const;
    // Sum of |c_k| |z|^k, the natural scale for backward error.
    BigReal abs_eval(const BigReal& r) const;
    BigReal max_abs_coeff() const;

    CPoly derivative() const;
    CPoly monic() const;
    // Coefficients of u -> p(a + u).
    CPoly taylor_shift(const BigComplex& a) const;
    // Drops top coefficients that are exactly zero.
    void normalize();
    // Drops top coefficients of modulus <= threshold.
    void trim(const BigReal& threshold);

    CPoly operator-() const;
    CPoly& operator+=(const CPoly& o);
    CPoly& operator-=(const CPoly& o);
    CPoly& operator*=(const BigComplex& s);
    friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
    friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
    friend CPoly operator*(CPoly a, const BigComplex& s) { return a *= s; }
    friend CPoly operator*(const BigComplex& s, CPoly a) { return a *= s; }
    friend CPoly operator*(const CPoly& a, const CPoly& b);

private:
    std::vector<BigComplex> c_;
};

// Max coefficient deviation |a_k - b_k| relative to max(|a|,|b|) coefficient scale.
BigReal relative_distance(const CPoly& a, const CPoly& b);

struct RationalFunction {
    CPoly num;
    CPoly den;
    bool reduced = false;

    RationalFunction() = default;
    RationalFunction(CPoly n, CPoly d, bool is_reduced = false);
    BigComplex eval(const BigComplex& z) const;
    RationalFunction derivative() const;
};

// Cancels the approximate gcd and scales the denominator monic.
RationalFunction reduce(const RationalFunction& r);

struct LaurentPrincipalPart {
    BigComplex pole;
    int order = 0;
    std::vector<BigComplex> coeffs;  // coeffs[s-1] multiplies (z-pole)^(-s)

    const BigComplex& lambda(int s) const { return coeffs[static_cast<std::size_t>(s - 1)]; }
    BigComplex eval(const BigComplex& z) const;
};

std::pair<CPoly, CPoly> polydiv(const CPoly& S, const CPoly& T);
CPoly poly_gcd(const CPoly& a, const CPoly& b);
CPoly squarefree_part(const CPoly& p);

// First `count` Laurent coefficients of num/den at `pole`, where den vanishes
// there to exactly `order`: entry k multiplies (z-pole)^(k-order).
std::vector<BigComplex> laurent_coeffs(const CPoly& num, const CPoly& den, const BigComplex& pole, int order,
                                       int count);
// Power series of a/b in u up to u^(count-1); b(0) must be nonzero.
std::vector<BigComplex> series_divide(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b,
                                      int count);

LaurentPrincipalPart principal_parts(const CPoly& num, const CPoly& den, const BigComplex& pole, int order);

// Quotient of p by (z - root)^times; remainder contributions are discarded.
CPoly deflate(const CPoly& p, const BigComplex& root, int times = 1);
// Multiplicity of `root` as a zero of p judged by successive deflation.
int zero_order(const CPoly& p, const BigComplex& root);

}  // namespace hxz
