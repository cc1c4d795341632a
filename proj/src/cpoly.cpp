#include "hxz/cpoly.hpp"

#include "hxz/errors.hpp"

namespace hxz {

CPoly::CPoly(std::vector<BigComplex> coeffs) : c_(std::move(coeffs)) { normalize(); }

CPoly::CPoly(std::initializer_list<BigComplex> coeffs) : c_(coeffs) { normalize(); }

CPoly CPoly::constant(const BigComplex& c) { return CPoly(std::vector<BigComplex>{c}); }

CPoly CPoly::monomial(int k, const BigComplex& c) {
    std::vector<BigComplex> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return CPoly(std::move(v));
}

CPoly CPoly::linear_factor(const BigComplex& root) { return CPoly({-root, BigComplex(1L)}); }

CPoly CPoly::from_roots(const std::vector<BigComplex>& roots, const BigComplex& lead) {
    std::vector<BigComplex> c{lead};
    for (const auto& r : roots) {
        std::vector<BigComplex> next(c.size() + 1);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= c[k] * r;
        }
        c = std::move(next);
    }
    return CPoly(std::move(c));
}

BigComplex CPoly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return BigComplex{};
    return c_[static_cast<std::size_t>(k)];
}

void CPoly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

void CPoly::trim(const BigReal& threshold) {
    while (!c_.empty() && abs(c_.back()) <= threshold) c_.pop_back();
}

BigComplex CPoly::eval(const BigComplex& z) const {
    BigComplex acc, tmp;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) horner_step(acc, z, *it, tmp);
    return acc;
}

void CPoly::eval2(const BigComplex& z, BigComplex& p, BigComplex& dp) const {
    p = BigComplex{};
    dp = BigComplex{};
    BigComplex tmp;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        horner_step(dp, z, p, tmp);
        horner_step(p, z, *it, tmp);
    }
}

BigReal CPoly::abs_eval(const BigReal& r) const {
    BigReal acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc *= r;
        acc += abs(*it);
    }
    return acc;
}

BigReal CPoly::max_abs_coeff() const {
    BigReal m;
    for (const auto& c : c_) {
        BigReal a = abs(c);
        if (a > m) m = a;
    }
    return m;
}

CPoly CPoly::derivative() const {
    if (c_.size() <= 1) return CPoly{};
    std::vector<BigComplex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * BigReal(static_cast<long>(k));
    return CPoly(std::move(d));
}

CPoly CPoly::monic() const {
    if (c_.empty()) return *this;
    BigComplex inv = BigComplex(1L) / c_.back();
    CPoly r = *this * inv;
    r.c_.back() = BigComplex(1L);
    return r;
}

CPoly CPoly::taylor_shift(const BigComplex& a) const {
    std::vector<BigComplex> c = c_;
    const std::size_t n = c.size();
    BigComplex tmp;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t k = n - 1; k > i; --k) {
            mul_into(tmp, c[k], a);
            c[k - 1] += tmp;
        }
    }
    return CPoly(std::move(c));
}

CPoly CPoly::operator-() const {
    CPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

CPoly& CPoly::operator+=(const CPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
}

CPoly& CPoly::operator*=(const BigComplex& s) {
    for (auto& c : c_) c *= s;
    normalize();
    return *this;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.is_zero() || b.is_zero()) return CPoly{};
    std::vector<BigComplex> r(a.size() + b.size() - 1);
    BigComplex tmp;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            mul_into(tmp, a[i], b[j]);
            r[i + j] += tmp;
        }
    return CPoly(std::move(r));
}

BigReal relative_distance(const CPoly& a, const CPoly& b) {
    BigReal scale = max(a.max_abs_coeff(), b.max_abs_coeff());
    if (scale.is_zero()) return BigReal{};
    BigReal d;
    const int n = std::max(a.degree(), b.degree());
    for (int k = 0; k <= n; ++k) {
        BigReal e = abs(a.coeff(k) - b.coeff(k));
        if (e > d) d = e;
    }
    return d / scale;
}

// ---- division, gcd ----

std::pair<CPoly, CPoly> polydiv(const CPoly& S, const CPoly& T) {
    if (T.is_zero()) fail(ErrorKind::InvalidInput, "polynomial division by zero");
    const int ds = S.degree(), dt = T.degree();
    if (ds < dt) return {CPoly{}, S};
    std::vector<BigComplex> r = S.coeffs();
    std::vector<BigComplex> q(static_cast<std::size_t>(ds - dt + 1));
    const BigComplex inv = BigComplex(1L) / T.lc();
    BigComplex tmp;
    for (int k = ds - dt; k >= 0; --k) {
        auto& qk = q[static_cast<std::size_t>(k)];
        qk = r[static_cast<std::size_t>(k + dt)] * inv;
        for (int j = 0; j < dt; ++j) {
            mul_into(tmp, qk, T[static_cast<std::size_t>(j)]);
            r[static_cast<std::size_t>(k + j)] -= tmp;
        }
    }
    r.resize(static_cast<std::size_t>(dt));
    return {CPoly(std::move(q)), CPoly(std::move(r))};
}

CPoly poly_gcd(const CPoly& a, const CPoly& b) {
    if (a.is_zero() && b.is_zero()) fail(ErrorKind::InvalidInput, "gcd of two zero polynomials");
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    CPoly x = a.monic(), y = b.monic();
    if (x.degree() < y.degree()) std::swap(x, y);
    const BigReal floor = precision_floor(32);
    while (true) {
        if (y.degree() == 0) return CPoly::constant(BigComplex(1L));
        const BigReal scale = max(max(x.max_abs_coeff(), y.max_abs_coeff()), BigReal(1L));
        CPoly r = polydiv(x, y).second;
        r.trim(floor * scale);
        if (r.is_zero()) return y;
        x = std::move(y);
        y = r.monic();
    }
}

CPoly squarefree_part(const CPoly& p) {
    if (p.is_zero()) fail(ErrorKind::InvalidInput, "squarefree part of the zero polynomial");
    if (p.degree() == 0) return CPoly::constant(BigComplex(1L));
    CPoly g = poly_gcd(p, p.derivative());
    return polydiv(p, g).first.monic();
}

// ---- Laurent data ----

std::vector<BigComplex> series_divide(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b,
                                      int count) {
    if (b.empty() || b[0].is_zero()) fail(ErrorKind::DegeneratePole, "series division by a series vanishing at 0");
    std::vector<BigComplex> q(static_cast<std::size_t>(count));
    const BigComplex inv = BigComplex(1L) / b[0];
    BigComplex tmp;
    for (int k = 0; k < count; ++k) {
        BigComplex acc = k < static_cast<int>(a.size()) ? a[static_cast<std::size_t>(k)] : BigComplex{};
        for (int j = 1; j <= k && j < static_cast<int>(b.size()); ++j) {
            mul_into(tmp, b[static_cast<std::size_t>(j)], q[static_cast<std::size_t>(k - j)]);
            acc -= tmp;
        }
        q[static_cast<std::size_t>(k)] = acc * inv;
    }
    return q;
}

std::vector<BigComplex> laurent_coeffs(const CPoly& num, const CPoly& den, const BigComplex& pole, int order,
                                       int count) {
    if (den.is_zero()) fail(ErrorKind::InvalidInput, "zero denominator");
    if (order < 0 || order > den.degree()) fail(ErrorKind::InvalidInput, "pole order exceeds denominator degree");
    CPoly n = num.taylor_shift(pole);
    CPoly d = den.taylor_shift(pole);
    std::vector<BigComplex> dt(d.coeffs().begin() + order, d.coeffs().end());
    return series_divide(n.coeffs(), dt, count);
}

LaurentPrincipalPart principal_parts(const CPoly& num, const CPoly& den, const BigComplex& pole, int order) {
    if (order < 1) fail(ErrorKind::InvalidInput, "principal part needs a positive pole order");
    auto lc = laurent_coeffs(num, den, pole, order, order);
    LaurentPrincipalPart pp;
    pp.pole = pole;
    pp.order = order;
    pp.coeffs.resize(static_cast<std::size_t>(order));
    for (int s = 1; s <= order; ++s) pp.coeffs[static_cast<std::size_t>(s - 1)] = lc[static_cast<std::size_t>(order - s)];
    CPoly shifted = num.taylor_shift(pole);
    BigReal scale = max(shifted.max_abs_coeff(), BigReal(1L));
    CPoly dsh = den.taylor_shift(pole);
    BigReal dlead = abs(dsh.coeff(order));
    if (dlead.is_zero() || abs(pp.lambda(order)) * dlead <= precision_floor(32) * scale)
        fail(ErrorKind::DegeneratePole, "leading principal coefficient vanishes at the precision floor");
    return pp;
}

BigComplex LaurentPrincipalPart::eval(const BigComplex& z) const {
    BigComplex u = BigComplex(1L) / (z - pole);
    BigComplex acc, tmp;
    for (int s = order; s >= 1; --s) horner_step(acc, u, lambda(s), tmp);
    return acc * u;
}

CPoly deflate(const CPoly& p, const BigComplex& root, int times) {
    CPoly q = p;
    for (int t = 0; t < times && q.degree() >= 1; ++t) {
        const auto& c = q.coeffs();
        const int n = q.degree();
        std::vector<BigComplex> out(static_cast<std::size_t>(n));
        BigComplex acc, tmp;
        for (int k = n; k >= 1; --k) {
            horner_step(acc, root, c[static_cast<std::size_t>(k)], tmp);
            out[static_cast<std::size_t>(k - 1)] = acc;
        }
        q = CPoly(std::move(out));
    }
    return q;
}

int zero_order(const CPoly& p, const BigComplex& root) {
    if (p.is_zero()) fail(ErrorKind::InvalidInput, "order of the zero polynomial");
    CPoly s = p.taylor_shift(root);
    BigReal r = max(abs(root), BigReal(1L));
    BigReal total = p.abs_eval(r);
    BigReal tol = precision_floor(0, working_precision() / 2) * total;
    int k = 0;
    while (k < s.degree() && abs(s[static_cast<std::size_t>(k)]) <= tol) ++k;
    return k;
}

RationalFunction::RationalFunction(CPoly n, CPoly d, bool is_reduced)
    : num(std::move(n)), den(std::move(d)), reduced(is_reduced) {
    if (den.is_zero()) fail(ErrorKind::InvalidInput, "rational function with zero denominator");
}

BigComplex RationalFunction::eval(const BigComplex& z) const { return num.eval(z) / den.eval(z); }

RationalFunction RationalFunction::derivative() const {
    CPoly n = num.derivative() * den - num * den.derivative();
    return RationalFunction(n, den * den);
}

RationalFunction reduce(const RationalFunction& r) {
    if (r.num.is_zero()) return RationalFunction(CPoly{}, CPoly::constant(BigComplex(1L)), true);
    CPoly g = poly_gcd(r.num, r.den);
    CPoly n = polydiv(r.num, g).first;
    CPoly d = polydiv(r.den, g).first;
    BigComplex inv = BigComplex(1L) / d.lc();
    return RationalFunction(n * inv, d.monic(), true);
}

}  // namespace hxz
