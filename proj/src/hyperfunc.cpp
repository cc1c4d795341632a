#include "hxz/hyperfunc.hpp"

#include <algorithm>
#include <cmath>

#include "hxz/errors.hpp"
#include "hxz/roots.hpp"

namespace hxz {

namespace {

bool complex_less(const BigComplex& a, const BigComplex& b) {
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
}

BigReal half_precision_floor() { return BigReal::pow2(-working_precision() / 2); }

// Series coefficients of exp(x) for x(0) = 0.
std::vector<BigComplex> series_exp(const std::vector<BigComplex>& x, int count) {
    std::vector<BigComplex> e(static_cast<std::size_t>(count));
    e[0] = BigComplex(1L);
    for (int k = 1; k < count; ++k) {
        BigComplex acc;
        for (int j = 1; j <= k && j < static_cast<int>(x.size()); ++j)
            acc += x[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(k - j)] * BigReal(static_cast<long>(j));
        e[static_cast<std::size_t>(k)] = acc / BigReal(static_cast<long>(k));
    }
    return e;
}

std::vector<BigComplex> series_mul(const std::vector<BigComplex>& a, const std::vector<BigComplex>& b, int count) {
    std::vector<BigComplex> c(static_cast<std::size_t>(count));
    for (int i = 0; i < count && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j < count && j < static_cast<int>(b.size()); ++j)
            c[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return c;
}

std::vector<BigComplex> reversed(const CPoly& p) {
    std::vector<BigComplex> r(p.coeffs().rbegin(), p.coeffs().rend());
    return r;
}

// Coefficients F_k of w^(q-p) G(1/w) for k < count.
std::vector<BigComplex> infinity_series(const CPoly& P, const CPoly& Q, const CPoly& M, const CPoly& T, int count) {
    std::vector<BigComplex> ratio = series_divide(reversed(P), reversed(Q), count);
    int shift = T.degree() - M.degree();
    std::vector<BigComplex> mt = series_divide(reversed(M), reversed(T), count);
    std::vector<BigComplex> x(static_cast<std::size_t>(count));
    for (int k = shift; k < count; ++k) x[static_cast<std::size_t>(k)] = mt[static_cast<std::size_t>(k - shift)];
    return series_mul(ratio, series_exp(x, count), count);
}

CPoly product_of_powers(const std::vector<BigComplex>& roots, const std::vector<int>& powers) {
    std::vector<BigComplex> all;
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (int k = 0; k < powers[i]; ++k) all.push_back(roots[i]);
    return CPoly::from_roots(all);
}

}  // namespace

BigReal coincidence_radius() { return half_precision_floor(); }

bool same_site(const BigComplex& a, const BigComplex& b) {
    return abs(a - b) <= coincidence_radius() * max(BigReal(1L), abs(b));
}

HyperExpSpec normalize(const HyperExpSpec& spec) {
    if (spec.P.is_zero() || spec.Q.is_zero()) fail(ErrorKind::InvalidInput, "P and Q must be nonzero");
    if (spec.T.degree() < 1) fail(ErrorKind::InvalidInput, "T must be nonconstant");
    if (poly_gcd(spec.P, spec.Q).degree() > 0) fail(ErrorKind::InvalidInput, "gcd(P, Q) is nonconstant");
    if (!spec.S.is_zero() && poly_gcd(spec.S, spec.T).degree() > 0)
        fail(ErrorKind::InvalidInput, "gcd(S, T) is nonconstant");

    HyperExpSpec out = spec;
    if (out.P.degree() == 0 && out.Q.degree() == 0) {
        BigComplex c = log(out.P[0] / out.Q[0]);
        out.S = out.S + c * out.T;
        out.P = CPoly::constant(BigComplex(1L));
        out.Q = CPoly::constant(BigComplex(1L));
    }
    BigComplex tau = out.T.lc();
    BigComplex inv = BigComplex(1L) / tau;
    out.T = out.T * inv;
    out.S = out.S * inv;
    BigComplex ql = BigComplex(1L) / out.Q.lc();
    out.Q = out.Q * ql;
    out.P = out.P * ql;
    return out;
}

StructureData analyze(const HyperExpSpec& raw) {
    StructureData sd;
    sd.spec = normalize(raw);
    const HyperExpSpec& f = sd.spec;
    sd.p = f.P.degree();
    sd.q = f.Q.degree();

    auto [H, M] = polydiv(f.S, f.T);
    BigReal s_scale = max(BigReal(1L), f.S.max_abs_coeff());
    if (M.is_zero() || M.max_abs_coeff() <= precision_floor(32) * s_scale)
        fail(ErrorKind::InvalidInput, "the exponent S/T has no finite poles");
    sd.H = H;
    sd.M = M;
    sd.h = std::max(0, H.degree());
    if (sd.h > 0) {
        sd.tau_h = H.lc();
        sd.sigma = log(abs(BigComplex(static_cast<long>(sd.h)) * sd.tau_h));
    }

    std::vector<DistinctRoot> tz = distinct_roots(f.T);
    std::vector<DistinctRoot> qz;
    if (f.Q.degree() > 0) qz = distinct_roots(f.Q);
    std::sort(tz.begin(), tz.end(), [](const auto& a, const auto& b) { return complex_less(a.z, b.z); });
    std::sort(qz.begin(), qz.end(), [](const auto& a, const auto& b) { return complex_less(a.z, b.z); });

    std::vector<BigComplex> c_roots, b_roots;
    std::vector<int> p_orders;
    for (const auto& c : tz) {
        SiteRecord s;
        s.location = c.z;
        s.kind = SiteKind::Essential;
        s.m = c.multiplicity;
        s.p_loc = zero_order(f.P, c.z);
        for (const auto& b : qz)
            if (same_site(b.z, c.z)) s.r_loc = b.multiplicity;
        s.beta = s.p_loc - s.r_loc;
        s.principal = principal_parts(f.S, f.T, c.z, s.m);
        c_roots.push_back(c.z);
        p_orders.push_back(s.p_loc);
        sd.sites.push_back(std::move(s));
    }
    for (const auto& b : qz) {
        bool shared = false;
        for (const auto& c : tz) shared = shared || same_site(b.z, c.z);
        if (shared) continue;
        SiteRecord s;
        s.location = b.z;
        s.kind = SiteKind::Pole;
        s.ell = b.multiplicity;
        s.r_loc = b.multiplicity;
        s.beta = -b.multiplicity;
        b_roots.push_back(b.z);
        sd.sites.push_back(std::move(s));
    }
    sd.t_check = static_cast<int>(c_roots.size());
    sd.q_check = static_cast<int>(b_roots.size());

    sd.P_T = product_of_powers(c_roots, p_orders);
    auto [Psharp, prem] = polydiv(f.P, sd.P_T);
    if (!prem.is_zero() && prem.max_abs_coeff() > half_precision_floor() * f.P.max_abs_coeff())
        fail(ErrorKind::InconsistentStructure, "P_T does not divide P");
    sd.P_sharp = Psharp;
    sd.T0 = CPoly::from_roots(c_roots);
    sd.Q_star = CPoly::from_roots(b_roots);
    sd.W = f.T * sd.T0 * sd.Q_star;
    sd.d = f.T.degree() + sd.t_check + sd.q_check;
    int d_sites = sd.q_check;
    for (const auto& s : sd.sites)
        if (s.kind == SiteKind::Essential) d_sites += s.m + 1;
    if (sd.W.degree() != sd.d || d_sites != sd.d)
        fail(ErrorKind::InconsistentStructure, "degree of W disagrees with the site count");
    sd.kappa = sd.d + sd.h - 1;
    if (sd.kappa < 1) fail(ErrorKind::InconsistentStructure, "kappa < 1");

    // U = W * (E' + P_T'/P_T - Q'/Q) over the common denominator T^2 P_T Q
    const CPoly& T = f.T;
    const CPoly& Q = f.Q;
    CPoly num = (f.S.derivative() * T - f.S * T.derivative()) * sd.P_T * Q +
                T * T * (sd.P_T.derivative() * Q - sd.P_T * Q.derivative());
    CPoly wn = sd.W * num;
    CPoly den = T * T * sd.P_T * Q;
    auto [U, urem] = polydiv(wn, den);
    BigReal scale = max(BigReal(1L), wn.max_abs_coeff());
    if (!urem.is_zero() && urem.max_abs_coeff() > half_precision_floor() * scale)
        fail(ErrorKind::InconsistentStructure, "W * Lambda is not a polynomial to working precision");
    U.trim(half_precision_floor() * max(BigReal(1L), U.max_abs_coeff()));
    sd.U = U;

    if (sd.h == 0 && sd.p >= sd.q) {
        int base = sd.p - sd.q;
        int count = base + 16;
        for (;;) {
            std::vector<BigComplex> F = infinity_series(f.P, f.Q, M, f.T, count);
            BigReal fscale;
            for (const auto& c : F) fscale = max(fscale, abs(c));
            BigReal thr = precision_floor(32) * max(BigReal(1L), fscale);
            for (int k = base + 1; k < count; ++k)
                if (abs(F[static_cast<std::size_t>(k)]) > thr) {
                    sd.J = k - base;
                    sd.G_minus_J = F[static_cast<std::size_t>(k)];
                    break;
                }
            if (sd.J) break;
            if (count > base + 512) fail(ErrorKind::InconsistentStructure, "no negative-index Laurent term at infinity");
            count *= 2;
        }
    }
    return sd;
}

BigComplex StructureData::E(const BigComplex& z) const { return spec.S.eval(z) / spec.T.eval(z); }

BigComplex StructureData::E_reg(std::size_t i) const {
    const SiteRecord& s = sites.at(i);
    if (s.kind == SiteKind::Pole) return E(s.location);
    return laurent_coeffs(spec.S, spec.T, s.location, s.m, s.m + 1)[static_cast<std::size_t>(s.m)];
}

BigComplex StructureData::W_tilde(std::size_t i, const BigComplex& z) const {
    const SiteRecord& s = sites.at(i);
    return deflate(W, s.location, s.varpi()).eval(z);
}

BigReal StructureData::rho(const BigComplex& z) const {
    BigReal best = BigReal::infinity(1);
    for (const auto& s : sites) best = min(best, abs(z - s.location));
    return best;
}

std::optional<std::size_t> StructureData::site_at(const BigComplex& z) const {
    for (std::size_t i = 0; i < sites.size(); ++i)
        if (same_site(z, sites[i].location)) return i;
    return std::nullopt;
}

std::vector<std::size_t> StructureData::essential_indices() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < sites.size(); ++i)
        if (sites[i].kind == SiteKind::Essential) r.push_back(i);
    return r;
}

std::vector<std::size_t> StructureData::pole_indices() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < sites.size(); ++i)
        if (sites[i].kind == SiteKind::Pole) r.push_back(i);
    return r;
}

RationalFunction log_derivative(const HyperExpSpec& f) {
    const CPoly& P = f.P;
    const CPoly& Q = f.Q;
    const CPoly& S = f.S;
    const CPoly& T = f.T;
    CPoly TT = T * T;
    CPoly num = P.derivative() * Q * TT - Q.derivative() * P * TT + (S.derivative() * T - S * T.derivative()) * P * Q;
    return reduce(RationalFunction(num, P * Q * TT));
}

Reconstruction reconstruct_from_log_derivative(const RationalFunction& input) {
    RationalFunction r = input.reduced ? input : reduce(input);
    Reconstruction out;
    std::vector<DistinctRoot> poles;
    if (r.den.degree() > 0) poles = distinct_roots(r.den);
    std::sort(poles.begin(), poles.end(), [](const auto& a, const auto& b) { return complex_less(a.z, b.z); });

    std::vector<std::vector<BigComplex>> laurent;
    for (const auto& pole : poles) {
        auto c = laurent_coeffs(r.num, r.den, pole.z, pole.multiplicity, pole.multiplicity);
        BigComplex res = c[static_cast<std::size_t>(pole.multiplicity - 1)];
        long n = std::lround(res.re.to_double());
        double dev = abs(res - BigComplex(n)).to_double();
        if (dev > 1e-6) fail(ErrorKind::NotHyperexponential, "residue " + res.re.to_string(12) + " is not an integer");
        if (dev > 1e-10) out.residue_warning = true;
        out.max_residue_deviation = std::max(out.max_residue_deviation, dev);
        if (n != 0) out.exponents.emplace_back(pole.z, static_cast<int>(n));
        laurent.push_back(std::move(c));
    }

    CPoly poly_part = r.num.is_zero() ? CPoly{} : polydiv(r.num, r.den).first;
    std::vector<BigComplex> hp(poly_part.size() + 1);
    for (std::size_t k = 0; k < poly_part.size(); ++k)
        hp[k + 1] = poly_part[k] / BigReal(static_cast<long>(k + 1));
    CPoly Hpoly(hp);

    std::vector<BigComplex> locs;
    std::vector<int> powers;
    for (const auto& pole : poles) {
        locs.push_back(pole.z);
        powers.push_back(pole.multiplicity - 1);
    }
    CPoly D = product_of_powers(locs, powers);
    CPoly numer = Hpoly * D;
    for (std::size_t a = 0; a < poles.size(); ++a) {
        int k = poles[a].multiplicity;
        for (int s = 2; s <= k; ++s) {
            BigComplex coef = -laurent[a][static_cast<std::size_t>(k - s)] / BigReal(static_cast<long>(s - 1));
            std::vector<int> pw = powers;
            pw[a] -= s - 1;
            numer = numer + coef * product_of_powers(locs, pw);
        }
    }
    out.H = RationalFunction(numer, D, true);
    return out;
}

}  // namespace hxz
