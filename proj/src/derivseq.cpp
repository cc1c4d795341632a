#include "hxz/derivseq.hpp"

#include <cmath>

#include "hxz/errors.hpp"

namespace hxz {

namespace {

std::vector<long double> abs_coeffs(const CPoly& p) {
    std::vector<long double> out;
    out.reserve(p.size());
    for (const auto& c : p.coeffs()) out.push_back(mpfr_get_ld(abs(c).raw(), MPFR_RNDU));
    return out;
}

BigReal from_ld(long double v) {
    BigReal r;
    mpfr_set_ld(r.raw(), v, MPFR_RNDU);
    return r;
}

BigReal rel_diff(const BigComplex& a, const BigComplex& b) {
    BigReal den = abs(b);
    if (den.is_zero()) return abs(a);
    return abs(a - b) / den;
}

BigComplex rising(long a, int n) {
    BigReal acc(1L);
    for (int k = 0; k < n; ++k) acc *= BigReal(a + k);
    return BigComplex(acc);
}

}  // namespace

BigComplex DerivSeq::scaled_value(int n, const BigComplex& z) const {
    BigComplex w = structure.W.eval(z);
    BigComplex v = B.at(static_cast<std::size_t>(n)).eval(z) / pow(w, n);
    BigReal fact = exp(lgamma(BigReal(static_cast<long>(n + 1))));
    return v / fact;
}

BigReal DerivSeq::L_tilde(int n, const BigComplex& z) const {
    std::size_t k = static_cast<std::size_t>(n);
    if (degs.at(k) <= 0) fail(ErrorKind::Domain, "L_tilde needs deg B_n > 0");
    BigComplex v = B[k].eval(z);
    if (v.is_zero()) return BigReal::infinity(-1);
    return (log(abs(v)) - log(abs(gamma[k])) - s[k]) / BigReal(static_cast<long>(degs[k]));
}

DerivSeq b_sequence(const StructureData& sd, int N) {
    if (N < 0) fail(ErrorKind::InvalidInput, "N must be nonnegative");
    DerivSeq seq;
    seq.structure = sd;
    const CPoly& W = sd.W;
    const CPoly& U = sd.U;
    CPoly Wd = W.derivative();
    std::vector<long double> aW = abs_coeffs(W), aU = abs_coeffs(U), aWd = abs_coeffs(Wd);
    BigReal drop_floor = precision_floor(40);

    CPoly B = sd.P_sharp;
    std::vector<long double> aB = abs_coeffs(B);
    auto push = [&](const CPoly& p) {
        seq.B.push_back(p);
        seq.gamma.push_back(p.lc());
        seq.degs.push_back(p.degree());
        long n = static_cast<long>(seq.B.size()) - 1;
        seq.s.push_back(sd.h > 0 ? lgamma(BigReal(n + 1)) : BigReal(0L));
    };
    push(B);
    for (int n = 0; n < N; ++n) {
        int dB = B.degree();
        std::size_t size = static_cast<std::size_t>(std::max(W.degree() + dB, U.degree() + dB) + 1);
        std::vector<BigComplex> c(size);
        std::vector<long double> bound(size, 0.0L);
        BigComplex t;
        for (int k = 1; k <= dB; ++k) {
            BigComplex dk = B[static_cast<std::size_t>(k)] * BigReal(static_cast<long>(k));
            long double adk = aB[static_cast<std::size_t>(k)] * k;
            for (int j = 0; j <= W.degree(); ++j) {
                std::size_t idx = static_cast<std::size_t>(j + k - 1);
                mul_into(t, W[static_cast<std::size_t>(j)], dk);
                c[idx] += t;
                bound[idx] += aW[static_cast<std::size_t>(j)] * adk;
            }
        }
        BigComplex nn(static_cast<long>(n));
        int du = std::max(U.degree(), Wd.degree());
        for (int j = 0; j <= du; ++j) {
            BigComplex coef = U.coeff(j) - nn * Wd.coeff(j);
            long double acoef = (j <= U.degree() ? aU[static_cast<std::size_t>(j)] : 0.0L) +
                                (j <= Wd.degree() ? n * aWd[static_cast<std::size_t>(j)] : 0.0L);
            if (coef.is_zero()) continue;
            for (int k = 0; k <= dB; ++k) {
                std::size_t idx = static_cast<std::size_t>(j + k);
                mul_into(t, coef, B[static_cast<std::size_t>(k)]);
                c[idx] += t;
                bound[idx] += acoef * aB[static_cast<std::size_t>(k)];
            }
        }
        while (!c.empty()) {
            const BigComplex& top = c.back();
            if (!top.is_zero() && abs(top) > drop_floor * from_ld(bound[c.size() - 1])) break;
            c.pop_back();
            bound.pop_back();
        }
        if (c.empty())
            fail(ErrorKind::Precision, "B_" + std::to_string(n + 1) + " vanished to working precision; rerun at higher precision");
        if (!std::isfinite(static_cast<double>(std::log10(bound.back()))))
            fail(ErrorKind::Precision, "coefficient magnitude bound overflowed");
        B = CPoly(std::move(c));
        aB = abs_coeffs(B);
        push(B);
    }
    return seq;
}

BigReal degree_law_tolerance() { return BigReal::pow2(-working_precision() / 2); }

DegreeLawReport check_degree_law(const DerivSeq& seq) {
    const StructureData& sd = seq.structure;
    DegreeLawReport rep;
    int d0 = seq.degs.at(0);
    const BigComplex& g0 = seq.gamma.at(0);
    BigReal tol = degree_law_tolerance();
    int pq = sd.p - sd.q;
    if (sd.h > 0) rep.regime = "h>0";
    else if (pq < 0) rep.regime = "h=0,p<q";
    else rep.regime = "h=0,p>=q";
    for (int n = 0; n <= seq.N(); ++n) {
        DegreeLawRow row;
        row.n = n;
        row.deg = seq.degs[static_cast<std::size_t>(n)];
        row.gamma = seq.gamma[static_cast<std::size_t>(n)];
        if (sd.h > 0) {
            row.expected_deg = d0 + n * sd.kappa;
            row.expected_gamma = g0 * pow(BigComplex(static_cast<long>(sd.h)) * sd.tau_h, n);
        } else if (pq < 0) {
            row.expected_deg = d0 + n * (sd.d - 1);
            BigComplex sgn(n % 2 == 0 ? 1L : -1L);
            row.expected_gamma = g0 * sgn * rising(-pq, n);
        } else if (n <= pq) {
            row.expected_deg = d0 + n * (sd.d - 1);
            row.expected_gamma = g0 * rising(pq - n + 1, n);
        } else {
            int J = *sd.J;
            row.expected_deg = sd.q - sd.P_T.degree() - J + n * (sd.d - 1);
            BigComplex sgn(n % 2 == 0 ? 1L : -1L);
            row.expected_gamma = *sd.G_minus_J * sgn * rising(J, n);
        }
        row.rel_residual = rel_diff(row.gamma, row.expected_gamma);
        row.pass = row.deg == row.expected_deg && row.rel_residual <= tol;
        rep.max_residual = max(rep.max_residual, row.rel_residual);
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

LocalIdentityReport check_local_identities(const DerivSeq& seq) {
    const StructureData& sd = seq.structure;
    LocalIdentityReport rep;
    CPoly Wd = sd.W.derivative();
    for (std::size_t i = 0; i < sd.sites.size(); ++i) {
        const SiteRecord& s = sd.sites[i];
        const BigComplex& a = s.location;
        if (s.kind == SiteKind::Essential) {
            BigComplex u = sd.U.eval(a);
            BigComplex target = sd.P_sharp.eval(a);
            for (int n = 0; n <= seq.N(); ++n) {
                BigComplex v = seq.B[static_cast<std::size_t>(n)].eval(a);
                LocalIdentityRow row{i, n, rel_diff(v, target), !v.is_zero()};
                rep.max_residual = max(rep.max_residual, row.rel_residual);
                rep.all_nonzero = rep.all_nonzero && row.nonzero;
                rep.rows.push_back(std::move(row));
                target *= u;
            }
        } else {
            BigComplex wd = Wd.eval(a);
            for (int n = 0; n < seq.N(); ++n) {
                BigComplex prev = seq.B[static_cast<std::size_t>(n)].eval(a);
                BigComplex v = seq.B[static_cast<std::size_t>(n + 1)].eval(a);
                BigComplex target = -BigComplex(static_cast<long>(s.ell + n)) * wd * prev;
                LocalIdentityRow row{i, n + 1, rel_diff(v, target), !v.is_zero() && !prev.is_zero()};
                rep.max_residual = max(rep.max_residual, row.rel_residual);
                rep.all_nonzero = rep.all_nonzero && row.nonzero;
                rep.rows.push_back(std::move(row));
            }
        }
    }
    return rep;
}

BigComplex translation_gf(const StructureData& sd, const BigComplex& z, const BigComplex& xi) {
    const HyperExpSpec& f = sd.spec;
    BigComplex w = z + xi;
    BigComplex pre = f.Q.eval(z) / sd.P_T.eval(z);
    BigComplex ratio = f.P.eval(w) / f.Q.eval(w);
    return pre * ratio * exp(sd.E(w) - sd.E(z));
}

OracleSample gf_oracle(const StructureData& sd, const BigComplex& z, int N) {
    if (N < 0) fail(ErrorKind::InvalidInput, "N must be nonnegative");
    if (sd.site_at(z)) fail(ErrorKind::InvalidInput, "oracle point coincides with a singular site");
    BigReal r = sd.rho(z) / BigReal(2L);
    BigReal tol = BigReal::pow2(-working_precision() / 2);

    auto coefficients = [&](int K, BigReal& peak) {
        std::vector<BigComplex> c(static_cast<std::size_t>(N + 1));
        BigReal two_pi = BigReal::pi() * BigReal(2L);
        BigComplex t;
        peak = BigReal(0L);
        for (int k = 0; k < K; ++k) {
            BigReal ang = two_pi * BigReal(static_cast<long>(k)) / BigReal(static_cast<long>(K));
            BigComplex v = translation_gf(sd, z, BigComplex::polar(r, ang));
            peak = max(peak, abs(v));
            BigComplex step = BigComplex::polar(BigReal(1L), -ang);
            for (int n = 0; n <= N; ++n) {
                c[static_cast<std::size_t>(n)] += v;
                mul_into(t, v, step);
                std::swap(v, t);
            }
        }
        BigReal rn(1L);
        for (int n = 0; n <= N; ++n) {
            c[static_cast<std::size_t>(n)] /= rn * BigReal(static_cast<long>(K));
            rn *= r;
        }
        return c;
    };

    int K = 256;
    while (K < 2 * (N + 1)) K *= 2;
    BigReal peak;
    std::vector<BigComplex> prev = coefficients(K, peak);
    for (;;) {
        int K2 = 2 * K;
        if (K2 > (1 << 16)) fail(ErrorKind::NumericalFailure, "trapezoidal oracle did not converge");
        BigReal peak2;
        std::vector<BigComplex> cur = coefficients(K2, peak2);
        bool ok = true;
        BigReal rn(1L);
        for (int n = 0; n <= N && ok; ++n) {
            BigReal scale = peak2 / rn;
            ok = abs(cur[static_cast<std::size_t>(n)] - prev[static_cast<std::size_t>(n)]) <= tol * scale;
            rn *= r;
        }
        if (ok) return OracleSample{z, std::move(cur), r, K2};
        prev = std::move(cur);
        K = K2;
    }
}

}  // namespace hxz
