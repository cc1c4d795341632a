#include "hxz/roots.hpp"

#include <algorithm>
#include <complex>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "hxz/errors.hpp"

namespace hxz {

int RootSet::total_multiplicity() const {
    int s = 0;
    for (const auto& r : roots) s += r.multiplicity;
    return s;
}

std::vector<BigComplex> RootSet::locations() const {
    std::vector<BigComplex> out;
    out.reserve(roots.size());
    for (const auto& r : roots)
        for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.z);
    return out;
}

BigReal certified_residual_threshold() { return precision_floor(0, working_precision() / 2); }

namespace {

// Log of the modulus, safe for values far outside double range.
double log_abs(const BigComplex& c) {
    if (c.is_zero()) return -INFINITY;
    return log(abs(c)).to_double();
}

// Positive root of x^n = sum_{k<n} |a_k/a_n| x^k, solved for log x.
double cauchy_log_radius(const CPoly& q) {
    const int n = q.degree();
    const double ln = log_abs(q.lc());
    std::vector<double> la(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        la[static_cast<std::size_t>(k)] = log_abs(q[static_cast<std::size_t>(k)]) - ln;
    }
    auto g = [&](double y) {
        double m = -INFINITY;
        for (int k = 0; k < n; ++k) m = std::max(m, la[static_cast<std::size_t>(k)] + k * y);
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += std::exp(la[static_cast<std::size_t>(k)] + k * y - m);
        return m + std::log(s) - n * y;
    };
    double lo = -1.0, hi = 1.0;
    while (g(lo) < 0) lo *= 2;
    while (g(hi) > 0) hi *= 2;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return hi;
}

struct Workspace {
    BigComplex p, dp, tmp, s, diff, n, w, den;
    BigReal nrm;
};

// One Aberth correction for root k; returns the correction modulus in w.
bool aberth_correction(const CPoly& q, std::vector<BigComplex>& z, std::size_t k, Workspace& ws) {
    q.eval2(z[k], ws.p, ws.dp);
    if (ws.p.is_zero()) {
        ws.w = BigComplex{};
        return true;
    }
    ws.s = BigComplex{};
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == k) continue;
        mpfr_sub(ws.diff.re.raw(), z[k].re.raw(), z[j].re.raw(), MPFR_RNDN);
        mpfr_sub(ws.diff.im.raw(), z[k].im.raw(), z[j].im.raw(), MPFR_RNDN);
        mpfr_fmma(ws.nrm.raw(), ws.diff.re.raw(), ws.diff.re.raw(), ws.diff.im.raw(), ws.diff.im.raw(), MPFR_RNDN);
        if (mpfr_zero_p(ws.nrm.raw())) continue;
        mpfr_div(ws.diff.re.raw(), ws.diff.re.raw(), ws.nrm.raw(), MPFR_RNDN);
        mpfr_div(ws.diff.im.raw(), ws.diff.im.raw(), ws.nrm.raw(), MPFR_RNDN);
        mpfr_add(ws.s.re.raw(), ws.s.re.raw(), ws.diff.re.raw(), MPFR_RNDN);
        mpfr_sub(ws.s.im.raw(), ws.s.im.raw(), ws.diff.im.raw(), MPFR_RNDN);
    }
    if (ws.dp.is_zero()) return false;
    ws.n = ws.p / ws.dp;
    mul_into(ws.den, ws.n, ws.s);
    ws.den = BigComplex(1L) - ws.den;
    if (ws.den.is_zero()) return false;
    ws.w = ws.n / ws.den;
    return true;
}

// Gauss-Seidel Aberth sweeps; a root stops once its correction is below tol relative, or once
// |q(z)| sits at the rounding floor of sum |a_k||z|^k (ill-conditioned roots cannot do better).
// Returns the unconverged count.
int aberth_run(const CPoly& q, std::vector<BigComplex>& z, const BigReal& tol, int max_sweeps, const BigReal& tiny) {
    const int n = static_cast<int>(z.size());
    const long bits = working_precision();
    const BigReal near = precision_floor(0, bits / 8);
    const BigReal floor = precision_floor(0, bits - 8 - static_cast<long>(std::ceil(std::log2(n + 1.0))));
    std::vector<bool> done(z.size(), false);
    Workspace ws;
    int remaining = n;
    int sweep = 0;
    for (; sweep < max_sweeps && remaining > 0; ++sweep) {
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (done[k]) continue;
            if (!aberth_correction(q, z, k, ws)) {
                z[k] += BigComplex::polar(tiny * BigReal(1e-3), BigReal(1.0 + static_cast<double>(k)));
                continue;
            }
            BigReal at = max(abs(z[k]), tiny);
            BigReal step = abs(ws.w);
            bool stop = step <= tol * at;
            if (!stop && step <= near * at) stop = abs(ws.p) <= floor * q.abs_eval(abs(z[k]));
            z[k] -= ws.w;
            if (stop) {
                done[k] = true;
                --remaining;
            }
        }
    }
    return remaining;
}

// Approach phase in hardware doubles on the rescaled variable y = z/R, which keeps
// coefficients and values in range; the full-precision sweeps only contract.
void approach_in_double(const CPoly& q, const BigReal& radius, std::vector<BigComplex>& z, int max_sweeps) {
    using cd = std::complex<double>;
    const int n = q.degree();
    const BigReal lr = log(radius);
    const BigReal llc = log(abs(q.lc()));
    std::vector<cd> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const auto& a = q[static_cast<std::size_t>(k)];
        if (a.is_zero()) continue;
        double mag = (log(abs(a)) + BigReal(static_cast<long>(k - n)) * lr - llc).to_double();
        if (mag < -700) continue;
        c[static_cast<std::size_t>(k)] = std::polar(std::exp(mag), arg(a).to_double() - arg(q.lc()).to_double());
    }
    const double rd = radius.to_double();
    std::vector<cd> y(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) y[k] = z[k].to_cdouble() / rd;
    std::vector<bool> done(z.size(), false);
    int remaining = n;
    for (int sweep = 0; sweep < max_sweeps && remaining > 0; ++sweep) {
        for (std::size_t k = 0; k < y.size(); ++k) {
            if (done[k]) continue;
            cd p = 0.0, dp = 0.0;
            for (int j = n; j >= 0; --j) {
                dp = dp * y[k] + p;
                p = p * y[k] + c[static_cast<std::size_t>(j)];
            }
            if (!std::isfinite(p.real()) || !std::isfinite(dp.real()) || dp == 0.0) {
                done[k] = true;
                --remaining;
                continue;
            }
            cd s = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j)
                if (j != k && y[k] != y[j]) s += 1.0 / (y[k] - y[j]);
            cd ratio = p / dp;
            cd w = ratio / (1.0 - ratio * s);
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                done[k] = true;
                --remaining;
                continue;
            }
            y[k] -= w;
            if (std::abs(w) <= 1e-12 * std::max(std::abs(y[k]), 1e-300)) {
                done[k] = true;
                --remaining;
            }
        }
    }
    std::vector<bool> used(y.size(), false);
    for (std::size_t k = 0; k < z.size(); ++k) {
        // coincident double approximations would stall the full-precision sweeps
        bool clash = false;
        for (std::size_t j = 0; j < k; ++j)
            if (y[j] == y[k]) clash = true;
        if (!std::isfinite(y[k].real()) || !std::isfinite(y[k].imag()) || clash) continue;
        z[k] = BigComplex(BigReal(y[k].real()) * radius, BigReal(y[k].imag()) * radius);
    }
}

}  // namespace

RootSet find_roots(const CPoly& p, const RootOptions& opt) {
    const int deg = p.degree();
    if (deg < 1) fail(ErrorKind::InvalidInput, "find_roots needs a polynomial of degree >= 1");
    RootSet out;
    out.poly_degree = deg;

    int zeros = 0;
    while (p[static_cast<std::size_t>(zeros)].is_zero()) ++zeros;
    CPoly q(std::vector<BigComplex>(p.coeffs().begin() + zeros, p.coeffs().end()));
    q = q.monic();
    const int n = q.degree();

    std::vector<BigComplex> z;
    if (n == 1) {
        z.push_back(-q[0]);
    } else if (n > 1) {
        const BigReal radius = exp(BigReal(cauchy_log_radius(q)));
        const int max_sweeps = opt.max_sweeps > 0 ? opt.max_sweeps : 400 + 4 * n;
        const BigReal tiny = exp(BigReal(-cauchy_log_radius(CPoly(std::vector<BigComplex>(q.coeffs().rbegin(), q.coeffs().rend())))));
        const long bits = working_precision();
        if (!opt.initial.empty()) {
            if (static_cast<int>(opt.initial.size()) != n) fail(ErrorKind::InvalidInput, "initial guesses must match the number of nonzero roots");
            z = opt.initial;
        } else {
            const double golden = M_PI * (3.0 - std::sqrt(5.0));
            z.reserve(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) {
                BigReal theta = BigReal(2.0 * M_PI * k / n + golden * k + 0.25);
                z.push_back(BigComplex::polar(radius, theta));
            }
            approach_in_double(q, radius, z, max_sweeps);
        }
        int remaining = aberth_run(q, z, precision_floor(0, bits / 2), max_sweeps, tiny);
        if (remaining > 0)
            fail(ErrorKind::Precision, "root iteration did not converge in " + std::to_string(max_sweeps) +
                                           " sweeps at " + std::to_string(bits) +
                                           " bits; re-run at higher precision");
        Workspace ws;
        for (int s = 0; s < opt.polish_sweeps; ++s)
            for (std::size_t k = 0; k < z.size(); ++k)
                if (aberth_correction(q, z, k, ws)) z[k] -= ws.w;
    }

    // Merge clusters into multiplicities.
    const BigReal merge = precision_floor(0, working_precision() / 4);
    std::vector<int> parent(z.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        return a;
    };
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) {
            BigReal scale = max(max(abs(z[i]), abs(z[j])), BigReal(1e-30));
            if (abs(z[i] - z[j]) <= merge * scale) parent[static_cast<std::size_t>(find(static_cast<int>(j)))] = find(static_cast<int>(i));
        }
    std::vector<std::vector<std::size_t>> groups(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) groups[static_cast<std::size_t>(find(static_cast<int>(i)))].push_back(i);

    BigReal worst;
    auto record = [&](const BigComplex& at, int mult, BigReal spread) {
        BigComplex pv, dpv;
        p.eval2(at, pv, dpv);
        BigReal scale = p.abs_eval(abs(at));
        BigReal res = scale.is_zero() ? BigReal{} : abs(pv) / scale;
        if (res > worst) worst = res;
        Root r;
        r.z = at;
        r.multiplicity = mult;
        if (mult == 1 && !dpv.is_zero()) r.error_radius = BigReal(static_cast<long>(deg)) * abs(pv) / abs(dpv);
        else r.error_radius = max(spread, precision_floor(0, working_precision() / 4) * max(abs(at), BigReal(1L)));
        out.roots.push_back(std::move(r));
    };
    if (zeros > 0) {
        Root r;
        r.z = BigComplex{};
        r.multiplicity = zeros;
        r.error_radius = BigReal{};
        out.roots.push_back(std::move(r));
    }
    for (const auto& g : groups) {
        if (g.empty()) continue;
        BigComplex c;
        for (auto i : g) c += z[i];
        c /= BigReal(static_cast<long>(g.size()));
        BigReal spread;
        for (auto i : g) spread = max(spread, abs(z[i] - c));
        record(c, static_cast<int>(g.size()), spread);
    }
    std::stable_sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
        if (a.z.re != b.z.re) return a.z.re < b.z.re;
        return a.z.im < b.z.im;
    });
    out.residual = worst;
    if (out.residual > certified_residual_threshold())
        fail(ErrorKind::Precision, "root set residual above the certified threshold; re-run at higher precision");
    return out;
}

std::vector<DistinctRoot> distinct_roots(const CPoly& p) {
    if (p.is_zero()) fail(ErrorKind::InvalidInput, "zeros of the zero polynomial");
    std::vector<DistinctRoot> out;
    if (p.degree() == 0) return out;
    CPoly rad = squarefree_part(p);
    if (rad.degree() == 0) return out;
    RootSet rs = find_roots(rad);
    int total = 0;
    for (const auto& r : rs.roots) {
        if (r.multiplicity != 1)
            fail(ErrorKind::InconsistentStructure, "squarefree part has a repeated root");
        DistinctRoot d{r.z, zero_order(p, r.z)};
        if (d.multiplicity < 1) fail(ErrorKind::InconsistentStructure, "root of rad(p) is not a root of p");
        total += d.multiplicity;
        out.push_back(std::move(d));
    }
    if (total != p.degree())
        fail(ErrorKind::InconsistentStructure, "root multiplicities do not add up to the degree");
    return out;
}

EmpiricalMeasure empirical_measure(const RootSet& rs, const BigReal& norm) {
    if (!(norm > BigReal(0L))) fail(ErrorKind::InvalidInput, "empirical measure needs a positive norm");
    EmpiricalMeasure m;
    for (const auto& r : rs.roots) {
        EmpiricalMeasure::Atom a{r.z, BigReal(static_cast<long>(r.multiplicity)) / norm};
        m.total += a.weight;
        m.atoms.push_back(std::move(a));
    }
    return m;
}

DiscCount count_in_disc(const RootSet& rs, const BigComplex& center, const BigReal& r) {
    if (!(r > BigReal(0L))) fail(ErrorKind::InvalidInput, "disc radius must be positive");
    DiscCount dc;
    for (const auto& root : rs.roots) {
        BigReal dist = abs(root.z - center);
        if (dist < r) dc.count += root.multiplicity;
        if (abs(dist - r) <= BigReal(10L) * root.error_radius) dc.flagged += root.multiplicity;
    }
    return dc;
}

}  // namespace hxz
