#include "hxz/localmodels.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "hxz/errors.hpp"

namespace hxz {

namespace {

void require_m(int m) {
    if (m < 1) fail(ErrorKind::InvalidInput, "m must be positive");
}

void require_n(int n) {
    if (n < 0) fail(ErrorKind::InvalidInput, "n must be nonnegative");
}

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

BigReal from_q(const mpq_class& q) {
    BigReal r;
    mpfr_set_q(r.raw(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

// log2 |q| for a nonzero rational
double log2_abs(const mpq_class& q) {
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
    return std::log2(std::abs(mn / md)) + static_cast<double>(en - ed);
}

mpq_class factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return mpq_class(f);
}

}  // namespace

int qdegree(const QPoly& p) {
    for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k)
        if (p[static_cast<std::size_t>(k)] != 0) return k;
    return -1;
}

mpq_class qeval(const QPoly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

CPoly to_cpoly(const QPoly& p) {
    std::vector<BigComplex> c;
    c.reserve(p.size());
    for (const auto& q : p) c.emplace_back(from_q(q));
    CPoly out(std::move(c));
    out.normalize();
    return out;
}

mpq_class pochhammer(const mpq_class& a, int k) {
    mpq_class acc = 1;
    for (int i = 0; i < k; ++i) acc *= a + i;
    return acc;
}

mpz_class binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return b;
}

ShefferFamily sheffer_seq(int alpha, int m, int N) {
    require_m(m);
    require_n(N);
    ShefferFamily f;
    f.alpha = alpha;
    f.m = m;
    f.beta_param = mpq_class(-1) - mpq_class(alpha, m);
    f.beta_param.canonicalize();
    f.polys.push_back(QPoly{1});
    for (int n = 0; n < N; ++n) {
        const QPoly& p = f.polys.back();
        QPoly next(p.size() + 1);
        for (std::size_t k = 0; k < p.size(); ++k) {
            next[k] += (mpq_class(m * static_cast<long>(k)) + (n - alpha)) * p[k];
            next[k + 1] -= m * p[k];
        }
        trim(next);
        f.polys.push_back(std::move(next));
    }
    return f;
}

QPoly sheffer_explicit(int alpha, int m, int n) {
    require_m(m);
    require_n(n);
    QPoly out(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        mpq_class s = 0;
        for (int j = 0; j <= k; ++j) {
            mpq_class term = mpq_class(binomial(k, j)) * pochhammer(mpq_class(m * j - alpha), n);
            if (j % 2) s -= term;
            else s += term;
        }
        out[static_cast<std::size_t>(k)] = s / factorial(k);
    }
    trim(out);
    return out;
}

QPoly scaled_laguerre(int a, int n) {
    require_n(n);
    QPoly prev{1};
    if (n == 0) return prev;
    QPoly cur{mpq_class(1 + a), -1};
    for (int k = 1; k < n; ++k) {
        QPoly next(cur.size() + 1);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            next[i] += mpq_class(2 * k + 1 + a) * cur[i];
            next[i + 1] -= cur[i];
        }
        for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= mpq_class(k + a) * prev[i];
        for (auto& c : next) c /= k + 1;
        prev = std::move(cur);
        cur = std::move(next);
    }
    mpq_class f = factorial(n);
    for (auto& c : cur) c *= f;
    trim(cur);
    return cur;
}

LaguerreReport laguerre_check(int alpha, int n) {
    LaguerreReport r;
    r.alpha = alpha;
    r.n = n;
    QPoly a = sheffer_seq(alpha, 1, n).polys.back();
    QPoly b = scaled_laguerre(-alpha - 1, n);
    std::size_t sz = std::max(a.size(), b.size());
    a.resize(sz);
    b.resize(sz);
    r.max_diff = 0;
    for (std::size_t k = 0; k < sz; ++k) r.max_diff = std::max<mpq_class>(r.max_diff, abs(a[k] - b[k]));
    r.exact = r.max_diff == 0;
    return r;
}

mpq_class monomial_moment(int alpha, int m, int j, int k) {
    require_m(m);
    if (alpha >= 0) fail(ErrorKind::Domain, "moment functionals need alpha < 0");
    if (j < 0 || j >= m) fail(ErrorKind::InvalidInput, "functional index must lie in [0, m-1]");
    mpq_class s = 0;
    for (int r = 0; r <= j; ++r) {
        mpq_class lam(r - alpha, m);
        lam.canonicalize();
        mpq_class term = mpq_class(binomial(j, r)) * pochhammer(lam, k);
        if (r % 2) s -= term;
        else s += term;
    }
    return s / factorial(j);
}

mpq_class morth_moment(int alpha, int m, int j, int nu, int n) {
    if (nu < 0) fail(ErrorKind::InvalidInput, "nu must be nonnegative");
    QPoly p = sheffer_seq(alpha, m, n).polys.back();
    mpq_class s = 0;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) s += p[k] * monomial_moment(alpha, m, j, static_cast<int>(k) + nu);
    return s;
}

MomentTable moment_table(int alpha, int m, int nu_max, int n_max) {
    MomentTable t;
    t.alpha = alpha;
    t.m = m;
    for (int r = 0; r < m; ++r) {
        mpq_class lam(r - alpha, m);
        lam.canonicalize();
        t.lambda_r.push_back(lam);
    }
    ShefferFamily f = sheffer_seq(alpha, m, n_max);
    int kmax = n_max + nu_max;
    for (int j = 0; j < m; ++j) {
        std::vector<mpq_class> mom;
        for (int k = 0; k <= kmax; ++k) mom.push_back(monomial_moment(alpha, m, j, k));
        for (int nu = 0; nu <= nu_max; ++nu)
            for (int n = 0; n <= n_max; ++n) {
                const QPoly& p = f.polys[static_cast<std::size_t>(n)];
                mpq_class s = 0;
                for (std::size_t k = 0; k < p.size(); ++k) s += p[k] * mom[k + static_cast<std::size_t>(nu)];
                t.entries[{j, nu, n}] = s;
            }
    }
    return t;
}

QPoly moment_generating_sum(int alpha, int m, int j, int nu, int N) {
    MomentTable t = moment_table(alpha, m, nu, N);
    QPoly out;
    for (int n = 0; n <= N; ++n) out.push_back(t.entries.at({j, nu, n}) / factorial(n));
    trim(out);
    return out;
}

QPoly moment_generating_closed(int alpha, int m, int j, int nu) {
    require_m(m);
    if (j < 0 || j >= m) fail(ErrorKind::InvalidInput, "functional index must lie in [0, m-1]");
    QPoly out(static_cast<std::size_t>(m * nu + j + 1));
    for (int r = 0; r <= j; ++r) {
        mpq_class lam(r - alpha, m);
        lam.canonicalize();
        mpq_class coef = mpq_class(binomial(j, r)) * pochhammer(lam, nu) / factorial(j);
        if (r % 2) coef = -coef;
        int e = m * nu + r;
        for (int k = 0; k <= e; ++k) {
            mpq_class term = coef * mpq_class(binomial(e, k));
            if (k % 2) out[static_cast<std::size_t>(k)] -= term;
            else out[static_cast<std::size_t>(k)] += term;
        }
    }
    trim(out);
    return out;
}

int ord0(int alpha, int m, int n) {
    require_m(m);
    if (alpha < 0) return 0;
    if (n < alpha + 1) fail(ErrorKind::Domain, "the order law needs n >= alpha + 1");
    return alpha / m + 1;
}

int ord0_exact(const QPoly& p) {
    for (std::size_t k = 0; k < p.size(); ++k)
        if (p[k] != 0) return static_cast<int>(k);
    fail(ErrorKind::InvalidInput, "zero polynomial has no finite order");
}

BigReal generating_function_check(int alpha, int m, int N, const BigComplex& x, const BigComplex& t) {
    require_m(m);
    require_n(N);
    // doubled precision so the comparison resolves below the working ulp
    PrecisionScope scope(2 * working_precision());
    std::size_t L = static_cast<std::size_t>(N + 1);
    // g = x (1 - (1-t)^(-m)), g_0 = 0
    std::vector<BigComplex> g(L), e(L), a(L), rhs(L);
    for (std::size_t k = 1; k < L; ++k)
        g[k] = -x * BigComplex(from_q(mpq_class(binomial(m + static_cast<int>(k) - 1, static_cast<int>(k)))));
    e[0] = BigComplex(1L);
    for (std::size_t n = 1; n < L; ++n) {
        BigComplex s;
        for (std::size_t k = 1; k <= n; ++k) s += g[k] * e[n - k] * BigReal(static_cast<long>(k));
        e[n] = s / BigReal(static_cast<long>(n));
    }
    a[0] = BigComplex(1L);
    for (std::size_t k = 1; k < L; ++k)
        a[k] = a[k - 1] * BigReal(static_cast<long>(static_cast<long>(k) - 1 - alpha)) / BigReal(static_cast<long>(k));
    for (std::size_t n = 0; n < L; ++n)
        for (std::size_t k = 0; k <= n; ++k) rhs[n] += a[k] * e[n - k];

    ShefferFamily f = sheffer_seq(alpha, m, N);
    BigComplex lhs_sum, rhs_sum, tp(1L);
    BigReal scale;
    BigReal fact(1L);
    for (std::size_t n = 0; n < L; ++n) {
        if (n > 0) fact *= BigReal(static_cast<long>(n));
        BigComplex pv = to_cpoly(f.polys[n]).eval(x) / fact;
        lhs_sum += pv * tp;
        rhs_sum += rhs[n] * tp;
        scale += abs(pv * tp);
        tp *= t;
    }
    return abs(lhs_sum - rhs_sum) / max(scale, BigReal::pow2(-working_precision()));
}

BigComplex v_branch(int m, const BigComplex& zeta) {
    require_m(m);
    double c = c_m(m).get_d();
    double zr = zeta.re.to_double(), zi = zeta.im.to_double();
    double dist = (zr >= 0 && zr <= c) ? std::abs(zi) : std::hypot(zi, zr < 0 ? zr : zr - c);
    if (dist <= 1e-8) fail(ErrorKind::BranchAmbiguity, "zeta lies on the cut [0, c_m]");
    BigComplex mm(static_cast<long>(m));
    auto newton = [&](BigComplex v, const BigComplex& z, int iters) {
        for (int it = 0; it < iters; ++it) {
            BigComplex vm = pow(v, m);
            BigComplex f = vm * v - mm * z * (v - BigComplex(1L));
            BigComplex df = BigComplex(static_cast<long>(m + 1)) * vm - mm * z;
            BigComplex step = f / df;
            v -= step;
            if (abs(step) <= BigReal::pow2(-working_precision() + 8) * abs(v)) break;
        }
        return v;
    };
    BigReal az = abs(zeta);
    double R = std::max(1e8, 100.0 * az.to_double());
    double ratio = R / az.to_double();
    int steps = std::max(1, static_cast<int>(std::ceil(std::log(ratio) / std::log(1.05))));
    BigComplex dir = zeta / az;
    BigComplex z0 = dir * BigReal(R);
    BigComplex v = newton(BigComplex(1L) + BigComplex(1L) / (mm * z0), z0, 50);
    for (int s = 1; s <= steps; ++s) {
        BigReal r = az * BigReal(std::pow(ratio, 1.0 - static_cast<double>(s) / steps));
        v = newton(v, dir * r, s == steps ? 200 : 12);
    }
    return v;
}

mpq_class c_m(int m) {
    require_m(m);
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), mpz_class(m + 1).get_mpz_t(), static_cast<unsigned long>(m + 1));
    mpz_pow_ui(den.get_mpz_t(), mpz_class(m).get_mpz_t(), static_cast<unsigned long>(m + 1));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

double mu_zeta(int m, double phi) {
    return std::pow(std::sin((m + 1) * phi), m + 1) / (m * std::sin(phi) * std::pow(std::sin(m * phi), m));
}

double mu_density(int m, double phi) {
    return std::pow(std::sin(m * phi), m + 1) / (M_PI * std::pow(std::sin((m + 1) * phi), m));
}

namespace {

double mu_dzeta(int m, double phi) {
    double cot1 = 1.0 / std::tan((m + 1) * phi), cot0 = 1.0 / std::tan(phi), cotm = 1.0 / std::tan(m * phi);
    return mu_zeta(m, phi) * ((m + 1.0) * (m + 1.0) * cot1 - cot0 - static_cast<double>(m) * m * cotm);
}

}  // namespace

MicroLimit micro_limit(int m, int grid_size) {
    require_m(m);
    if (grid_size < 2) fail(ErrorKind::InvalidInput, "grid needs at least two nodes");
    MicroLimit ml;
    ml.m = m;
    ml.cm = c_m(m);
    double phi0 = M_PI / (m + 1);
    double cm = ml.cm.get_d();
    // Chebyshev-spaced nodes from phi0 (zeta = 0) down to 0 (zeta = c_m)
    int K = grid_size;
    std::vector<double> nodes(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) nodes[static_cast<std::size_t>(k)] = phi0 * (1.0 + std::cos(M_PI * k / K)) / 2.0;
    auto g = [&](double phi) { return -mu_density(m, phi) * mu_dzeta(m, phi); };
    double acc = 0.0;
    for (int k = 0; k <= K; ++k) {
        double phi = nodes[static_cast<std::size_t>(k)];
        if (k > 0) {
            double lo = phi, hi = nodes[static_cast<std::size_t>(k - 1)];
            acc += boost::math::quadrature::gauss<double, 7>::integrate(g, lo, hi);
        }
        double z, d;
        if (k == 0) {
            z = 0.0;
            d = std::numeric_limits<double>::infinity();
        } else if (k == K) {
            z = cm;
            d = 0.0;
        } else {
            z = mu_zeta(m, phi);
            d = mu_density(m, phi);
        }
        if (!ml.zeta.empty()) z = std::clamp(z, ml.zeta.back(), cm);  // rounding near the endpoints
        ml.phi.push_back(phi);
        ml.zeta.push_back(z);
        ml.density.push_back(d);
        ml.cdf.push_back(acc);
    }
    ml.total = acc;
    if (std::abs(acc - 1.0) > 1e-8) fail(ErrorKind::Quadrature, "limit measure total mass differs from 1");
    for (auto& c : ml.cdf) c /= acc;
    return ml;
}

double MicroLimit::cdf_at(double z) const {
    if (z <= 0.0) return 0.0;
    if (z >= zeta.back()) return 1.0;
    auto it = std::upper_bound(zeta.begin(), zeta.end(), z);
    std::size_t hi = static_cast<std::size_t>(it - zeta.begin());
    std::size_t lo = hi - 1;
    double w = (z - zeta[lo]) / (zeta[hi] - zeta[lo]);
    return cdf[lo] + w * (cdf[hi] - cdf[lo]);
}

double MicroLimit::quantile(double u) const {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return zeta.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
    std::size_t lo = hi - 1;
    double w = (u - cdf[lo]) / (cdf[hi] - cdf[lo]);
    return zeta[lo] + w * (zeta[hi] - zeta[lo]);
}

double mp_density(double zeta) {
    if (!(zeta > 0.0 && zeta < 4.0)) return 0.0;
    return std::sqrt(zeta * (4.0 - zeta)) / (2.0 * M_PI * zeta);
}

double mp_cdf(double zeta) {
    if (zeta <= 0.0) return 0.0;
    if (zeta >= 4.0) return 1.0;
    double psi = std::acos(1.0 - zeta / 2.0);
    return (psi + std::sin(psi)) / M_PI;
}

RescaledZeros rescaled_empirical(int alpha, int m, int n) {
    require_m(m);
    if (n < 1) fail(ErrorKind::InvalidInput, "n must be positive");
    RescaledZeros rz;
    rz.alpha = alpha;
    rz.m = m;
    rz.n = n;
    QPoly p = sheffer_seq(alpha, m, n).polys.back();
    rz.zeros_at_origin = ord0_exact(p);
    p.erase(p.begin(), p.begin() + rz.zeros_at_origin);

    // cancellation at the support edge: |p|(-X) against the size of p on [0, X]
    mpq_class X = mpq_class(n) * c_m(m);
    double top = log2_abs(qeval(p, -X));
    double env = -1e300;
    for (int k = 1; k <= 40; ++k) {
        mpq_class v = qeval(p, X * mpq_class(k, 41));
        if (v != 0) env = std::max(env, log2_abs(v));
    }
    double loss = std::max(0.0, top - env);
    long bits = working_precision() + 64 + 2 * static_cast<long>(std::ceil(loss));

    // limit-law quantiles as starting points
    MicroLimit limit = micro_limit(m);
    std::vector<BigComplex> zs;
    for (;;) {
        try {
            PrecisionScope scope(bits);
            // zeros of p(X y) sit in [0, 1], keeping the monic coefficients within double range
            QPoly ps(p);
            mpq_class xp = 1;
            for (auto& c : ps) {
                c *= xp;
                xp *= X;
            }
            RootOptions ro;
            int nz = qdegree(ps);
            for (int k = 0; k < nz; ++k) {
                double y = limit.quantile((k + 0.5) / nz) / limit.zeta.back();
                ro.initial.emplace_back(y, (k % 2 ? 1e-3 : -1e-3) / nz);
            }
            RootSet rs = find_roots(to_cpoly(ps), ro);
            BigReal cm = from_q(c_m(m));
            for (const auto& r : rs.roots)
                for (int k = 0; k < r.multiplicity; ++k) zs.push_back(r.z * cm);
            break;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::Precision || bits >= 16384) throw;
            bits = bits * 3 / 2;
        }
    }
    rz.bits_used = bits;
    BigReal w = BigReal(1L) / BigReal(static_cast<long>(n));
    for (int k = 0; k < rz.zeros_at_origin; ++k) rz.measure.atoms.push_back({BigComplex(), w});
    for (auto& z : zs) {
        BigComplex zr = rounded(z);
        rz.zeta.push_back(zr);
        rz.measure.atoms.push_back({zr, w});
    }
    std::sort(rz.zeta.begin(), rz.zeta.end(), [](const BigComplex& a, const BigComplex& b) { return a.re < b.re; });
    rz.measure.total = w * BigReal(static_cast<long>(rz.measure.atoms.size()));
    return rz;
}

EmpiricalMeasure pushforward(const RescaledZeros& rz, const BigComplex& lambda, int eta_rotation) {
    int m = rz.m;
    if (lambda.is_zero()) fail(ErrorKind::InvalidInput, "lambda must be nonzero");
    if (rz.zeta.empty()) fail(ErrorKind::InvalidInput, "no nonzero zeros to push forward");
    BigReal two_pi = BigReal::pi() * BigReal(2L);
    auto eps = [&](int k) { return BigComplex::polar(BigReal(1L), two_pi * BigReal(static_cast<long>(k)) / BigReal(static_cast<long>(m))); };
    BigComplex eta = root(-lambda, m) * eps(((eta_rotation % m) + m) % m);
    BigReal w = BigReal(1L) / BigReal(static_cast<long>(m) * static_cast<long>(rz.zeta.size()));
    BigReal inv_m = BigReal(-1L) / BigReal(static_cast<long>(m));
    EmpiricalMeasure out;
    for (const auto& z : rz.zeta) {
        BigComplex base = exp(log(z) * inv_m);
        for (int nu = 0; nu < m; ++nu) out.atoms.push_back({eps(nu) * eta * base, w});
    }
    out.total = w * BigReal(static_cast<long>(out.atoms.size()));
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) fail(ErrorKind::InvalidInput, "no samples");
    std::sort(samples.begin(), samples.end());
    double N = static_cast<double>(samples.size()), d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        d = std::max({d, (i + 1) / N - F, F - i / N});
    }
    return d;
}

}  // namespace hxz
