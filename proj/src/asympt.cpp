#include "hxz/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hxz/errors.hpp"

namespace hxz {

namespace {

BigComplex omega(int nu, int m) {
    BigReal ang = BigReal::pi() * BigReal(2L * nu) / BigReal(static_cast<long>(m + 1));
    return BigComplex::polar(BigReal(1L), ang);
}

BigReal npow(int n, double e) { return exp(log(BigReal(static_cast<long>(n))) * BigReal(e)); }

void require_in_cell(const StructureData& sd, std::size_t i, const BigComplex& z) {
    if (i >= sd.sites.size()) fail(ErrorKind::InvalidInput, "site index out of range");
    if (sd.site_at(z)) fail(ErrorKind::InvalidInput, "point coincides with a singular site");
    BigReal di = abs(z - sd.sites[i].location);
    for (std::size_t j = 0; j < sd.sites.size(); ++j)
        if (j != i && abs(z - sd.sites[j].location) < di) fail(ErrorKind::Domain, "point lies outside the cell of the site");
}

// Direction from a_i toward the bulk of its cell, or nullopt when the cell has no preferred side.
std::optional<BigReal> cell_centroid_angle(const StructureData& sd, std::size_t i) {
    if (sd.sites.size() < 2) return std::nullopt;
    VoronoiDiagram vd = build_diagram(sd.sites);
    const BigComplex& a = sd.sites[i].location;
    BigComplex acc;
    for (std::size_t ei : vd.cells[i].edges) {
        const Edge& e = vd.edges[ei];
        for (int side = 0; side < 2; ++side) {
            const BigReal& t = side == 0 ? e.t_lo : e.t_hi;
            BigComplex dir;
            if (t.is_finite()) {
                BigComplex v = e.point(t) - a;
                dir = v / abs(v);
            } else {
                dir = side == 0 ? -e.direction : e.direction;
            }
            acc += dir;
        }
    }
    if (abs(acc) <= BigReal(1e-12)) return std::nullopt;
    return arg(acc);
}

BigComplex phi_value(const std::vector<BigComplex>& lt, int n, const BigComplex& t) {
    BigComplex acc;
    BigComplex inv = BigComplex(1L) / t, p = inv;
    for (const auto& l : lt) {
        acc += l * p;
        p *= inv;
    }
    return acc - BigComplex(static_cast<long>(n + 1)) * log(BigComplex(1L) - t);
}

BigComplex phi_d1(const std::vector<BigComplex>& lt, int n, const BigComplex& t) {
    BigComplex acc;
    BigComplex inv = BigComplex(1L) / t, p = inv * inv;
    for (std::size_t s = 1; s <= lt.size(); ++s) {
        acc -= lt[s - 1] * p * BigReal(static_cast<long>(s));
        p *= inv;
    }
    return acc + BigComplex(static_cast<long>(n + 1)) / (BigComplex(1L) - t);
}

BigComplex phi_d2(const std::vector<BigComplex>& lt, int n, const BigComplex& t) {
    BigComplex acc;
    BigComplex inv = BigComplex(1L) / t, p = inv * inv * inv;
    for (std::size_t s = 1; s <= lt.size(); ++s) {
        acc += lt[s - 1] * p * BigReal(static_cast<long>(s * (s + 1)));
        p *= inv;
    }
    BigComplex om = BigComplex(1L) - t;
    return acc + BigComplex(static_cast<long>(n + 1)) / (om * om);
}

// t^(m+1) (1-t) Phi'(t), a polynomial of degree m+1
CPoly saddle_polynomial(const std::vector<BigComplex>& lt, int n) {
    int m = static_cast<int>(lt.size());
    std::vector<BigComplex> c(static_cast<std::size_t>(m + 2));
    for (int s = 1; s <= m; ++s) {
        BigComplex k = lt[static_cast<std::size_t>(s - 1)] * BigReal(static_cast<long>(s));
        c[static_cast<std::size_t>(m - s)] -= k;
        c[static_cast<std::size_t>(m - s + 1)] += k;
    }
    c[static_cast<std::size_t>(m + 1)] += BigComplex(static_cast<long>(n + 1));
    return CPoly(c);
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Darboux: return "Darboux";
        case Regime::WrightOneSaddle: return "WrightOneSaddle";
        case Regime::WrightMultiSaddle: return "WrightMultiSaddle";
    }
    return "?";
}

CellClassification classify(const StructureData& sd, std::size_t i) {
    if (i >= sd.sites.size()) fail(ErrorKind::InvalidInput, "site index out of range");
    const SiteRecord& s = sd.sites[i];
    CellClassification c;
    c.site = i;
    c.kind = s.kind == SiteKind::Essential ? CellKind::Essential : CellKind::Algebraic;
    c.m = s.m;
    c.beta = s.beta;
    int num = -(2 * s.beta + s.m + 2), den = 2 * (s.m + 1);
    int g = std::gcd(std::abs(num), den);
    c.theta_num = num / g;
    c.theta_den = den / g;
    return c;
}

BigComplex amplitude_R(const StructureData& sd, std::size_t i, const BigComplex& z) {
    if (i >= sd.sites.size()) fail(ErrorKind::InvalidInput, "site index out of range");
    const SiteRecord& s = sd.sites[i];
    const BigComplex& a = s.location;
    CPoly Pt = s.p_loc > 0 ? deflate(sd.P_T, a, s.p_loc) : sd.P_T;
    CPoly Qt = s.r_loc > 0 ? deflate(sd.spec.Q, a, s.r_loc) : sd.spec.Q;
    BigComplex ptz = Pt.eval(z);
    if (ptz.is_zero()) fail(ErrorKind::SingularAmplitude, "z is a zero of the local prefactor");
    BigComplex val = Qt.eval(z) * Pt.eval(a) * sd.P_sharp.eval(a) / (ptz * Qt.eval(a));
    return val * exp(sd.E_reg(i) - sd.E(z));
}

PredictionReport darboux_predict(const DerivSeq& seq, std::size_t i, const BigComplex& z, int n) {
    const StructureData& sd = seq.structure;
    CellClassification c = classify(sd, i);
    if (c.kind != CellKind::Algebraic) fail(ErrorKind::Domain, "Darboux extraction needs a pole cell");
    require_in_cell(sd, i, z);
    if (n < 1 || n > seq.N()) fail(ErrorKind::InvalidInput, "n outside the computed sequence");
    BigComplex d = sd.sites[i].location - z;
    BigReal gam = gamma(BigReal(static_cast<long>(-c.beta)));
    PredictionReport rep;
    rep.regime = Regime::Darboux;
    rep.predicted = pow(d, -static_cast<long>(n)) * npow(n, -c.beta - 1.0) * amplitude_R(sd, i, z) / gam;
    rep.exact = seq.scaled_value(n, z);
    rep.rel_error = abs(rep.predicted / rep.exact - BigComplex(1L));
    return rep;
}

int wright_n_min(const StructureData& sd, std::size_t i, const BigComplex& z) {
    const SiteRecord& s = sd.sites.at(i);
    int m = s.m;
    BigComplex u = z - s.location;
    std::vector<BigReal> mags;
    for (int k = 1; k <= m; ++k) mags.push_back(abs(s.principal->lambda(k) / pow(u, k)));
    double sep = 0.0;
    for (int k = 1; k < m; ++k) {
        if (mags[static_cast<std::size_t>(k - 1)].is_zero()) continue;
        double r = (mags[static_cast<std::size_t>(k - 1)] / mags[static_cast<std::size_t>(m - 1)]).to_double();
        sep = std::max(sep, std::pow(r, 1.0 / (m - k + 1)));
    }
    double need = std::pow(4.0 * sep, m + 1);
    return std::max(1, static_cast<int>(std::ceil(need)));
}

BigComplex eta_branch(const StructureData& sd, std::size_t i, const BigComplex& z) {
    const SiteRecord& s = sd.sites.at(i);
    if (s.kind != SiteKind::Essential) fail(ErrorKind::Domain, "eta is defined on essential cells only");
    int m = s.m;
    BigComplex u = z - s.location;
    BigComplex mlm = s.principal->lambda(m) * BigReal(static_cast<long>(m));
    std::optional<BigReal> centroid = cell_centroid_angle(sd, i);
    if (!centroid) {
        BigComplex w = mlm / pow(u, m);
        if (w.im.is_zero()) w.im = BigReal(0L);  // principal branch, not the -0 side of the cut
        return root(w, m + 1);
    }
    // argument of u taken in (c - pi, c + pi], placing the cut on the ray opposite the centroid
    BigReal two_pi = BigReal::pi() * BigReal(2L);
    BigReal a = arg(u);
    while (a - *centroid > BigReal::pi()) a -= two_pi;
    while (a - *centroid <= -BigReal::pi()) a += two_pi;
    BigReal e = BigReal(static_cast<long>(-m)) / BigReal(static_cast<long>(m + 1));
    BigComplex up = exp(BigComplex(log(abs(u)), a) * e);
    return root(mlm, m + 1) * up;
}

SaddleExpansion wright_saddles(const StructureData& sd, std::size_t i, const BigComplex& z, int n,
                               const WrightOptions& opt) {
    CellClassification c = classify(sd, i);
    if (c.kind != CellKind::Essential) fail(ErrorKind::Domain, "Wright expansion needs an essential cell");
    require_in_cell(sd, i, z);
    if (n < wright_n_min(sd, i, z)) fail(ErrorKind::SaddleFailure, "n is below the saddle separation threshold");
    const SiteRecord& s = sd.sites[i];
    int m = s.m;

    SaddleExpansion se;
    se.site = i;
    se.z = z;
    se.n = n;
    se.m = m;
    se.beta = s.beta;
    se.theta = c.theta();
    se.d = s.location - z;
    BigComplex u = z - s.location;
    for (int k = 1; k <= m; ++k) se.lambda_tilde.push_back(s.principal->lambda(k) / pow(u, k));
    se.eta = eta_branch(sd, i, z) * omega(((opt.eta_rotation % (m + 1)) + (m + 1)) % (m + 1), m);
    se.R_at_1 = amplitude_R(sd, i, z);

    CPoly g = saddle_polynomial(se.lambda_tilde, n);
    BigReal scale = npow(n, -1.0 / (m + 1));
    BigReal tol = BigReal::pow2(-working_precision() / 2);
    BigReal pi = BigReal::pi();
    BigReal two_pi = pi * BigReal(2L);
    BigComplex nth = BigComplex(npow(n, -se.theta));
    std::vector<BigReal> last_step;
    for (int nu = 0; nu <= m; ++nu) {
        Saddle sd_;
        sd_.nu = nu;
        sd_.omega = omega(nu, m);
        sd_.seed = sd_.omega * se.eta * scale;
        BigComplex t = sd_.seed;
        BigReal step;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            BigComplex v, dv;
            g.eval2(t, v, dv);
            if (dv.is_zero()) break;
            BigComplex delta = v / dv;
            t -= delta;
            step = abs(delta);
            if (step <= tol * abs(t)) {
                for (int k = 0; k < 2; ++k) {
                    g.eval2(t, v, dv);
                    t -= v / dv;
                }
                converged = true;
                break;
            }
        }
        if (!converged || !t.is_finite()) fail(ErrorKind::SaddleFailure, "Newton iteration for a saddle did not converge");
        sd_.t = t;
        sd_.residual = abs(phi_d1(se.lambda_tilde, n, t));
        sd_.phi2 = phi_d2(se.lambda_tilde, n, t);
        sd_.phase = phi_value(se.lambda_tilde, n, t);

        BigReal phi0 = (pi - arg(sd_.phi2)) / BigReal(2L);
        BigComplex tangent = BigComplex::i() * t / abs(t);
        BigComplex dir0 = BigComplex::polar(BigReal(1L), phi0);
        BigReal proj = dir0.re * tangent.re + dir0.im * tangent.im;
        sd_.descent = proj.sign() >= 0 ? phi0 : phi0 + pi;
        BigComplex rot = BigComplex::polar(BigReal(1L), sd_.descent - pi / BigReal(2L));
        BigComplex tb = pow(t, static_cast<long>(s.beta));
        sd_.amplitude = tb * se.R_at_1 * rot / sqrt(two_pi * abs(sd_.phi2)) * nth;

        BigComplex tau = sd_.omega * se.eta;
        BigComplex sq = sqrt(tau);
        BigComplex al = sq * rot.conj();
        if (al.re.sign() < 0) sq = -sq;
        sd_.amplitude_leading =
            pow(tau, static_cast<long>(s.beta)) * sq * se.R_at_1 / sqrt(two_pi * BigReal(static_cast<long>(m + 1)));
        last_step.push_back(step);
        se.saddles.push_back(std::move(sd_));
    }
    for (std::size_t a = 0; a < se.saddles.size(); ++a)
        for (std::size_t b = a + 1; b < se.saddles.size(); ++b) {
            BigReal gap = abs(se.saddles[a].t - se.saddles[b].t);
            BigReal lim = max(last_step[a], last_step[b]) * BigReal(10L);
            lim = max(lim, BigReal::pow2(-working_precision() / 4) * abs(se.saddles[a].t));
            if (gap <= lim) fail(ErrorKind::SaddleFailure, "two saddles collided");
        }

    BigReal best = BigReal::infinity(-1);
    for (const auto& x : se.saddles) best = max(best, x.phase.re);
    BigReal margin = BigReal(1e-3) * abs(se.eta) * BigReal((m + 1.0) / m) * npow(n, static_cast<double>(m) / (m + 1));
    for (const auto& x : se.saddles)
        if (x.phase.re >= best - margin) se.dominant.push_back(x.nu);
    return se;
}

BigComplex wright_sum(const SaddleExpansion& se, const std::vector<int>& which, bool leading_amplitude) {
    BigComplex acc;
    for (int nu : which) {
        const Saddle& s = se.saddles.at(static_cast<std::size_t>(nu));
        acc += (leading_amplitude ? s.amplitude_leading : s.amplitude) * exp(s.phase);
    }
    return acc * pow(se.d, -static_cast<long>(se.n)) * npow(se.n, se.theta);
}

PredictionReport wright_predict(const DerivSeq& seq, std::size_t i, const BigComplex& z, int n,
                                const WrightOptions& opt) {
    if (n < 1 || n > seq.N()) fail(ErrorKind::InvalidInput, "n outside the computed sequence");
    SaddleExpansion se = wright_saddles(seq.structure, i, z, n, opt);
    PredictionReport rep;
    std::vector<int> which = se.dominant;
    if (se.dominant.size() == 1) {
        rep.regime = Regime::WrightOneSaddle;
    } else {
        rep.regime = Regime::WrightMultiSaddle;
    }
    if (se.dominant.size() > 1 || opt.all_saddles) {
        which.clear();
        for (const auto& s : se.saddles) which.push_back(s.nu);
    }
    rep.predicted = wright_sum(se, which, opt.leading_amplitude);
    rep.exact = seq.scaled_value(n, z);
    rep.rel_error = abs(rep.predicted / rep.exact - BigComplex(1L));
    return rep;
}

StokesIndicator stokes_indicator(const StructureData& sd, std::size_t i, const BigComplex& z) {
    CellClassification c = classify(sd, i);
    if (c.kind != CellKind::Essential) fail(ErrorKind::Domain, "Stokes classification needs an essential cell");
    BigComplex eta = eta_branch(sd, i, z);
    int m = c.m;
    std::vector<BigReal> re;
    for (int nu = 0; nu <= m; ++nu) re.push_back((omega(nu, m) * eta).re);
    BigReal best = *std::max_element(re.begin(), re.end(), [](const BigReal& a, const BigReal& b) { return a < b; });
    BigReal tol = BigReal(1e-3) * abs(eta);
    StokesIndicator out;
    BigReal runner = BigReal::infinity(-1);
    for (int nu = 0; nu <= m; ++nu) {
        if (re[static_cast<std::size_t>(nu)] >= best - tol) out.dominant.push_back(nu);
        else runner = max(runner, re[static_cast<std::size_t>(nu)]);
    }
    out.margin = runner.is_inf() ? BigReal(0L) : best - runner;
    out.on_stokes_set = out.dominant.size() >= 2;
    return out;
}

BranchCalibration calibrate_branch(const StructureData& sd, std::size_t i, const BigComplex& z, int n) {
    SaddleExpansion se = wright_saddles(sd, i, z, n);
    std::vector<int> which = se.dominant;
    if (which.size() > 1) {
        which.clear();
        for (const auto& s : se.saddles) which.push_back(s.nu);
    }
    BigComplex pred = wright_sum(se, which, false);
    OracleSample o = gf_oracle(sd, z, n);
    const BigComplex& ex = o.values.back();
    BranchCalibration out;
    out.error_as_oriented = abs(pred / ex - BigComplex(1L));
    out.error_flipped = abs(-pred / ex - BigComplex(1L));
    out.orientation_confirmed = out.error_as_oriented < out.error_flipped;
    return out;
}

double l1_discrepancy(const DerivSeq& seq, std::size_t i, const Rectangle& K, int n, int grid, int* replaced) {
    const StructureData& sd = seq.structure;
    if (grid < 1) fail(ErrorKind::InvalidInput, "grid must be positive");
    if (seq.degs.at(static_cast<std::size_t>(n)) <= 0) fail(ErrorKind::Domain, "deg B_n must be positive");
    const CPoly& B = seq.B[static_cast<std::size_t>(n)];
    BigReal zero_tol = BigReal::pow2(-working_precision() / 2);
    std::vector<double> val(static_cast<std::size_t>(grid * grid), 0.0);
    std::vector<char> ok(val.size(), 1);
    double hx = (K.x1 - K.x0) / grid, hy = (K.y1 - K.y0) / grid;
    for (int ix = 0; ix < grid; ++ix)
        for (int iy = 0; iy < grid; ++iy) {
            BigComplex z(K.x0 + (ix + 0.5) * hx, K.y0 + (iy + 0.5) * hy);
            std::size_t k = static_cast<std::size_t>(ix * grid + iy);
            BigComplex b = B.eval(z);
            if (abs(b) <= zero_tol * B.abs_eval(abs(z))) {
                ok[k] = 0;
                continue;
            }
            val[k] = std::abs((seq.L_tilde(n, z) - psi_i(sd, i, z)).to_double());
        }
    int rep = 0;
    for (int ix = 0; ix < grid; ++ix)
        for (int iy = 0; iy < grid; ++iy) {
            std::size_t k = static_cast<std::size_t>(ix * grid + iy);
            if (ok[k]) continue;
            double sum = 0.0;
            int cnt = 0;
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy) {
                    int jx = ix + dx, jy = iy + dy;
                    if (jx < 0 || jy < 0 || jx >= grid || jy >= grid) continue;
                    std::size_t j = static_cast<std::size_t>(jx * grid + jy);
                    if (!ok[j]) continue;
                    sum += val[j];
                    ++cnt;
                }
            val[k] = cnt > 0 ? sum / cnt : 0.0;
            ++rep;
        }
    if (replaced) *replaced += rep;
    double tot = 0.0;
    for (double v : val) tot += v;
    return tot * hx * hy;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::size_t k = x.size();
    if (k < 2 || y.size() != k) fail(ErrorKind::InvalidInput, "slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < k; ++j) {
        double lx = std::log(x[j]), ly = std::log(y[j]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double kk = static_cast<double>(k);
    return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

L1RateReport l1_rate_experiment(const DerivSeq& seq, std::size_t i, const Rectangle& K, const std::vector<int>& n_list,
                                int grid) {
    const StructureData& sd = seq.structure;
    if (K.x0 >= K.x1 || K.y0 >= K.y1) fail(ErrorKind::InvalidInput, "empty rectangle");
    for (double x : {K.x0, K.x1})
        for (double y : {K.y0, K.y1}) require_in_cell(sd, i, BigComplex(x, y));
    for (const auto& site : sd.sites) {
        double sx = site.location.re.to_double(), sy = site.location.im.to_double();
        if (sx >= K.x0 && sx <= K.x1 && sy >= K.y0 && sy <= K.y1) fail(ErrorKind::InvalidInput, "rectangle contains a singular site");
    }
    L1RateReport rep;
    rep.grid = grid;
    rep.n_list = n_list;
    std::vector<double> xs;
    for (int n : n_list) {
        if (n > seq.N()) fail(ErrorKind::InvalidInput, "n outside the computed sequence");
        rep.estimates.push_back(l1_discrepancy(seq, i, K, n, grid, &rep.replaced_points));
        xs.push_back(static_cast<double>(n));
    }
    if (n_list.size() >= 2) rep.slope = loglog_slope(xs, rep.estimates);
    return rep;
}

}  // namespace hxz
