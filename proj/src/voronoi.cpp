#include "hxz/voronoi.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hxz/errors.hpp"

namespace hxz {

namespace {

// Re(a * conj(b))
BigReal dot(const BigComplex& a, const BigComplex& b) { return a.re * b.re + a.im * b.im; }

BigReal edge_antiderivative(const Edge& e, const BigReal& t) { return atan(t / e.delta); }

std::complex<double> cd(const BigComplex& z) { return z.to_cdouble(); }

}  // namespace

std::size_t VoronoiDiagram::nearest(const BigComplex& z) const {
    std::size_t best = 0;
    BigReal bd = BigReal::infinity(1);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        BigReal dist = abs(z - sites[i].location);
        if (dist < bd) {
            bd = dist;
            best = i;
        }
    }
    return best;
}

BigReal VoronoiDiagram::boundary_gap(const BigComplex& z) const {
    BigReal d1 = BigReal::infinity(1), d2 = BigReal::infinity(1);
    for (const auto& s : sites) {
        BigReal dist = abs(z - s.location);
        if (dist < d1) {
            d2 = d1;
            d1 = dist;
        } else if (dist < d2) {
            d2 = dist;
        }
    }
    return d2 - d1;
}

VoronoiDiagram build_diagram(const std::vector<SiteRecord>& sites) {
    if (sites.empty()) fail(ErrorKind::InvalidInput, "Voronoi diagram needs at least one site");
    VoronoiDiagram vd;
    vd.sites = sites;
    std::size_t N = sites.size();
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            if (same_site(sites[i].location, sites[j].location))
                fail(ErrorKind::InvalidInput, "duplicate Voronoi sites");
            vd.diameter = max(vd.diameter, abs(sites[i].location - sites[j].location));
        }
    BigReal scale = max(vd.diameter, BigReal(1L));
    BigReal eps = coincidence_radius() * scale;

    vd.cells.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        vd.cells[i].site = i;
        const BigComplex& a = sites[i].location;
        for (std::size_t k = 0; k < N; ++k) {
            if (k == i) continue;
            const BigComplex& b = sites[k].location;
            // |z-a|^2 <= |z-b|^2  <=>  2 Re(z conj(b-a)) <= |b|^2 - |a|^2
            BigComplex nrm = (b - a) * BigReal(2L);
            vd.cells[i].halfplanes.push_back(HalfPlane{nrm, norm(b) - norm(a), k});
        }
    }

    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i + 1; j < N; ++j) {
            const BigComplex& a = sites[i].location;
            const BigComplex& b = sites[j].location;
            Edge e;
            e.i = i;
            e.j = j;
            e.midpoint = (a + b) / BigReal(2L);
            BigComplex dv = b - a;
            BigReal len = abs(dv);
            e.delta = len / BigReal(2L);
            e.direction = BigComplex::i() * dv / len;
            e.t_lo = BigReal::infinity(-1);
            e.t_hi = BigReal::infinity(1);
            bool empty = false;
            for (const HalfPlane& hp : vd.cells[i].halfplanes) {
                if (hp.other == j) continue;
                BigReal g0 = dot(e.midpoint, hp.normal) - hp.offset;
                BigReal g1 = dot(e.direction, hp.normal);
                BigReal tiny = eps * abs(hp.normal);
                if (abs(g1) <= tiny) {
                    if (g0 > tiny * scale) empty = true;
                    continue;
                }
                BigReal t = -g0 / g1;
                if (g1 > BigReal(0L)) e.t_hi = min(e.t_hi, t);
                else e.t_lo = max(e.t_lo, t);
            }
            if (empty) continue;
            if (e.t_lo.is_finite() && e.t_hi.is_finite() && e.t_hi - e.t_lo <= eps) continue;
            if (!(e.t_lo < e.t_hi)) continue;
            vd.cells[i].edges.push_back(vd.edges.size());
            vd.cells[j].edges.push_back(vd.edges.size());
            vd.edges.push_back(std::move(e));
        }

    for (auto& cell : vd.cells) {
        const BigComplex& a = sites[cell.site].location;
        std::vector<std::pair<double, BigComplex>> pts;
        bool bounded = !cell.edges.empty();
        auto add = [&](const BigComplex& p) {
            for (const auto& q : pts)
                if (abs(q.second - p) <= eps) return;
            BigComplex d = p - a;
            pts.emplace_back(atan2(d.im, d.re).to_double(), p);
        };
        for (std::size_t ei : cell.edges) {
            const Edge& e = vd.edges[ei];
            if (e.t_lo.is_finite()) add(e.point(e.t_lo));
            else bounded = false;
            if (e.t_hi.is_finite()) add(e.point(e.t_hi));
            else bounded = false;
        }
        std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& p : pts) cell.vertices.push_back(std::move(p.second));
        cell.bounded = bounded;
    }
    return vd;
}

BigReal rho(const VoronoiDiagram& diagram, const BigComplex& z) {
    BigReal best = BigReal::infinity(1);
    for (const auto& s : diagram.sites) best = min(best, abs(z - s.location));
    return best;
}

BigReal edge_mass(const Edge& e, int kappa, const BigReal& lo, const BigReal& hi) {
    BigReal span = edge_antiderivative(e, hi) - edge_antiderivative(e, lo);
    return span / (BigReal::pi() * BigReal(static_cast<long>(kappa)));
}

BigReal LimitMeasure::edge_density(std::size_t e, const BigComplex& z) const {
    const Edge& ed = edges.at(e).edge;
    const BigComplex& a = site_locations[ed.i];
    const BigComplex& b = site_locations[ed.j];
    BigReal two_pi_k = BigReal::pi() * BigReal(2L * kappa);
    return abs(a - b) / (two_pi_k * abs(z - a) * abs(z - b));
}

BigReal LimitMeasure::edge_cdf(std::size_t e, const BigReal& t) const {
    const Edge& ed = edges.at(e).edge;
    BigReal lo = edge_antiderivative(ed, ed.t_lo);
    BigReal hi = edge_antiderivative(ed, ed.t_hi);
    BigReal tc = max(ed.t_lo, min(ed.t_hi, t));
    return (edge_antiderivative(ed, tc) - lo) / (hi - lo);
}

BigReal LimitMeasure::disc_mass(const BigComplex& center, const BigReal& r) const {
    BigReal total;
    for (const auto& [site, mass] : atoms)
        if (abs(site_locations[site] - center) < r) total += mass;
    for (const auto& em : edges) {
        const Edge& e = em.edge;
        BigComplex w = e.midpoint - center;
        BigReal bq = dot(w, e.direction);
        BigReal disc = bq * bq - (norm(w) - r * r);
        if (disc.sign() <= 0) continue;
        BigReal sq = sqrt(disc);
        BigReal t1 = max(-bq - sq, e.t_lo);
        BigReal t2 = min(-bq + sq, e.t_hi);
        if (t1 < t2) total += edge_mass(e, kappa, t1, t2);
    }
    return total;
}

LimitMeasure limit_measure(const StructureData& sd, const VoronoiDiagram& diagram) {
    LimitMeasure lim;
    lim.kappa = sd.kappa;
    BigReal k(static_cast<long>(sd.kappa));
    for (const auto& s : diagram.sites) lim.site_locations.push_back(s.location);
    for (std::size_t i = 0; i < diagram.sites.size(); ++i)
        if (diagram.sites[i].kind == SiteKind::Essential) {
            BigReal mass = BigReal(static_cast<long>(diagram.sites[i].m)) / k;
            lim.atoms.emplace_back(i, mass);
            lim.total += mass;
        }
    for (const auto& e : diagram.edges) {
        BigReal mass = edge_mass(e, sd.kappa, e.t_lo, e.t_hi);
        lim.total += mass;
        lim.edges.push_back(EdgeMass{e, mass});
    }
    lim.point_at_infinity_mass = BigReal(static_cast<long>(sd.h)) / k;
    return lim;
}

BigReal psi_i(const StructureData& sd, std::size_t i, const BigComplex& z) {
    BigComplex w = sd.W.eval(z);
    BigReal dist = abs(z - sd.sites.at(i).location);
    if (w.is_zero() || dist.is_zero()) fail(ErrorKind::InvalidInput, "psi_i evaluated at a site");
    return (log(abs(w)) - log(dist) - sd.sigma) / BigReal(static_cast<long>(sd.kappa));
}

BigReal psi(const StructureData& sd, const VoronoiDiagram& diagram, const BigComplex& z) {
    if (sd.site_at(z)) fail(ErrorKind::InvalidInput, "psi evaluated at a site");
    BigComplex w = sd.W.eval(z);
    return (log(abs(w)) - log(rho(diagram, z)) - sd.sigma) / BigReal(static_cast<long>(sd.kappa));
}

BigComplex cauchy_transform(const StructureData& sd, const VoronoiDiagram& diagram, const BigComplex& z) {
    if (sd.site_at(z)) fail(ErrorKind::InvalidInput, "Cauchy transform evaluated at a site");
    BigReal tol = BigReal(1e-9) * max(diagram.diameter, BigReal(1L));
    if (diagram.sites.size() > 1 && diagram.boundary_gap(z) <= tol)
        fail(ErrorKind::Boundary, "point lies on the Voronoi diagram");
    std::size_t i = diagram.nearest(z);
    BigComplex acc;
    for (std::size_t j = 0; j < diagram.sites.size(); ++j) {
        long w = diagram.sites[j].varpi() - (j == i ? 1 : 0);
        if (w == 0) continue;
        acc += BigComplex(w) / (z - diagram.sites[j].location);
    }
    return acc / BigReal(static_cast<long>(sd.kappa));
}

std::complex<double> limit_cauchy_integral(const LimitMeasure& lim, std::complex<double> z) {
    std::complex<double> acc = 0.0;
    for (const auto& [site, mass] : lim.atoms) acc += mass.to_double() / (z - cd(lim.site_locations[site]));
    const double pk = M_PI * lim.kappa;
    for (const auto& em : lim.edges) {
        const Edge& e = em.edge;
        std::complex<double> m = cd(e.midpoint), u = cd(e.direction);
        double delta = e.delta.to_double();
        double th_lo = std::atan(e.t_lo.to_double() / delta);
        double th_hi = std::atan(e.t_hi.to_double() / delta);
        // t = delta tan(theta) turns the density into the constant 1/(pi kappa)
        auto part = [&](auto sel) {
            auto f = [&](double th) {
                double c = std::cos(th);
                if (std::abs(c) < 1e-300) return 0.0;
                std::complex<double> zeta = m + u * (delta * std::tan(th));
                return sel(1.0 / (pk * (z - zeta)));
            };
            return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, th_lo, th_hi, 15, 1e-13);
        };
        double re = part([](std::complex<double> v) { return v.real(); });
        double im = part([](std::complex<double> v) { return v.imag(); });
        acc += std::complex<double>(re, im);
    }
    return acc;
}

MeasureComparison compare_measures(const EmpiricalMeasure& emp, const LimitMeasure& lim,
                                   const VoronoiDiagram& diagram, const CompareOptions& opt) {
    MeasureComparison out;
    std::size_t N = diagram.sites.size();
    double diam = std::max(diagram.diameter.to_double(), 1.0);
    std::vector<std::complex<double>> sites;
    for (const auto& s : diagram.sites) sites.push_back(cd(s.location));
    std::vector<std::complex<double>> pts;
    std::vector<double> wts;
    for (const auto& a : emp.atoms) {
        pts.push_back(cd(a.location));
        wts.push_back(a.weight.to_double());
    }

    std::vector<double> radius(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        double nearest = diam;
        for (std::size_t j = 0; j < N; ++j)
            if (j != i) nearest = std::min(nearest, std::abs(sites[i] - sites[j]));
        radius[i] = opt.atom_radius > 0.0 ? opt.atom_radius : 0.45 * nearest;
    }
    for (const auto& [site, mass] : lim.atoms) {
        AtomComparison ac;
        ac.site = site;
        ac.radius = radius[site];
        ac.predicted = mass.to_double();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double dist = std::abs(pts[k] - sites[site]);
            if (dist < ac.radius) ac.empirical += wts[k];
            if (std::abs(dist - ac.radius) <= 1e-9 * ac.radius) ++ac.flagged;
        }
        out.atoms.push_back(ac);
    }

    double w = opt.corridor_width >= 0.0 ? opt.corridor_width : 1.5 / std::sqrt(std::max(opt.n, 1)) * diam;
    out.corridor_width = w;
    for (std::size_t ei = 0; ei < lim.edges.size(); ++ei) {
        const Edge& e = lim.edges[ei].edge;
        std::complex<double> m = cd(e.midpoint), u = cd(e.direction);
        double lo = e.t_lo.to_double(), hi = e.t_hi.to_double();
        EdgeComparison ec;
        ec.edge = ei;
        ec.predicted = lim.edges[ei].mass.to_double();
        std::vector<std::pair<double, double>> proj;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            bool in_atom = false;
            for (const auto& [site, mass] : lim.atoms)
                in_atom = in_atom || std::abs(pts[k] - sites[site]) < radius[site];
            if (in_atom) continue;
            std::complex<double> rel = (pts[k] - m) * std::conj(u);
            if (std::abs(rel.imag()) > w || rel.real() < lo || rel.real() > hi) continue;
            proj.emplace_back(rel.real(), wts[k]);
        }
        ec.count = static_cast<int>(proj.size());
        if (!proj.empty() && w > 0.0) {
            std::sort(proj.begin(), proj.end());
            double tot = 0.0;
            for (const auto& p : proj) tot += p.second;
            ec.corridor_mass = tot;
            double cum = 0.0, ks = 0.0;
            for (const auto& p : proj) {
                double F = lim.edge_cdf(ei, BigReal(p.first)).to_double();
                ks = std::max(ks, std::abs(F - cum / tot));
                cum += p.second;
                ks = std::max(ks, std::abs(F - cum / tot));
            }
            ec.ks = ks;
        }
        out.edges.push_back(ec);
    }

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : sites) {
        xmin = std::min(xmin, s.real());
        xmax = std::max(xmax, s.real());
        ymin = std::min(ymin, s.imag());
        ymax = std::max(ymax, s.imag());
    }
    xmin -= diam / 2;
    xmax += diam / 2;
    ymin -= diam / 2;
    ymax += diam / 2;
    for (int gx = 0; gx < 9; ++gx)
        for (int gy = 0; gy < 9; ++gy) {
            std::complex<double> c(xmin + (xmax - xmin) * gx / 8.0, ymin + (ymax - ymin) * gy / 8.0);
            for (double rf : {0.125, 0.25, 0.5}) {
                double r = rf * diam;
                double e = 0.0;
                for (std::size_t k = 0; k < pts.size(); ++k)
                    if (std::abs(pts[k] - c) < r) e += wts[k];
                double l = lim.disc_mass(BigComplex(c), BigReal(r)).to_double();
                out.global_discrepancy = std::max(out.global_discrepancy, std::abs(e - l));
            }
        }
    return out;
}

}  // namespace hxz
