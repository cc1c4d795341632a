#include <random>

#include "test_util.hpp"
#include "hxz/errors.hpp"
#include "hxz/voronoi.hpp"

using namespace hxz;

namespace {

CPoly c(std::initializer_list<double> re) {
    std::vector<BigComplex> v;
    for (double x : re) v.emplace_back(x);
    return CPoly(v);
}

SiteRecord site(double re, double im, int m = 0) {
    SiteRecord s;
    s.location = BigComplex(re, im);
    s.kind = m > 0 ? SiteKind::Essential : SiteKind::Pole;
    s.m = m;
    s.ell = m > 0 ? 0 : 1;
    return s;
}

HyperExpSpec fig2() {
    BigComplex c1(-2.0, 1.5), c2(1.0, -1.0);
    BigComplex l2(1.5, -0.5), l1(-1.0, -1.0);
    CPoly t1 = CPoly::linear_factor(c1);
    CPoly T = t1 * t1 * CPoly::linear_factor(c2);
    CPoly S = CPoly::constant(l2) * CPoly::linear_factor(c2) + CPoly::constant(l1) * t1 * t1;
    CPoly Q = CPoly::from_roots({BigComplex(-2.5), BigComplex(0.0, 2.0), BigComplex(2.5)});
    return {c({1}), Q, S, T};
}

bool near(const BigReal& a, double b, double tol) { return abs(a - BigReal(b)) <= BigReal(tol); }

}  // namespace

TEST_CASE("diagram examples") {
    VoronoiDiagram two = build_diagram({site(0, 0), site(1, 0)});
    REQUIRE(two.edges.size() == 1);
    const Edge& e = two.edges[0];
    CHECK(near(e.midpoint.re, 0.5, 1e-60));
    CHECK(near(e.delta, 0.5, 1e-60));
    CHECK(e.t_lo.is_inf());
    CHECK(e.t_hi.is_inf());
    CHECK(abs(e.direction.re) <= BigReal(1e-60));

    VoronoiDiagram three = build_diagram({site(0, 0), site(1, 0), site(0, 1)});
    REQUIRE(three.edges.size() == 3);
    BigComplex cc(0.5, 0.5);
    for (const auto& ed : three.edges) {
        bool hits = (ed.t_lo.is_finite() && abs(ed.point(ed.t_lo) - cc) <= BigReal(1e-50)) ||
                    (ed.t_hi.is_finite() && abs(ed.point(ed.t_hi) - cc) <= BigReal(1e-50));
        CHECK(hits);
        BigComplex z = ed.point(BigReal(0.37) + (ed.t_lo.is_finite() ? ed.t_lo : ed.t_hi - BigReal(1L)));
        CHECK(abs(abs(z - three.sites[ed.i].location) - abs(z - three.sites[ed.j].location)) <= BigReal(1e-50));
    }

    VoronoiDiagram one = build_diagram({site(0, 0, 1)});
    CHECK(one.edges.empty());
    CHECK_THROWS_AS(build_diagram({site(0, 0), site(0, 0)}), Error);
}

TEST_CASE("rho examples") {
    VoronoiDiagram two = build_diagram({site(0, 0), site(1, 0)});
    CHECK(near(rho(two, BigComplex(0.2)), 0.2, 1e-60));
    StructureData sd = analyze(fig2());
    VoronoiDiagram vd = build_diagram(sd.sites);
    BigReal best = BigReal::infinity(1);
    for (const auto& s : sd.sites) best = min(best, abs(s.location));
    CHECK(rho(vd, BigComplex(0L)) == best);
}

TEST_CASE("limit measure masses") {
    StructureData a = analyze({c({1}), c({-1, 1}), c({1}), c({0, 1})});
    LimitMeasure la = limit_measure(a, build_diagram(a.sites));
    REQUIRE(la.atoms.size() == 1);
    CHECK(near(la.atoms[0].second, 0.5, 1e-60));
    REQUIRE(la.edges.size() == 1);
    CHECK(near(la.edges[0].mass, 0.5, 1e-60));
    CHECK(near(la.total, 1.0, 1e-12));

    StructureData f = analyze(fig2());
    LimitMeasure lf = limit_measure(f, build_diagram(f.sites));
    REQUIRE(lf.atoms.size() == 2);
    CHECK(abs(lf.atoms[0].second - BigReal(2L) / BigReal(7L)) <= BigReal(1e-60));
    CHECK(abs(lf.atoms[1].second - BigReal(1L) / BigReal(7L)) <= BigReal(1e-60));
    BigReal edges;
    for (const auto& e : lf.edges) edges += e.mass;
    CHECK(near(edges, 4.0 / 7.0, 1e-12));
    CHECK(near(lf.total, 1.0, 1e-12));

    StructureData h = analyze({c({1}), c({1}), c({1, 0, 1}), c({0, 1})});
    LimitMeasure lh = limit_measure(h, build_diagram(h.sites));
    CHECK(near(lh.point_at_infinity_mass, 0.5, 1e-60));
}

TEST_CASE("mass identity on random site sets") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> mm(0, 3);
    for (int trial = 0; trial < 10; ++trial) {
        int N = 2 + trial % 6;
        std::vector<BigComplex> ess, poles;
        std::vector<int> ms;
        for (int k = 0; k < N; ++k) {
            int m = k == 0 ? 1 : mm(rng);
            BigComplex z(u(rng), u(rng));
            if (m > 0) {
                ess.push_back(z);
                ms.push_back(m);
            } else {
                poles.push_back(z);
            }
        }
        CPoly T = CPoly::constant(BigComplex(1L));
        for (std::size_t k = 0; k < ess.size(); ++k)
            for (int r = 0; r < ms[k]; ++r) T = T * CPoly::linear_factor(ess[k]);
        CPoly Q = CPoly::from_roots(poles);
        StructureData sd = analyze({c({1}), Q, c({1}), T});
        LimitMeasure lim = limit_measure(sd, build_diagram(sd.sites));
        BigReal expect = BigReal(static_cast<long>(sd.d - 1)) / BigReal(static_cast<long>(sd.kappa));
        CHECK(abs(lim.total - expect) <= BigReal(1e-12));
    }
}

TEST_CASE("edge density is symmetric and integrates to the closed form") {
    StructureData f = analyze(fig2());
    LimitMeasure lim = limit_measure(f, build_diagram(f.sites));
    for (std::size_t e = 0; e < lim.edges.size(); ++e) {
        const Edge& ed = lim.edges[e].edge;
        BigReal t = ed.t_lo.is_finite() ? ed.t_lo + BigReal(0.1) : ed.t_hi - BigReal(0.1);
        BigComplex z = ed.point(t);
        BigReal dens = lim.edge_density(e, z);
        BigReal expect = BigReal(1L) / (BigReal::pi() * BigReal(7L)) * ed.delta / (ed.delta * ed.delta + t * t);
        CHECK(abs(dens - expect) <= BigReal(1e-50));
    }
}

TEST_CASE("psi examples and max property") {
    StructureData sd = analyze({c({1}), c({-1, 1}), c({1}), c({0, 1})});
    VoronoiDiagram vd = build_diagram(sd.sites);
    CHECK(near(psi(sd, vd, BigComplex(-1L)), std::log(2.0) / 2.0, 1e-15));
    BigComplex on_edge(0.5, 0.7);
    CHECK(abs(psi_i(sd, 0, on_edge) - psi_i(sd, 1, on_edge)) <= BigReal(1e-60));
    StructureData f = analyze(fig2());
    VoronoiDiagram vf = build_diagram(f.sites);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int k = 0; k < 30; ++k) {
        BigComplex z(u(rng), u(rng));
        BigReal best = BigReal::infinity(-1);
        for (std::size_t i = 0; i < f.sites.size(); ++i) best = max(best, psi_i(f, i, z));
        CHECK(abs(psi(f, vf, z) - best) <= BigReal(1e-60));
    }
    CHECK_THROWS_AS(psi(sd, vd, BigComplex(0L)), Error);
    StructureData h = analyze({c({1}), c({1}), c({1, 0, 1}), c({0, 1})});
    CHECK(h.sigma.is_zero());
}

TEST_CASE("Cauchy transform examples and finite-difference check") {
    StructureData sd = analyze({c({1}), c({-1, 1}), c({1}), c({0, 1})});
    VoronoiDiagram vd = build_diagram(sd.sites);
    BigComplex v = cauchy_transform(sd, vd, BigComplex(-1L));
    CHECK(abs(v - BigComplex(-0.75)) <= BigReal(1e-60));
    CHECK_THROWS_AS(cauchy_transform(sd, vd, BigComplex(0.5, 3.0)), Error);

    StructureData e = analyze({c({1}), c({1}), c({1}), c({0, 1})});
    BigComplex z(3.0, -2.0);
    CHECK(abs(cauchy_transform(e, build_diagram(e.sites), z) - BigComplex(1L) / z) <= BigReal(1e-60));

    BigComplex far(1e8, 1.0);
    BigComplex zc = far * cauchy_transform(sd, vd, far);
    CHECK(abs(zc - BigComplex(1L)) <= BigReal(1e-6));

    StructureData f = analyze(fig2());
    VoronoiDiagram vf = build_diagram(f.sites);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    int done = 0;
    BigReal hstep(1e-6);
    while (done < 20) {
        BigComplex p(u(rng), u(rng));
        if (vf.boundary_gap(p) < BigReal(0.05) || f.rho(p) < BigReal(0.05)) continue;
        BigReal dx = (psi(f, vf, p + BigComplex(hstep)) - psi(f, vf, p - BigComplex(hstep))) / (hstep * BigReal(2L));
        BigReal dy = (psi(f, vf, p + BigComplex(BigReal(0L), hstep)) - psi(f, vf, p - BigComplex(BigReal(0L), hstep))) /
                     (hstep * BigReal(2L));
        BigComplex fd(dx, -dy);
        CHECK(abs(fd - cauchy_transform(f, vf, p)) <= BigReal(1e-4));
        ++done;
    }
}

TEST_CASE("Cauchy integral of the limit measure matches the closed form") {
    for (const HyperExpSpec& spec : {HyperExpSpec{c({1}), c({-1, 1}), c({1}), c({0, 1})}, fig2()}) {
        StructureData f = analyze(spec);
        VoronoiDiagram vf = build_diagram(f.sites);
        LimitMeasure lim = limit_measure(f, vf);
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        int done = 0;
        while (done < 8) {
            BigComplex p(u(rng), u(rng));
            if (vf.boundary_gap(p) < BigReal(0.2) || f.rho(p) < BigReal(0.1)) continue;
            std::complex<double> num = limit_cauchy_integral(lim, p.to_cdouble());
            std::complex<double> exact = cauchy_transform(f, vf, p).to_cdouble();
            CHECK(std::abs(num - exact) <= 1e-8);
            ++done;
        }
    }
}

TEST_CASE("compare_measures statistics") {
    StructureData sd = analyze({c({1}), c({-1, 1}), c({1}), c({0, 1})});
    VoronoiDiagram vd = build_diagram(sd.sites);
    LimitMeasure lim = limit_measure(sd, vd);
    // quantile sample of the edge law plus an exact atom
    EmpiricalMeasure emp;
    int n = 400;
    const Edge& e = lim.edges[0].edge;
    for (int k = 0; k < n; ++k) {
        double q = (k + 0.5) / n;
        BigReal t = e.delta * tan(BigReal::pi() * (BigReal(q) - BigReal(0.5)));
        emp.atoms.push_back({e.point(t), BigReal(0.5 / n)});
    }
    emp.atoms.push_back({BigComplex(0L), BigReal(0.5)});
    CompareOptions opt;
    opt.corridor_width = 0.1;
    MeasureComparison cmp = compare_measures(emp, lim, vd, opt);
    REQUIRE(cmp.edges.size() == 1);
    REQUIRE(cmp.edges[0].ks.has_value());
    CHECK(*cmp.edges[0].ks <= 1.0 / n + 1e-12);
    REQUIRE(cmp.atoms.size() == 1);
    CHECK(cmp.atoms[0].empirical == doctest::Approx(0.5));
    opt.corridor_width = 0.0;
    MeasureComparison none = compare_measures(EmpiricalMeasure{}, lim, vd, opt);
    CHECK_FALSE(none.edges[0].ks.has_value());
}
