#include <random>

#include "test_util.hpp"
#include "hxz/errors.hpp"
#include "hxz/hyperfunc.hpp"

using namespace hxz;

namespace {

CPoly c(std::initializer_list<double> re) {
    std::vector<BigComplex> v;
    for (double x : re) v.emplace_back(x);
    return CPoly(v);
}

bool close(const BigComplex& a, const BigComplex& b, double tol = 1e-60) {
    return abs(a - b) <= BigReal(tol) * max(BigReal(1L), abs(b));
}

bool same_poly(const CPoly& a, const CPoly& b, double tol = 1e-60) {
    return a.degree() == b.degree() && relative_distance(a, b) <= BigReal(tol);
}

HyperExpSpec exp_inv_z() { return {c({1}), c({1}), c({1}), c({0, 1})}; }
HyperExpSpec exp_inv_z_over_z_minus_1() { return {c({1}), c({-1, 1}), c({1}), c({0, 1})}; }

HyperExpSpec fig2() {
    BigComplex c1(-2.0, 1.5), c2(1.0, -1.0);
    BigComplex l2(1.5, -0.5), l1(-1.0, -1.0);
    CPoly t1 = CPoly::linear_factor(c1);
    CPoly T = t1 * t1 * CPoly::linear_factor(c2);
    CPoly S = CPoly::constant(l2) * CPoly::linear_factor(c2) + CPoly::constant(l1) * t1 * t1;
    CPoly Q = CPoly::from_roots({BigComplex(-2.5), BigComplex(0.0, 2.0), BigComplex(2.5)});
    return {c({1}), Q, S, T};
}

}  // namespace

TEST_CASE("normalize examples") {
    HyperExpSpec a = normalize({c({2}), c({1}), CPoly{}, c({0, 1})});
    CHECK(same_poly(a.P, c({1})));
    CHECK(same_poly(a.Q, c({1})));
    CHECK(same_poly(a.S, CPoly{BigComplex(0L), BigComplex(log(BigReal(2L)))}));
    CHECK(same_poly(a.T, c({0, 1})));

    HyperExpSpec b = normalize(exp_inv_z());
    CHECK(same_poly(b.S, c({1})));
    CHECK(same_poly(b.T, c({0, 1})));

    HyperExpSpec d = normalize({c({0, 3}), c({1}), c({1}), c({0, 2})});
    CHECK(same_poly(d.T, c({0, 1})));
    CHECK(same_poly(d.S, c({0.5})));
    CHECK(same_poly(d.P, c({0, 3})));

    CHECK_THROWS_AS(normalize({c({1}), c({1}), c({1}), c({3})}), Error);
    CHECK_THROWS_AS(normalize({c({-1, 1}), c({-1, 0, 1}), c({1}), c({0, 1})}), Error);
    CHECK_THROWS_AS(normalize({c({1}), c({1}), c({0, 1}), c({0, 1})}), Error);
}

TEST_CASE("analyze e^{1/z}") {
    StructureData sd = analyze(exp_inv_z());
    CHECK(same_poly(sd.W, c({0, 0, 1})));
    CHECK(sd.d == 2);
    CHECK(sd.kappa == 1);
    CHECK(sd.h == 0);
    CHECK(sd.sigma.is_zero());
    CHECK(same_poly(sd.U, c({-1})));
    REQUIRE(sd.J.has_value());
    CHECK(*sd.J == 1);
    CHECK(close(*sd.G_minus_J, BigComplex(1L)));
    REQUIRE(sd.sites.size() == 1);
    CHECK(sd.sites[0].kind == SiteKind::Essential);
    CHECK(sd.sites[0].m == 1);
    CHECK(sd.sites[0].varpi() == 2);
    CHECK(close(sd.E_reg(0), BigComplex(0L)));
}

TEST_CASE("analyze e^{1/z}/(z-1)") {
    StructureData sd = analyze(exp_inv_z_over_z_minus_1());
    CHECK(same_poly(sd.W, c({0, 0, -1, 1})));
    CHECK(sd.d == 3);
    CHECK(sd.kappa == 2);
    CHECK(same_poly(sd.U, c({1, -1, -1})));
    CHECK_FALSE(sd.J.has_value());
    REQUIRE(sd.sites.size() == 2);
    CHECK(sd.sites[1].kind == SiteKind::Pole);
    CHECK(sd.sites[1].ell == 1);
    CHECK(sd.sites[1].beta == -1);
    CHECK(close(sd.E_reg(1), BigComplex(1L)));
}

TEST_CASE("analyze the two-site example") {
    StructureData sd = analyze(fig2());
    CHECK(sd.d == 8);
    CHECK(sd.kappa == 7);
    CHECK(sd.h == 0);
    CHECK(sd.t_check == 2);
    CHECK(sd.q_check == 3);
    REQUIRE(sd.sites.size() == 5);
    CHECK(sd.sites[0].m == 2);
    CHECK(close(sd.sites[0].location, BigComplex(-2.0, 1.5), 1e-60));
    CHECK(close(sd.sites[0].principal->lambda(2), BigComplex(1.5, -0.5), 1e-50));
    CHECK(sd.sites[1].m == 1);
}

TEST_CASE("polynomial part and J transition") {
    StructureData sd = analyze({c({1}), c({1}), c({1, 0, 1}), c({0, 1})});
    CHECK(sd.h == 1);
    CHECK(sd.kappa == 2);
    CHECK(sd.sigma.is_zero());
    CHECK(sd.U.degree() == sd.kappa);
    CHECK(close(sd.U.lc(), BigComplex(1L)));
    CHECK_FALSE(sd.J.has_value());

    StructureData t = analyze({c({1, -2, 1}), c({1}), c({1}), c({0, 1})});
    REQUIRE(t.J.has_value());
    CHECK(*t.J == 1);
    CHECK(close(*t.G_minus_J, BigComplex(1.0) / BigComplex(6.0)));
}

TEST_CASE("U at essential sites matches the local factorization") {
    for (const HyperExpSpec& spec : {exp_inv_z(), exp_inv_z_over_z_minus_1(), fig2()}) {
        StructureData sd = analyze(spec);
        int dsum = sd.q_check;
        for (std::size_t i : sd.essential_indices()) {
            const SiteRecord& s = sd.sites[i];
            dsum += s.m + 1;
            BigComplex expect = -BigComplex(static_cast<long>(s.m)) * s.principal->lambda(s.m) * sd.W_tilde(i, s.location);
            BigComplex u = sd.U.eval(s.location);
            CHECK_FALSE(u.is_zero());
            CHECK(close(u, expect, 1e-40));
        }
        CHECK(dsum == sd.d);
    }
}

TEST_CASE("reconstruct examples") {
    Reconstruction a = reconstruct_from_log_derivative(RationalFunction(c({1}), c({0, 1})));
    REQUIRE(a.exponents.size() == 1);
    CHECK(a.exponents[0].second == 1);
    CHECK(a.H.num.is_zero());

    Reconstruction b = reconstruct_from_log_derivative(RationalFunction(c({-1}), c({0, 0, 1})));
    CHECK(b.exponents.empty());
    CHECK(close(b.H.eval(BigComplex(0.5, 0.25)), BigComplex(1L) / BigComplex(0.5, 0.25)));

    Reconstruction d = reconstruct_from_log_derivative(log_derivative(exp_inv_z_over_z_minus_1()));
    REQUIRE(d.exponents.size() == 1);
    CHECK(close(d.exponents[0].first, BigComplex(1L), 1e-50));
    CHECK(d.exponents[0].second == -1);
    BigComplex z(0.3, -0.7);
    CHECK(close(d.H.eval(z) - d.H.eval(BigComplex(2L)), BigComplex(1L) / z - BigComplex(0.5), 1e-40));

    CHECK_THROWS_AS(reconstruct_from_log_derivative(RationalFunction(c({0.5}), c({0, 1}))), Error);
}

TEST_CASE("reconstruction round trip on random specs") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> di(-3, 3);
    auto rp = [&](int deg) {
        std::vector<BigComplex> v;
        for (int k = 0; k <= deg; ++k) v.emplace_back(di(rng), di(rng));
        if (v.back().is_zero()) v.back() = BigComplex(1L);
        return CPoly(v);
    };
    int done = 0;
    while (done < 6) {
        HyperExpSpec spec{rp(2), rp(1), rp(1), rp(2)};
        if (spec.T.degree() < 1 || spec.P.is_zero() || spec.Q.is_zero() || spec.S.is_zero()) continue;
        if (poly_gcd(spec.P, spec.Q).degree() > 0 || poly_gcd(spec.S, spec.T).degree() > 0) continue;
        HyperExpSpec f = normalize(spec);
        Reconstruction rec = reconstruct_from_log_derivative(log_derivative(f));
        BigReal tol = pow(BigReal(10L), -working_precision() / 8);
        for (const auto& [a, n] : rec.exponents) {
            int ord = zero_order(f.P, a) - zero_order(f.Q, a);
            CHECK(ord == n);
        }
        int total = 0;
        for (const auto& e : rec.exponents) total += e.second;
        CHECK(total == f.P.degree() - f.Q.degree());
        RationalFunction Hd = rec.H.derivative();
        RationalFunction Ed = RationalFunction(f.S, f.T).derivative();
        for (BigComplex z : {BigComplex(0.37, 1.9), BigComplex(-2.2, 0.4)}) {
            BigComplex a = Hd.eval(z), b = Ed.eval(z);
            CHECK(abs(a - b) <= tol * max(BigReal(1L), abs(b)));
        }
        ++done;
    }
}
