#include <cmath>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "test_util.hpp"
#include "hxz/errors.hpp"
#include "hxz/localmodels.hpp"

using namespace hxz;

namespace {

QPoly q(std::initializer_list<long> v) {
    QPoly p;
    for (long x : v) p.emplace_back(x);
    return p;
}

bool same(QPoly a, QPoly b) {
    std::size_t n = std::max(a.size(), b.size());
    a.resize(n);
    b.resize(n);
    return a == b;
}

mpq_class ipow(long b, int e) {
    mpq_class r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

TEST_CASE("sheffer recurrence examples") {
    for (int m : {1, 2, 3})
        for (int a : {-3, 0, 2}) {
            ShefferFamily f = sheffer_seq(a, m, 1);
            CHECK(same(f.polys[0], q({1})));
            CHECK(same(f.polys[1], q({-a, -m})));
        }
    CHECK(same(sheffer_seq(-1, 1, 2).polys[2], q({2, -4, 1})));
    ShefferFamily f = sheffer_seq(-1, 2, 0);
    CHECK(f.polys.size() == 1);
    CHECK(f.beta_param == mpq_class(-1, 2));
    CHECK_THROWS_AS(sheffer_seq(0, 0, 3), Error);
}

TEST_CASE("recurrence equals explicit formula") {
    for (int a : {-3, -1, 0, 2})
        for (int m : {1, 2, 3}) {
            ShefferFamily f = sheffer_seq(a, m, 12);
            for (int n = 0; n <= 12; ++n) {
                const QPoly& p = f.polys[static_cast<std::size_t>(n)];
                CHECK(same(p, sheffer_explicit(a, m, n)));
                CHECK(qdegree(p) == n);
                CHECK(p.back() == ipow(-m, n));
            }
        }
}

TEST_CASE("laguerre reduction at m = 1") {
    CHECK(same(scaled_laguerre(0, 1), q({1, -1})));
    CHECK(same(scaled_laguerre(0, 2), q({2, -4, 1})));
    for (int n = 0; n <= 20; ++n) CHECK(laguerre_check(-1, n).exact);
    for (int a : {-3, 0, 2}) CHECK(laguerre_check(a, 9).exact);
}

TEST_CASE("m-orthogonality pattern") {
    CHECK(morth_moment(-1, 1, 0, 0, 0) == 1);
    for (int m : {1, 2, 3}) CHECK(morth_moment(-2, m, 0, 0, 1) == 0);
    MomentTable t = moment_table(-2, 2, 4, 14);
    for (const auto& lam : t.lambda_r) CHECK(lam > 0);
    for (int j = 0; j <= 1; ++j)
        for (int nu = 0; nu <= 4; ++nu)
            for (int n = 0; n <= 14; ++n) {
                const mpq_class& v = t.entries.at({j, nu, n});
                if (n >= 2 * nu + j + 1) CHECK(v == 0);
                if (n == 2 * nu + j) CHECK(v != 0);
            }
    CHECK(morth_moment(-2, 2, 1, 2, 5) == t.entries.at({1, 2, 5}));
    CHECK_THROWS_AS(morth_moment(1, 2, 0, 0, 3), Error);
    CHECK_THROWS_AS(morth_moment(-2, 2, 2, 0, 3), Error);
}

TEST_CASE("moment generating identity") {
    for (int m : {1, 2, 3})
        for (int a : {-1, -2, -5})
            for (int j = 0; j < m; ++j)
                for (int nu = 0; nu <= 3; ++nu) {
                    int deg = m * nu + j;
                    QPoly sum = moment_generating_sum(a, m, j, nu, deg + 4);
                    QPoly closed = moment_generating_closed(a, m, j, nu);
                    CHECK(same(sum, closed));
                    CHECK(qdegree(closed) == deg);
                    mpq_class lam(j - a, m);
                    lam.canonicalize();
                    mpq_class expect = pochhammer(lam, nu);
                    mpz_class jf;
                    mpz_fac_ui(jf.get_mpz_t(), static_cast<unsigned long>(j));
                    expect /= mpq_class(jf);
                    if ((m * nu) % 2) expect = -expect;
                    CHECK(closed.back() == expect);
                }
}

TEST_CASE("order of vanishing at the origin") {
    for (int n = 4; n <= 12; ++n) {
        CHECK(ord0(3, 2, n) == 2);
        CHECK(ord0_exact(sheffer_seq(3, 2, n).polys.back()) == 2);
    }
    for (int n = 0; n <= 10; ++n) CHECK(ord0_exact(sheffer_seq(-3, 2, n).polys.back()) == 0);
    CHECK(ord0(-3, 2, 7) == 0);
    for (int n = 1; n <= 10; ++n) CHECK(ord0_exact(sheffer_seq(0, 1, n).polys.back()) == 1);
    for (int a : {0, 1, 4, 5})
        for (int m : {1, 2, 3})
            for (int n = a + 1; n <= a + 6; ++n) CHECK(ord0(a, m, n) == ord0_exact(sheffer_seq(a, m, n).polys.back()));
    CHECK_THROWS_AS(ord0(3, 2, 2), Error);
}

TEST_CASE("generating function") {
    double tol = std::pow(10.0, -working_precision() / 3.0);
    for (int m : {1, 2, 3})
        for (int a : {-3, 0, 2}) {
            CHECK(generating_function_check(a, m, 30, BigComplex(0.7, -0.2), BigComplex(0.3, 0.1)).to_double() <= tol);
            CHECK(generating_function_check(a, m, 20, BigComplex(-1.5, 0.0), BigComplex(-0.2, 0.0)).to_double() <= tol);
        }
}

TEST_CASE("v branch") {
    BigComplex v = v_branch(1, BigComplex(-1L));
    CHECK(abs(v - BigComplex((std::sqrt(5.0) - 1.0) / 2.0)) <= BigReal(1e-15));
    for (int m : {1, 2, 3}) {
        for (BigComplex z : {BigComplex(-1L), BigComplex(2.0, 1.5), BigComplex(10.0, 0.0), BigComplex(0.5, -0.01),
                             BigComplex(-1e-3, 1e-3)}) {
            BigComplex w = v_branch(m, z);
            BigComplex res = pow(w, m + 1) - BigComplex(static_cast<long>(m)) * z * (w - BigComplex(1L));
            CHECK(abs(res) <= BigReal(1e-20));
        }
        BigComplex zbig(0.0, 1e6);
        BigComplex w = v_branch(m, zbig);
        BigComplex lead = BigComplex(1L) + BigComplex(1L) / (BigComplex(static_cast<long>(m)) * zbig);
        CHECK(abs(w - lead).to_double() <= 1e-11);
    }
    CHECK_THROWS_AS(v_branch(1, BigComplex(2.0, 0.0)), Error);
    CHECK_THROWS_AS(v_branch(2, BigComplex(1.0, 1e-10)), Error);
}

TEST_CASE("microscopic limit measure") {
    CHECK(c_m(1) == 4);
    CHECK(c_m(2) == mpq_class(27, 8));
    for (int m : {1, 2, 3}) {
        MicroLimit ml = micro_limit(m);
        CHECK(std::abs(ml.total - 1.0) <= 1e-8);
        CHECK(ml.cdf_at(0.0) == 0.0);
        CHECK(std::abs(ml.cdf_at(ml.cm.get_d()) - 1.0) <= 1e-10);
        // no atom at 0: the CDF vanishes like delta^(1/(m+1))
        double r = ml.cdf_at(1e-4) / ml.cdf_at(1e-7);
        CHECK(std::abs(std::log(r) / std::log(1e3) - 1.0 / (m + 1)) <= 0.01);
        CHECK(ml.cdf_at(1e-12) <= 1e-2);
        CHECK(std::abs(ml.zeta.back() - ml.cm.get_d()) <= 1e-12);
        CHECK(std::is_sorted(ml.zeta.begin(), ml.zeta.end()));
        double prev = -1.0;
        for (int k = 200; k >= 1; --k) {
            double z = mu_zeta(m, M_PI / (m + 1) * k / 201.0);
            CHECK(z > prev);
            prev = z;
        }
    }
    CHECK(micro_limit(1).cdf_at(1e-4) <= 1e-2);
    double phi0 = M_PI / 2.0;
    for (int k = 1; k <= 20; ++k) {
        double phi = phi0 * k / 21.0;
        double z = mu_zeta(1, phi);
        CHECK(std::abs(z - 4.0 * std::cos(phi) * std::cos(phi)) <= 1e-12);
        CHECK(std::abs(mu_density(1, phi) - std::tan(phi) / (2.0 * M_PI)) <= 1e-12);
        CHECK(std::abs(mp_density(z) - std::tan(phi) / (2.0 * M_PI)) <= 1e-12);
    }
    MicroLimit m1 = micro_limit(1);
    for (double z : {0.1, 1.0, 2.0, 3.5}) CHECK(std::abs(m1.cdf_at(z) - mp_cdf(z)) <= 1e-6);
}

TEST_CASE("Marchenko-Pastur density") {
    CHECK(std::abs(mp_density(2.0) - 1.0 / (2.0 * M_PI)) <= 1e-15);
    CHECK(mp_density(4.0) == 0.0);
    CHECK(mp_density(-1.0) == 0.0);
    boost::math::quadrature::tanh_sinh<double> ts;
    double total = ts.integrate([](double z) { return mp_density(z); }, 0.0, 4.0);
    CHECK(std::abs(total - 1.0) <= 1e-10);
}

TEST_CASE("rescaled zeros against the limit laws") {
    RescaledZeros rz = rescaled_empirical(-1, 1, 200);
    REQUIRE(rz.zeta.size() == 200);
    std::vector<double> s;
    for (const auto& z : rz.zeta) {
        CHECK(std::abs(z.im.to_double()) <= 1e-30);
        s.push_back(z.re.to_double());
    }
    CHECK(ks_distance(s, mp_cdf) <= 0.08);
    CHECK(std::abs(rz.measure.total.to_double() - 1.0) <= 1e-15);

    RescaledZeros r2 = rescaled_empirical(-1, 2, 100);
    MicroLimit ml = micro_limit(2);
    std::vector<double> s2;
    for (const auto& z : r2.zeta) s2.push_back(z.re.to_double());
    CHECK(*std::min_element(s2.begin(), s2.end()) >= -0.05);
    CHECK(*std::max_element(s2.begin(), s2.end()) <= 27.0 / 8.0 + 0.05);
    CHECK(ks_distance(s2, [&](double z) { return ml.cdf_at(z); }) <= 0.06);

    RescaledZeros r3 = rescaled_empirical(3, 2, 30);
    CHECK(r3.zeros_at_origin == 2);
    CHECK(r3.zeta.size() == 28);
}

TEST_CASE("pushforward is independent of the root of -lambda") {
    RescaledZeros rz = rescaled_empirical(-1, 3, 40);
    BigComplex lam(0.5, -1.25);
    EmpiricalMeasure a = pushforward(rz, lam, 0), b = pushforward(rz, lam, 1);
    REQUIRE(a.atoms.size() == b.atoms.size());
    CHECK(std::abs(a.total.to_double() - 1.0) <= 1e-15);
    for (const auto& x : a.atoms) {
        bool found = false;
        for (const auto& y : b.atoms)
            if (abs(x.location - y.location) <= BigReal(1e-40) * abs(x.location)) found = true;
        CHECK(found);
    }
    // the atoms solve w^m = -lambda / zeta
    const auto& w = a.atoms.front().location;
    BigComplex zeta = rz.zeta.front();
    CHECK(abs(pow(w, 3) * zeta + lam) <= BigReal(1e-40));
}

TEST_CASE("ks distance") {
    CHECK(std::abs(ks_distance({0.5}, [](double x) { return x; }) - 0.5) < 1e-15);
    CHECK(ks_distance({0.25, 0.75}, [](double x) { return x; }) == doctest::Approx(0.25));
    CHECK_THROWS_AS(ks_distance({}, [](double x) { return x; }), Error);
}
