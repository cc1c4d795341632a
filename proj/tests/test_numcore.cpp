#include <random>

#include "test_util.hpp"
#include "hxz/cpoly.hpp"
#include "hxz/errors.hpp"

using namespace hxz;

namespace {

bool close(const BigComplex& a, const BigComplex& b, double tol = 1e-60) {
    return abs(a - b) <= BigReal(tol) * max(BigReal(1L), abs(b));
}

bool same_poly(const CPoly& a, const CPoly& b, double tol = 1e-60) {
    if (a.degree() != b.degree()) return false;
    return relative_distance(a, b) <= BigReal(tol);
}

CPoly random_poly(std::mt19937_64& rng, int deg) {
    std::uniform_int_distribution<int> d(-9, 9);
    std::vector<BigComplex> c;
    for (int k = 0; k <= deg; ++k) c.emplace_back(d(rng), d(rng));
    if (c.back().is_zero()) c.back() = BigComplex(1L);
    return CPoly(c);
}

}  // namespace

TEST_CASE("BigReal round-trips through decimal strings") {
    BigReal third = BigReal(1L) / BigReal(3L);
    std::string s = third.to_string();
    BigReal back = BigReal::parse(s, third.precision());
    CHECK(back == third);
    BigComplex z(BigReal::pi(), -exp(BigReal(1L)));
    BigComplex w = BigComplex::parse(z.re.to_string(), z.im.to_string());
    CHECK(w == z);
    CHECK(BigReal(0L).to_string() == "0");
    CHECK_THROWS_AS(BigReal::parse("1.2.3"), Error);
}

TEST_CASE("precision scope bounds and restores") {
    long before = working_precision();
    {
        PrecisionScope s(512);
        CHECK(working_precision() == 512);
        CHECK(BigReal(1L).precision() == 512);
    }
    CHECK(working_precision() == before);
    CHECK_THROWS_AS(PrecisionScope(32), Error);
    CHECK_THROWS_AS(PrecisionScope(8192), Error);
}

TEST_CASE("complex elementary functions") {
    BigComplex z(0.3, -1.7);
    CHECK(close(exp(log(z)), z));
    CHECK(close(sqrt(z) * sqrt(z), z));
    CHECK(close(pow(z, 5), z * z * z * z * z));
    CHECK(close(pow(root(z, 3), 3), z));
    BigComplex neg(-4.0, 0.0);
    CHECK(close(sqrt(neg), BigComplex(0.0, 2.0)));
    CHECK(close(sqrt(BigComplex(-4.0, -0.0)), BigComplex(0.0, 2.0)));
}

TEST_CASE("evaluation agrees with a direct power sum") {
    std::mt19937_64 rng(7);
    CPoly p = random_poly(rng, 12);
    BigComplex z(1.25, -0.5);
    BigComplex direct, zk(1L);
    for (const auto& c : p.coeffs()) {
        direct += c * zk;
        zk *= z;
    }
    CHECK(close(p.eval(z), direct, 1e-70));
    BigComplex v, dv;
    p.eval2(z, v, dv);
    CHECK(close(dv, p.derivative().eval(z), 1e-70));
}

TEST_CASE("gcd examples") {
    CPoly z2m1{BigComplex(-1L), BigComplex(0L), BigComplex(1L)};
    CPoly zm1{BigComplex(-1L), BigComplex(1L)};
    CHECK(same_poly(poly_gcd(z2m1, zm1), zm1));
    CPoly z{BigComplex(0L), BigComplex(1L)};
    CHECK(same_poly(poly_gcd(z, zm1), CPoly::constant(BigComplex(1L))));
    CPoly a = CPoly::linear_factor(BigComplex(0.0, 2.0)) * CPoly::linear_factor(BigComplex(-1L));
    CPoly b = CPoly::linear_factor(BigComplex(0.0, 2.0));
    CHECK(same_poly(poly_gcd(a, b), b));
    CHECK_THROWS_AS(poly_gcd(CPoly{}, CPoly{}), Error);
}

TEST_CASE("gcd of coprime integer polynomials is exactly 1") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        CPoly a = random_poly(rng, 4), b = random_poly(rng, 3);
        // random integer data is coprime with overwhelming probability; confirm via resultant-free check
        CPoly g = poly_gcd(a, b);
        CHECK(g.degree() == 0);
    }
}

TEST_CASE("squarefree part examples") {
    CPoly z2 = CPoly::monomial(2);
    CHECK(same_poly(squarefree_part(z2), CPoly::monomial(1)));
    CPoly one = CPoly::linear_factor(BigComplex(1L));
    CPoly mone = CPoly::linear_factor(BigComplex(-1L));
    CPoly p = one * one * one * mone;
    CHECK(same_poly(squarefree_part(p), one * mone, 1e-40));
    CPoly w = z2 * one;
    CHECK(same_poly(squarefree_part(w), CPoly::monomial(1) * one, 1e-40));
    CHECK_THROWS_AS(squarefree_part(CPoly{}), Error);
}

TEST_CASE("squarefree part has no repeated roots") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        CPoly base = random_poly(rng, 3);
        CPoly p = base * base * random_poly(rng, 2);
        CPoly r = squarefree_part(p);
        CHECK(r.degree() == 5);
        CHECK(poly_gcd(r, r.derivative()).degree() == 0);
    }
}

TEST_CASE("polydiv examples") {
    CPoly one = CPoly::constant(BigComplex(1L));
    CPoly z = CPoly::monomial(1);
    auto [h1, m1] = polydiv(one, z);
    CHECK(h1.is_zero());
    CHECK(same_poly(m1, one));
    CPoly s2{BigComplex(1L), BigComplex(0L), BigComplex(1L)};
    auto [h2, m2] = polydiv(s2, z);
    CHECK(same_poly(h2, z));
    CHECK(same_poly(m2, one));
    auto [h3, m3] = polydiv(CPoly::monomial(3), s2);
    CHECK(same_poly(h3, z));
    CHECK(same_poly(m3, -z));
    CHECK_THROWS_AS(polydiv(z, CPoly{}), Error);
}

TEST_CASE("polydiv round trip on random data") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dd(1, 10);
    for (int trial = 0; trial < 25; ++trial) {
        int dq = dd(rng);
        // divisors in this library are always monic (T, Q, W)
        CPoly q = random_poly(rng, dq).monic();
        CPoly p = random_poly(rng, dd(rng));
        CPoly r = dq > 1 ? random_poly(rng, dq - 1) : CPoly::constant(BigComplex(3L));
        CPoly s = p * q + r;
        auto [h, m] = polydiv(s, q);
        CHECK(relative_distance(h, p) <= precision_floor(16));
        // the remainder emerges from cancellation, so its error is measured against the dividend
        BigReal err;
        for (int k = 0; k <= std::max(m.degree(), r.degree()); ++k) err = max(err, abs(m.coeff(k) - r.coeff(k)));
        CHECK(err / s.max_abs_coeff() <= precision_floor(16));
    }
}

TEST_CASE("principal parts examples") {
    auto pp1 = principal_parts(CPoly::constant(BigComplex(1L)), CPoly::monomial(1), BigComplex(0L), 1);
    CHECK(close(pp1.lambda(1), BigComplex(1L)));

    CPoly den = CPoly::monomial(2) * CPoly::linear_factor(BigComplex(1L));
    auto pp2 = principal_parts(CPoly::constant(BigComplex(1L)), den, BigComplex(0L), 2);
    CHECK(close(pp2.lambda(2), BigComplex(-1L)));
    CHECK(close(pp2.lambda(1), BigComplex(-1L)));

    // E = ((3-i)/2)/(z+2-3i/2)^2 + (-1-i)/(z-1+i)
    BigComplex c1(-2.0, 1.5), c2(1.0, -1.0);
    BigComplex l2(1.5, -0.5), l1(-1.0, -1.0);
    CPoly t1 = CPoly::linear_factor(c1);
    CPoly T = t1 * t1 * CPoly::linear_factor(c2);
    CPoly S = CPoly::constant(l2) * CPoly::linear_factor(c2) + CPoly::constant(l1) * t1 * t1;
    auto pp3 = principal_parts(S, T, c1, 2);
    CHECK(close(pp3.lambda(2), l2, 1e-50));
    CHECK(close(pp3.lambda(1), BigComplex(0L), 1e-50));
    auto pp4 = principal_parts(S, T, c2, 1);
    CHECK(close(pp4.lambda(1), l1, 1e-50));
}

TEST_CASE("principal part removal leaves a finite limit") {
    std::mt19937_64 rng(9);
    CPoly num = random_poly(rng, 3);
    BigComplex pole(0.5, 0.25);
    CPoly den = CPoly::linear_factor(pole);
    den = den * den * den * random_poly(rng, 2);
    auto pp = principal_parts(num, den, pole, 3);
    RationalFunction r(num, den);
    BigComplex prev;
    for (int k = 4; k <= 12; k += 4) {
        BigComplex z = pole + BigComplex::polar(pow(BigReal(10L), -static_cast<long>(k)), BigReal(0.7));
        BigComplex g = r.eval(z) - pp.eval(z);
        if (k > 4) CHECK(abs(g - prev) <= BigReal(1e-2) * max(abs(prev), BigReal(1L)));
        prev = g;
    }
}

TEST_CASE("degenerate pole is rejected") {
    // num shares the zero of den at 0: the claimed order-1 pole does not exist
    CHECK_THROWS_AS(principal_parts(CPoly::monomial(1), CPoly::monomial(1), BigComplex(0L), 1), Error);
}

TEST_CASE("taylor shift and deflation") {
    std::mt19937_64 rng(13);
    CPoly p = random_poly(rng, 6);
    BigComplex a(0.3, 0.9);
    CPoly s = p.taylor_shift(a);
    BigComplex u(-0.2, 0.1);
    CHECK(close(s.eval(u), p.eval(a + u), 1e-70));
    CPoly f = CPoly::linear_factor(a);
    CPoly q = p * f * f;
    CHECK(zero_order(q, a) == 2);
    CHECK(relative_distance(deflate(q, a, 2), p) <= precision_floor(16));
}
