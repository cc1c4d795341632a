#include <random>

#include "test_util.hpp"
#include "hxz/derivseq.hpp"
#include "hxz/errors.hpp"

using namespace hxz;

namespace {

CPoly c(std::initializer_list<double> re) {
    std::vector<BigComplex> v;
    for (double x : re) v.emplace_back(x);
    return CPoly(v);
}

bool same_poly(const CPoly& a, const CPoly& b, double tol = 1e-70) {
    return a.degree() == b.degree() && relative_distance(a, b) <= BigReal(tol);
}

bool close(const BigComplex& a, const BigComplex& b, double tol) {
    return abs(a - b) <= BigReal(tol) * max(BigReal(1e-300), abs(b));
}

StructureData exp_inv_z() { return analyze({c({1}), c({1}), c({1}), c({0, 1})}); }
StructureData exp_inv_z_over() { return analyze({c({1}), c({-1, 1}), c({1}), c({0, 1})}); }

}  // namespace

TEST_CASE("recurrence examples") {
    DerivSeq a = b_sequence(exp_inv_z(), 3);
    CHECK(same_poly(a.B[0], c({1})));
    CHECK(same_poly(a.B[1], c({-1})));
    CHECK(same_poly(a.B[2], c({1, 2})));
    CHECK(same_poly(a.B[3], c({-1, -6, -6})));
    DerivSeq b = b_sequence(exp_inv_z_over(), 1);
    CHECK(same_poly(b.B[1], c({1, -1, -1})));
    CHECK_THROWS_AS(b_sequence(exp_inv_z(), -1), Error);
}

TEST_CASE("degree law in all three regimes") {
    DegreeLawReport r1 = check_degree_law(b_sequence(exp_inv_z(), 25));
    CHECK(r1.regime == "h=0,p>=q");
    CHECK(r1.pass);
    CHECK(r1.rows[3].deg == 2);
    DegreeLawReport r2 = check_degree_law(b_sequence(exp_inv_z_over(), 25));
    CHECK(r2.regime == "h=0,p<q");
    CHECK(r2.pass);
    CHECK(r2.rows[10].deg == 20);
    DegreeLawReport r3 = check_degree_law(b_sequence(analyze({c({1}), c({1}), c({1, 0, 1}), c({0, 1})}), 25));
    CHECK(r3.regime == "h>0");
    CHECK(r3.pass);
    CHECK(r3.rows[7].deg == 14);
    StructureData jt = analyze({c({1, -2, 1}), c({1}), c({1}), c({0, 1})});
    DegreeLawReport r4 = check_degree_law(b_sequence(jt, 25));
    CHECK(r4.pass);
    CHECK(r4.rows[2].deg == 4);
    CHECK(r4.rows[3].deg == 2);
}

TEST_CASE("local identities") {
    LocalIdentityReport a = check_local_identities(b_sequence(exp_inv_z(), 30));
    CHECK(a.max_residual <= BigReal(1e-25));
    CHECK(a.all_nonzero);
    DerivSeq s = b_sequence(exp_inv_z_over(), 30);
    CHECK(close(s.B[1].eval(BigComplex(1L)), BigComplex(-1L), 1e-70));
    LocalIdentityReport b = check_local_identities(s);
    CHECK(b.max_residual <= BigReal(1e-25));
    CHECK(b.all_nonzero);
}

TEST_CASE("oracle examples") {
    StructureData sd = exp_inv_z();
    OracleSample o = gf_oracle(sd, BigComplex(-1L), 2);
    CHECK(close(o.values[0], BigComplex(1L), 1e-30));
    CHECK(close(o.values[2], BigComplex(-0.5), 1e-30));
    CHECK(o.nodes >= 256);
    CHECK((o.nodes & (o.nodes - 1)) == 0);
    OracleSample p = gf_oracle(exp_inv_z_over(), BigComplex(2L), 1);
    CHECK(close(p.values[1], BigComplex(-1.25), 1e-30));
    CHECK_THROWS_AS(gf_oracle(sd, BigComplex(0L), 2), Error);
}

TEST_CASE("oracle agrees with the recurrence on random specs") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> di(-3, 3);
    std::uniform_real_distribution<double> ur(-3.0, 3.0);
    auto rp = [&](int deg) {
        std::vector<BigComplex> v;
        for (int k = 0; k <= deg; ++k) v.emplace_back(di(rng), di(rng));
        if (v.back().is_zero()) v.back() = BigComplex(1L);
        return CPoly(v);
    };
    int done = 0;
    while (done < 3) {
        HyperExpSpec spec{rp(2), rp(1), rp(1), rp(2)};
        if (spec.T.degree() < 1 || spec.S.is_zero()) continue;
        if (poly_gcd(spec.P, spec.Q).degree() > 0 || poly_gcd(spec.S, spec.T).degree() > 0) continue;
        StructureData sd = analyze(spec);
        DerivSeq seq = b_sequence(sd, 30);
        int pts = 0;
        while (pts < 5) {
            BigComplex z(ur(rng), ur(rng));
            if (sd.rho(z) < BigReal(0.3)) continue;
            OracleSample o = gf_oracle(sd, z, 30);
            for (int n = 0; n <= 30; ++n) CHECK(close(seq.scaled_value(n, z), o.values[static_cast<std::size_t>(n)], 1e-20));
            ++pts;
        }
        ++done;
    }
}

TEST_CASE("Cauchy-Hadamard growth at n = 200") {
    StructureData sd = exp_inv_z();
    DerivSeq seq = b_sequence(sd, 200);
    BigComplex z(-1L);
    BigReal root = exp(log(abs(seq.scaled_value(200, z))) / BigReal(200L));
    BigReal ratio = root * sd.rho(z);
    CHECK(ratio >= BigReal(0.8));
    CHECK(ratio <= BigReal(1.25));
}
