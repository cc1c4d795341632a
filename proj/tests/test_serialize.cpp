#include "doctest.h"

#include "hxz/errors.hpp"
#include "hxz/serialize.hpp"

using namespace hxz;

TEST_CASE("complex values round-trip at working precision") {
    PrecisionScope scope(256);
    BigComplex z = BigComplex(1L) / BigComplex(3L, 7L);
    json j = to_json(z);
    REQUIRE(j.is_array());
    REQUIRE(j[0].is_string());
    BigComplex back = complex_from_json(j);
    CHECK(abs(back - z) <= abs(z) * pow(BigReal(2L), -250L));
}

TEST_CASE("numbers and strings both parse") {
    PrecisionScope scope(128);
    CHECK(complex_from_json(json::parse("[1.5, \"-2\"]")).re.to_double() == 1.5);
    CHECK(complex_from_json(json::parse("[1.5, \"-2\"]")).im.to_double() == -2.0);
    CHECK(complex_from_json(json::parse("3")).im.is_zero());
    CHECK_THROWS_AS(complex_from_json(json::parse("[1,2,3]")), Error);
    CHECK_THROWS_AS(real_from_json(json::parse("true")), Error);
}

TEST_CASE("spec file parsing") {
    json j = json::parse(R"({"S":[1],"T":[0,1],"precision_bits":192})");
    SpecFile f = spec_from_json(j);
    CHECK(f.precision_bits == 192);
    CHECK(f.spec.P.degree() == 0);
    CHECK(f.spec.T.degree() == 1);
    json back = spec_to_json(f.spec, f.precision_bits);
    SpecFile g = spec_from_json(back);
    CHECK(g.spec.T.degree() == 1);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"S":[1]})")), Error);
    CHECK_THROWS_AS(spec_from_json(json::parse(R"({"S":[1],"T":[0,1],"precision_bits":8})")), Error);
}

TEST_CASE("structure serialization is deterministic") {
    PrecisionScope scope(128);
    SpecFile f = spec_from_json(json::parse(R"({"S":[1],"T":[0,1],"Q":[-1,1]})"));
    StructureData sd = analyze(f.spec);
    std::string a = structure_to_json(sd).dump();
    std::string b = structure_to_json(analyze(f.spec)).dump();
    CHECK(a == b);
    json j = json::parse(a);
    CHECK(j["d"] == sd.d);
    CHECK(j["sites"].size() == sd.sites.size());
}

TEST_CASE("log-derivative file") {
    LogDerivFile f = logderiv_from_json(json::parse(R"({"num":[2,-1],"den":[0,0,1]})"));
    CHECK(f.r.num.degree() == 1);
    CHECK(f.r.den.degree() == 2);
}
