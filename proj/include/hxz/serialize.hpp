#pragma once

#include <string>

#include "json.hpp"

#include "hxz/derivseq.hpp"
#include "hxz/hyperfunc.hpp"
#include "hxz/voronoi.hpp"

namespace hxz {

using json = nlohmann::ordered_json;

// Decimal digits that round-trip at the current working precision.
int decimal_digits();

json to_json(const BigReal& x);
json to_json(const BigComplex& z);  // [re_string, im_string]
json to_json(const CPoly& p);       // ascending coefficients
json to_json(const RationalFunction& r);

BigReal real_from_json(const json& j);
BigComplex complex_from_json(const json& j);
CPoly poly_from_json(const json& j);
RationalFunction rational_from_json(const json& j);

struct SpecFile {
    HyperExpSpec spec;
    long precision_bits = 256;
};

// Parses {"P": [...], "Q": [...], "S": [...], "T": [...], "precision_bits": 256}; missing P or Q default to 1.
// bits_override > 0 replaces the file's precision_bits before coefficients are parsed.
SpecFile spec_from_json(const json& j, long bits_override = 0);
json spec_to_json(const HyperExpSpec& spec, long precision_bits);

struct LogDerivFile {
    RationalFunction r;
    long precision_bits = 256;
};

// {"num": [...], "den": [...], "precision_bits": 256}
LogDerivFile logderiv_from_json(const json& j, long bits_override = 0);

json structure_to_json(const StructureData& sd);
json diagram_to_json(const VoronoiDiagram& vd, const LimitMeasure& lim);
json reconstruction_to_json(const Reconstruction& r);

json read_json_file(const std::string& path);

}  // namespace hxz
