#include "hxz/serialize.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hxz/errors.hpp"

namespace hxz {

int decimal_digits() { return static_cast<int>(std::ceil(working_precision() * std::log10(2.0))) + 2; }

json to_json(const BigReal& x) { return x.to_string(decimal_digits()); }

json to_json(const BigComplex& z) { return json::array({to_json(z.re), to_json(z.im)}); }

json to_json(const CPoly& p) {
    json a = json::array();
    for (const auto& c : p.coeffs()) a.push_back(to_json(c));
    return a;
}

json to_json(const RationalFunction& r) { return json{{"num", to_json(r.num)}, {"den", to_json(r.den)}}; }

BigReal real_from_json(const json& j) {
    if (j.is_string()) return BigReal::parse(j.get<std::string>());
    if (j.is_number_integer()) return BigReal(j.get<long>());
    if (j.is_number()) return BigReal(j.get<double>());
    fail(ErrorKind::InvalidInput, "expected a decimal string or number, got " + j.dump());
}

BigComplex complex_from_json(const json& j) {
    if (j.is_array()) {
        if (j.size() != 2) fail(ErrorKind::InvalidInput, "complex value must be a 2-array [re, im]");
        return {real_from_json(j[0]), real_from_json(j[1])};
    }
    return BigComplex(real_from_json(j));
}

CPoly poly_from_json(const json& j) {
    if (!j.is_array()) fail(ErrorKind::InvalidInput, "polynomial must be an array of coefficients");
    std::vector<BigComplex> c;
    for (const auto& e : j) c.push_back(complex_from_json(e));
    CPoly p(std::move(c));
    p.normalize();
    return p;
}

RationalFunction rational_from_json(const json& j) {
    if (!j.contains("num") || !j.contains("den")) fail(ErrorKind::InvalidInput, "rational function needs num and den");
    return RationalFunction(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

namespace {

long read_bits(const json& j) {
    if (!j.contains("precision_bits")) return 256;
    if (!j.at("precision_bits").is_number_integer()) fail(ErrorKind::InvalidInput, "precision_bits must be an integer");
    long b = j.at("precision_bits").get<long>();
    if (b < 64 || b > 4096) fail(ErrorKind::InvalidInput, "precision_bits must lie in [64, 4096]");
    return b;
}

CPoly one() { return CPoly::constant(BigComplex(1L)); }

const char* kind_name(SiteKind k) { return k == SiteKind::Essential ? "essential" : "pole"; }

}  // namespace

SpecFile spec_from_json(const json& j, long bits_override) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "spec file must hold a JSON object");
    for (const char* key : {"S", "T"})
        if (!j.contains(key)) fail(ErrorKind::InvalidInput, std::string("spec is missing ") + key);
    SpecFile f;
    f.precision_bits = bits_override > 0 ? bits_override : read_bits(j);
    PrecisionScope scope(f.precision_bits);
    f.spec.P = j.contains("P") ? poly_from_json(j.at("P")) : one();
    f.spec.Q = j.contains("Q") ? poly_from_json(j.at("Q")) : one();
    f.spec.S = poly_from_json(j.at("S"));
    f.spec.T = poly_from_json(j.at("T"));
    return f;
}

json spec_to_json(const HyperExpSpec& spec, long precision_bits) {
    return json{{"P", to_json(spec.P)},
                {"Q", to_json(spec.Q)},
                {"S", to_json(spec.S)},
                {"T", to_json(spec.T)},
                {"precision_bits", precision_bits}};
}

LogDerivFile logderiv_from_json(const json& j, long bits_override) {
    if (!j.is_object()) fail(ErrorKind::InvalidInput, "log-derivative file must hold a JSON object");
    LogDerivFile f;
    f.precision_bits = bits_override > 0 ? bits_override : read_bits(j);
    PrecisionScope scope(f.precision_bits);
    f.r = rational_from_json(j);
    return f;
}

json structure_to_json(const StructureData& sd) {
    json sites = json::array();
    for (std::size_t i = 0; i < sd.sites.size(); ++i) {
        const SiteRecord& s = sd.sites[i];
        json e{{"index", i},
               {"location", to_json(s.location)},
               {"kind", kind_name(s.kind)},
               {"m", s.m},
               {"p_loc", s.p_loc},
               {"r_loc", s.r_loc},
               {"ell", s.ell},
               {"beta", s.beta},
               {"varpi", s.varpi()}};
        if (s.principal) {
            json lam = json::array();
            for (const auto& c : s.principal->coeffs) lam.push_back(to_json(c));
            e["lambda"] = lam;
        }
        sites.push_back(e);
    }
    json out{{"spec", spec_to_json(sd.spec, working_precision())},
             {"d", sd.d},
             {"kappa", sd.kappa},
             {"h", sd.h},
             {"sigma", to_json(sd.sigma)},
             {"t_check", sd.t_check},
             {"q_check", sd.q_check},
             {"p", sd.p},
             {"q", sd.q},
             {"P_T", to_json(sd.P_T)},
             {"P_sharp", to_json(sd.P_sharp)},
             {"W", to_json(sd.W)},
             {"U", to_json(sd.U)},
             {"H", to_json(sd.H)},
             {"M", to_json(sd.M)},
             {"T0", to_json(sd.T0)},
             {"Q_star", to_json(sd.Q_star)},
             {"sites", sites}};
    if (sd.h > 0) out["tau_h"] = to_json(sd.tau_h);
    if (sd.J) out["J"] = *sd.J;
    if (sd.G_minus_J) out["G_minus_J"] = to_json(*sd.G_minus_J);
    return out;
}

json diagram_to_json(const VoronoiDiagram& vd, const LimitMeasure& lim) {
    json sites = json::array();
    for (const auto& s : vd.sites) sites.push_back(json{{"location", to_json(s.location)}, {"kind", kind_name(s.kind)}, {"m", s.m}});
    json edges = json::array();
    for (std::size_t e = 0; e < vd.edges.size(); ++e) {
        const Edge& ed = vd.edges[e];
        json item{{"i", ed.i},
                  {"j", ed.j},
                  {"midpoint", to_json(ed.midpoint)},
                  {"direction", to_json(ed.direction)},
                  {"delta", to_json(ed.delta)},
                  {"t_lo", to_json(ed.t_lo)},
                  {"t_hi", to_json(ed.t_hi)}};
        if (ed.t_lo.is_finite()) item["start"] = to_json(ed.point(ed.t_lo));
        if (ed.t_hi.is_finite()) item["end"] = to_json(ed.point(ed.t_hi));
        if (e < lim.edges.size()) item["mass"] = to_json(lim.edges[e].mass);
        edges.push_back(item);
    }
    json atoms = json::array();
    for (const auto& a : lim.atoms) atoms.push_back(json{{"site", a.first}, {"mass", to_json(a.second)}});
    return json{{"sites", sites},
                {"edges", edges},
                {"atoms", atoms},
                {"kappa", lim.kappa},
                {"total_mass", to_json(lim.total)},
                {"mass_at_infinity", to_json(lim.point_at_infinity_mass)},
                {"diameter", to_json(vd.diameter)}};
}

json reconstruction_to_json(const Reconstruction& r) {
    json ex = json::array();
    for (const auto& [a, k] : r.exponents) ex.push_back(json{{"point", to_json(a)}, {"exponent", k}});
    return json{{"exponents", ex},
                {"H", to_json(r.H)},
                {"max_residue_deviation", r.max_residue_deviation},
                {"residue_warning", r.residue_warning}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidInput, path + ": " + e.what());
    }
}

}  // namespace hxz
