#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "artifacts.hpp"
#include "svg.hpp"

#include "hxz/asympt.hpp"
#include "hxz/errors.hpp"
#include "hxz/localmodels.hpp"
#include "hxz/serialize.hpp"

using namespace hxz;
using namespace hxz::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::Precision:
            return kExitPrecision;
        case ErrorKind::SaddleFailure:
        case ErrorKind::Quadrature:
        case ErrorKind::NumericalFailure:
            return kExitNumerical;
        default:
            return kExitValidation;
    }
}

struct RunConfig {
    std::string command;
    std::string spec_path;
    int n = 20;
    long precision_bits = 0;  // 0: environment, then spec file, then 256
    std::string output_dir = "hxz_out";
    bool svg = false;
    bool allow_large = false;
    std::vector<std::string> tolerances;

    // subcommand specific
    int site = 0;
    std::string z;
    std::string rect = "-2,-1,-0.25,0.25";
    std::string ns = "16,32,64,128";
    int grid = 40;
    bool leading = false;
    int alpha = -1;
    int m = 1;
    std::string lambda;
};

constexpr int kNGuard = 500;

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
    static const std::vector<std::string> known = {"atom_radius", "corridor_width"};
    std::map<std::string, double> out;
    for (const auto& s : items) {
        auto eq = s.find('=');
        if (eq == std::string::npos) fail(ErrorKind::InvalidInput, "tolerance override must read key=value: " + s);
        std::string key = s.substr(0, eq);
        if (std::find(known.begin(), known.end(), key) == known.end())
            fail(ErrorKind::InvalidInput, "unknown tolerance key " + key);
        try {
            out[key] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, "bad tolerance value in " + s);
        }
    }
    return out;
}

std::vector<double> parse_doubles(const std::string& s, std::size_t expect, const char* what) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, std::string("cannot parse ") + what + ": " + s);
        }
    }
    if (expect > 0 && v.size() != expect)
        fail(ErrorKind::InvalidInput, std::string(what) + " needs " + std::to_string(expect) + " comma-separated values");
    return v;
}

BigComplex parse_point(const std::string& s, const char* what) {
    auto v = parse_doubles(s, 2, what);
    return BigComplex(v[0], v[1]);
}

long resolve_bits(const RunConfig& cfg, const json* file) {
    long bits = 0;
    if (cfg.precision_bits > 0) {
        bits = cfg.precision_bits;
    } else if (const char* env = std::getenv("HXZ_PRECISION_BITS"); env && *env) {
        try {
            bits = std::stol(env);
        } catch (const std::exception&) {
            fail(ErrorKind::InvalidInput, std::string("HXZ_PRECISION_BITS is not an integer: ") + env);
        }
    } else if (file && file->contains("precision_bits") && file->at("precision_bits").is_number_integer()) {
        bits = file->at("precision_bits").get<long>();
    } else {
        bits = 256;
    }
    if (bits < 64 || bits > 4096) fail(ErrorKind::InvalidInput, "precision_bits must lie in [64, 4096]");
    return bits;
}

void guard_n(const RunConfig& cfg, int n) {
    if (n < 0) fail(ErrorKind::InvalidInput, "n must be non-negative");
    if (n > kNGuard && !cfg.allow_large)
        fail(ErrorKind::InvalidInput, "n = " + std::to_string(n) + " exceeds the soft limit " + std::to_string(kNGuard) +
                                          "; pass --allow-large to override");
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return sha256_hex(os.str());
}

json config_json(const RunConfig& cfg, long bits) {
    json j{{"command", cfg.command}, {"precision_bits", bits}, {"n", cfg.n}};
    if (!cfg.spec_path.empty()) {
        j["spec_path"] = cfg.spec_path;
        j["spec_sha256"] = file_hash(cfg.spec_path);
    }
    json tol = json::object();
    for (const auto& [k, v] : parse_tolerances(cfg.tolerances)) tol[k] = v;
    j["tolerances"] = tol;
    if (cfg.command == "predict") {
        j["site"] = cfg.site;
        j["z"] = cfg.z;
        j["leading_amplitude"] = cfg.leading;
    } else if (cfg.command == "l1rate") {
        j["site"] = cfg.site;
        j["rect"] = cfg.rect;
        j["ns"] = cfg.ns;
        j["grid"] = cfg.grid;
    } else if (cfg.command == "localmodel") {
        j["alpha"] = cfg.alpha;
        j["m"] = cfg.m;
        if (!cfg.lambda.empty()) j["lambda"] = cfg.lambda;
    }
    if (cfg.svg) j["svg"] = true;
    return j;
}

std::string num(const BigReal& x) { return x.to_string(decimal_digits()); }

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::complex<double> cd(const BigComplex& z) { return z.to_cdouble(); }

// Per-root relative residual |p(z)| / sum |a_k| |z|^k.
BigReal root_residual(const CPoly& p, const BigComplex& z) {
    BigReal acc = p.abs_eval(abs(z));
    BigReal v = abs(p.eval(z));
    return acc.is_zero() ? v : v / acc;
}

struct Loaded {
    StructureData sd;
    long bits;
};

Loaded load_spec(const RunConfig& cfg) {
    json j = read_json_file(cfg.spec_path);
    long bits = resolve_bits(cfg, &j);
    set_working_precision(bits);
    SpecFile f = spec_from_json(j, bits);
    return {analyze(f.spec), bits};
}

// View box around the sites and points with a 30% margin.
Svg plane_canvas(const StructureData& sd, const std::vector<BigComplex>& extra) {
    double xl = 1e300, xh = -1e300, yl = 1e300, yh = -1e300;
    auto take = [&](std::complex<double> p) {
        xl = std::min(xl, p.real());
        xh = std::max(xh, p.real());
        yl = std::min(yl, p.imag());
        yh = std::max(yh, p.imag());
    };
    for (const auto& s : sd.sites) take(cd(s.location));
    for (const auto& z : extra) take(cd(z));
    double span = std::max({xh - xl, yh - yl, 1.0});
    double pad = 0.3 * span;
    return Svg(xl - pad, xh + pad, yl - pad, yh + pad);
}

void draw_diagram(Svg& svg, const VoronoiDiagram& vd, const LimitMeasure& lim, const std::vector<BigComplex>& zeros) {
    const double far = 4.0 * std::max(svg.x1() - svg.x0(), svg.y1() - svg.y0());
    // density band: per-segment opacity, normalized by the largest sampled density
    const int pieces = 60;
    std::vector<std::tuple<std::complex<double>, std::complex<double>, double>> band;
    double dmax = 0.0;
    for (std::size_t e = 0; e < vd.edges.size(); ++e) {
        const Edge& ed = vd.edges[e];
        double lo = ed.t_lo.is_finite() ? ed.t_lo.to_double() : -far;
        double hi = ed.t_hi.is_finite() ? ed.t_hi.to_double() : far;
        std::complex<double> a = cd(ed.point(BigReal(lo))), b = cd(ed.point(BigReal(hi)));
        if (!svg.clip(a, b)) continue;
        for (int k = 0; k < pieces; ++k) {
            std::complex<double> p = a + (b - a) * (double(k) / pieces), q = a + (b - a) * (double(k + 1) / pieces);
            std::complex<double> mid = 0.5 * (p + q);
            double dens = lim.edge_density(e, BigComplex(mid.real(), mid.imag())).to_double();
            dmax = std::max(dmax, dens);
            band.emplace_back(p, q, dens);
        }
        svg.line(a, b, "black", 1.5);
    }
    for (const auto& [p, q, dens] : band)
        if (dmax > 0.0) svg.line(p, q, "orange", 10.0, 0.6 * dens / dmax);
    for (const auto& z : zeros) svg.dot(cd(z), 2.0, "blue");
    for (const auto& s : vd.sites)
        svg.triangle(cd(s.location), 7.0, s.kind == SiteKind::Essential ? "red" : "white", "black");
}

json summary(const ArtifactWriter& w, json extra = json::object()) {
    json j{{"status", "ok"}, {"artifacts", w.written()}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
}

json cmd_analyze(const RunConfig& cfg) {
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    w.write_json("structure.json", structure_to_json(L.sd));
    return summary(w, {{"d", L.sd.d}, {"kappa", L.sd.kappa}, {"h", L.sd.h}});
}

json cmd_derive(const RunConfig& cfg) {
    guard_n(cfg, cfg.n);
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    DerivSeq seq = b_sequence(L.sd, cfg.n);
    std::vector<json> rows;
    for (int k = 0; k <= cfg.n; ++k)
        rows.push_back(json{{"n", k}, {"deg", seq.degs[k]}, {"gamma", to_json(seq.gamma[k])}, {"coeffs", to_json(seq.B[k])}});
    w.write_jsonl("derive.jsonl", rows);
    return summary(w, {{"deg", seq.degs[cfg.n]}});
}

json cmd_zeros(const RunConfig& cfg) {
    guard_n(cfg, cfg.n);
    if (cfg.n < 1) fail(ErrorKind::InvalidInput, "zeros needs n >= 1");
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    DerivSeq seq = b_sequence(L.sd, cfg.n);
    const CPoly& B = seq.B[cfg.n];
    if (B.degree() < 1) fail(ErrorKind::Domain, "B_n is constant; there are no zeros");
    RootSet rs = find_roots(B);
    std::vector<std::string> rows;
    for (const auto& r : rs.roots)
        rows.push_back(std::to_string(cfg.n) + "," + num(r.z.re) + "," + num(r.z.im) + "," +
                       std::to_string(r.multiplicity) + "," + fmt(root_residual(B, r.z).to_double()));
    w.write_csv("zeros.csv", "n,re,im,multiplicity,residual", rows);
    return summary(w, {{"deg", B.degree()}, {"max_residual", fmt(rs.residual.to_double())}});
}

json cmd_voronoi(const RunConfig& cfg) {
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    VoronoiDiagram vd = build_diagram(L.sd.sites);
    LimitMeasure lim = limit_measure(L.sd, vd);
    w.write_json("voronoi.json", diagram_to_json(vd, lim));
    if (cfg.svg) {
        std::vector<BigComplex> zeros;
        if (cfg.n > 0) {
            guard_n(cfg, cfg.n);
            DerivSeq seq = b_sequence(L.sd, cfg.n);
            if (seq.B[cfg.n].degree() >= 1) zeros = find_roots(seq.B[cfg.n]).locations();
        }
        Svg svg = plane_canvas(L.sd, {});
        draw_diagram(svg, vd, lim, zeros);
        w.write_svg("voronoi.svg", svg.str());
    }
    return summary(w, {{"total_mass", fmt(lim.total.to_double())}});
}

json report_json(const PredictionReport& r) {
    return json{{"regime", regime_name(r.regime)},
                {"predicted", to_json(r.predicted)},
                {"exact", to_json(r.exact)},
                {"rel_error", num(r.rel_error)}};
}

json cmd_predict(const RunConfig& cfg) {
    guard_n(cfg, cfg.n);
    if (cfg.z.empty()) fail(ErrorKind::InvalidInput, "predict needs --z re,im");
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    if (cfg.site < 0 || static_cast<std::size_t>(cfg.site) >= L.sd.sites.size())
        fail(ErrorKind::InvalidInput, "site index out of range");
    const std::size_t i = static_cast<std::size_t>(cfg.site);
    BigComplex z = parse_point(cfg.z, "--z");
    DerivSeq seq = b_sequence(L.sd, cfg.n);
    CellClassification cc = classify(L.sd, i);
    json out{{"site", cfg.site},
             {"cell", cc.kind == CellKind::Essential ? "essential" : "algebraic"},
             {"theta", std::to_string(cc.theta_num) + "/" + std::to_string(cc.theta_den)}};
    if (cc.kind == CellKind::Algebraic) {
        out["report"] = report_json(darboux_predict(seq, i, z, cfg.n));
    } else {
        WrightOptions opt;
        opt.leading_amplitude = cfg.leading;
        out["report"] = report_json(wright_predict(seq, i, z, cfg.n, opt));
        SaddleExpansion se = wright_saddles(L.sd, i, z, cfg.n, opt);
        json saddles = json::array();
        for (const auto& s : se.saddles)
            saddles.push_back(json{{"nu", s.nu},
                                   {"t", to_json(s.t)},
                                   {"residual", num(s.residual)},
                                   {"descent", num(s.descent)},
                                   {"phase", to_json(s.phase)},
                                   {"amplitude", to_json(s.amplitude)}});
        out["eta"] = to_json(se.eta);
        out["saddles"] = saddles;
        out["dominant"] = se.dominant;
        out["n_min"] = wright_n_min(L.sd, i, z);
    }
    w.write_json("predict.json", out);
    return summary(w, {{"rel_error", out["report"]["rel_error"]}});
}

json cmd_l1rate(const RunConfig& cfg) {
    auto r = parse_doubles(cfg.rect, 4, "--rect");
    std::vector<int> ns;
    for (double v : parse_doubles(cfg.ns, 0, "--ns")) {
        if (v != std::floor(v) || v < 1) fail(ErrorKind::InvalidInput, "--ns entries must be positive integers");
        ns.push_back(static_cast<int>(v));
    }
    if (ns.size() < 2) fail(ErrorKind::InvalidInput, "--ns needs at least two values");
    int nmax = *std::max_element(ns.begin(), ns.end());
    guard_n(cfg, nmax);
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    if (cfg.site < 0 || static_cast<std::size_t>(cfg.site) >= L.sd.sites.size())
        fail(ErrorKind::InvalidInput, "site index out of range");
    DerivSeq seq = b_sequence(L.sd, nmax);
    L1RateReport rep = l1_rate_experiment(seq, static_cast<std::size_t>(cfg.site), {r[0], r[1], r[2], r[3]}, ns, cfg.grid);
    std::vector<std::string> rows;
    for (std::size_t k = 0; k < rep.n_list.size(); ++k) rows.push_back(std::to_string(rep.n_list[k]) + "," + fmt(rep.estimates[k]));
    w.write_csv("l1rate.csv", "n,estimate", rows);
    return summary(w, {{"slope", fmt(rep.slope)}, {"replaced_points", rep.replaced_points}});
}

json cmd_compare(const RunConfig& cfg) {
    guard_n(cfg, cfg.n);
    if (cfg.n < 1) fail(ErrorKind::InvalidInput, "compare needs n >= 1");
    Loaded L = load_spec(cfg);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, L.bits));
    auto tol = parse_tolerances(cfg.tolerances);
    VoronoiDiagram vd = build_diagram(L.sd.sites);
    LimitMeasure lim = limit_measure(L.sd, vd);
    DerivSeq seq = b_sequence(L.sd, cfg.n);
    const CPoly& B = seq.B[cfg.n];
    if (B.degree() < 1) fail(ErrorKind::Domain, "B_n is constant; there are no zeros");
    RootSet rs = find_roots(B);
    EmpiricalMeasure emp = empirical_measure(rs, BigReal(static_cast<long>(B.degree())));
    CompareOptions opt;
    opt.n = cfg.n;
    if (tol.count("atom_radius")) opt.atom_radius = tol["atom_radius"];
    if (tol.count("corridor_width")) opt.corridor_width = tol["corridor_width"];
    MeasureComparison cmp = compare_measures(emp, lim, vd, opt);
    json atoms = json::array();
    for (const auto& a : cmp.atoms)
        atoms.push_back(json{{"site", a.site},
                             {"location", to_json(vd.sites[a.site].location)},
                             {"radius", fmt(a.radius)},
                             {"empirical", fmt(a.empirical)},
                             {"predicted", fmt(a.predicted)},
                             {"flagged", a.flagged}});
    json edges = json::array();
    for (const auto& e : cmp.edges)
        edges.push_back(json{{"edge", e.edge},
                             {"corridor_mass", fmt(e.corridor_mass)},
                             {"predicted", fmt(e.predicted)},
                             {"count", e.count},
                             {"ks", e.ks ? json(fmt(*e.ks)) : json(nullptr)}});
    json out{{"n", cfg.n},
             {"deg", B.degree()},
             {"zeros", rs.total_multiplicity()},
             {"max_residual", fmt(rs.residual.to_double())},
             {"corridor_width", fmt(cmp.corridor_width)},
             {"global_discrepancy", fmt(cmp.global_discrepancy)},
             {"atoms", atoms},
             {"edges", edges}};
    w.write_json("compare.json", out);
    if (cfg.svg) {
        std::vector<BigComplex> zeros = rs.locations();
        Svg svg = plane_canvas(L.sd, zeros);
        draw_diagram(svg, vd, lim, zeros);
        w.write_svg("compare.svg", svg.str());
    }
    json fr = json::array();
    for (const auto& a : cmp.atoms) fr.push_back(fmt(a.empirical));
    return summary(w, {{"atom_fractions", fr}});
}

json cmd_localmodel(const RunConfig& cfg) {
    guard_n(cfg, cfg.n);
    if (cfg.m < 1) fail(ErrorKind::InvalidInput, "m must be >= 1");
    if (cfg.n < 1) fail(ErrorKind::InvalidInput, "localmodel needs n >= 1");
    long bits = resolve_bits(cfg, nullptr);
    set_working_precision(bits);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, bits));
    QPoly p = sheffer_explicit(cfg.alpha, cfg.m, cfg.n);
    json coeffs = json::array();
    for (const auto& c : p) coeffs.push_back(c.get_str());
    RescaledZeros rz = rescaled_empirical(cfg.alpha, cfg.m, cfg.n);
    MicroLimit ml = micro_limit(cfg.m);
    std::vector<double> re;
    double max_im = 0.0;
    for (const auto& z : rz.zeta) {
        re.push_back(z.re.to_double());
        max_im = std::max(max_im, std::abs(z.im.to_double()));
    }
    json out{{"alpha", cfg.alpha},
             {"m", cfg.m},
             {"n", cfg.n},
             {"coefficients", coeffs},
             {"ord0", ord0_exact(p)},
             {"zeros_at_origin", rz.zeros_at_origin},
             {"bits_used", rz.bits_used},
             {"c_m", c_m(cfg.m).get_str()}};
    if (!re.empty()) {
        out["ks_mu_m"] = fmt(ks_distance(re, [&](double x) { return ml.cdf_at(x); }));
        if (cfg.m == 1) out["ks_mp"] = fmt(ks_distance(re, mp_cdf));
        out["support"] = {fmt(*std::min_element(re.begin(), re.end())), fmt(*std::max_element(re.begin(), re.end()))};
        out["max_abs_im"] = fmt(max_im);
    }
    std::vector<std::string> rows;
    for (const auto& z : rz.zeta) rows.push_back(num(z.re) + "," + num(z.im));
    w.write_csv("localmodel_zeros.csv", "re,im", rows);
    if (!cfg.lambda.empty()) {
        EmpiricalMeasure pf = pushforward(rz, parse_point(cfg.lambda, "--lambda"));
        std::vector<std::string> prow;
        for (const auto& a : pf.atoms) prow.push_back(num(a.location.re) + "," + num(a.location.im) + "," + num(a.weight));
        w.write_csv("pushforward.csv", "re,im,weight", prow);
        out["pushforward_atoms"] = pf.atoms.size();
    }
    w.write_json("localmodel.json", out);
    if (cfg.svg && !re.empty()) {
        double top = ml.zeta.back() * 1.05;
        const int bins = 40;
        std::vector<double> hist(bins, 0.0);
        for (double x : re) {
            int b = std::clamp(static_cast<int>(x / top * bins), 0, bins - 1);
            hist[static_cast<std::size_t>(b)] += 1.0;
        }
        double width = top / bins, ymax = 0.0;
        for (auto& h : hist) h /= re.size() * width;
        std::vector<std::complex<double>> curve;
        for (std::size_t k = 0; k < ml.zeta.size(); k += std::max<std::size_t>(1, ml.zeta.size() / 400))
            if (ml.zeta[k] > 0.02 * top) curve.emplace_back(ml.zeta[k], ml.density[k]);
        for (const auto& c : curve) ymax = std::max(ymax, c.imag());
        for (double h : hist) ymax = std::max(ymax, h);
        ymax = std::min(ymax, 4.0 * (curve.empty() ? 1.0 : curve[curve.size() / 2].imag()) + 1e-9);
        Svg svg(-0.05 * top, top, -0.05 * ymax, 1.05 * ymax, 800);
        for (int b = 0; b < bins; ++b)
            svg.rect({b * width, 0.0}, {(b + 1) * width, std::min(hist[static_cast<std::size_t>(b)], ymax)}, "steelblue", 0.5);
        svg.polyline(curve, "black", 1.5);
        for (double x : re) svg.dot({x, 0.0}, 1.5, "blue");
        w.write_svg("localmodel.svg", svg.str());
    }
    return summary(w, {{"ks", out.contains("ks_mu_m") ? out["ks_mu_m"] : json(nullptr)}});
}

json cmd_reconstruct(const RunConfig& cfg) {
    json j = read_json_file(cfg.spec_path);
    long bits = resolve_bits(cfg, &j);
    set_working_precision(bits);
    ArtifactWriter w(cfg.output_dir, config_json(cfg, bits));
    LogDerivFile f = logderiv_from_json(j, bits);
    Reconstruction r = reconstruct_from_log_derivative(f.r);
    w.write_json("reconstruct.json", reconstruction_to_json(r));
    return summary(w, {{"residue_warning", r.residue_warning}});
}

void diagnose(const RunConfig& cfg, const std::string& kind, const std::string& message, int code,
              bool to_file = true) {
    json d{{"status", "error"}, {"kind", kind}, {"message", message}, {"exit_code", code}, {"command", cfg.command}};
    std::cerr << d.dump() << "\n";
    if (!to_file) return;
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (!ec) {
        std::ofstream out(std::filesystem::path(cfg.output_dir) / "diagnostic.json");
        if (out) out << d.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hxz: derivatives of hyperexponential functions, zero distributions and asymptotics"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_spec) {
        if (needs_spec) sub->add_option("spec", cfg.spec_path, "input JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", cfg.output_dir, "output directory");
        sub->add_option("-p,--precision", cfg.precision_bits, "working precision in bits (overrides HXZ_PRECISION_BITS)");
        sub->add_option("--tol", cfg.tolerances, "tolerance override key=value");
        sub->add_flag("--allow-large", cfg.allow_large, "lift the n <= 500 guard");
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "structure data of a spec");
    common(analyze_cmd, true);

    auto* derive_cmd = app.add_subcommand("derive", "B_n for n = 0..N as JSON lines");
    common(derive_cmd, true);
    derive_cmd->add_option("-n,--n", cfg.n, "largest derivative order");

    auto* zeros_cmd = app.add_subcommand("zeros", "zeros of B_n as CSV");
    common(zeros_cmd, true);
    zeros_cmd->add_option("-n,--n", cfg.n, "derivative order");

    auto* voronoi_cmd = app.add_subcommand("voronoi", "Voronoi diagram and limit measure");
    common(voronoi_cmd, true);
    voronoi_cmd->add_option("-n,--n", cfg.n, "overlay zeros of B_n in the SVG (0 for none)");
    voronoi_cmd->add_flag("--svg", cfg.svg, "also write an SVG picture");

    auto* predict_cmd = app.add_subcommand("predict", "asymptotic prediction of C_n(z)/n!");
    common(predict_cmd, true);
    predict_cmd->add_option("--site", cfg.site, "site index")->required();
    predict_cmd->add_option("--z", cfg.z, "evaluation point re,im")->required();
    predict_cmd->add_option("-n,--n", cfg.n, "derivative order")->required();
    predict_cmd->add_flag("--leading", cfg.leading, "closed-form leading saddle amplitude");

    auto* l1_cmd = app.add_subcommand("l1rate", "L1 discrepancy of the rescaled log-modulus");
    common(l1_cmd, true);
    l1_cmd->add_option("--site", cfg.site, "site index");
    l1_cmd->add_option("--rect", cfg.rect, "x0,x1,y0,y1");
    l1_cmd->add_option("--ns", cfg.ns, "comma-separated n values");
    l1_cmd->add_option("--grid", cfg.grid, "grid points per side")->check(CLI::Range(2, 2000));

    auto* compare_cmd = app.add_subcommand("compare", "zeros of B_n against the limit measure");
    common(compare_cmd, true);
    compare_cmd->add_option("-n,--n", cfg.n, "derivative order");
    compare_cmd->add_flag("--svg", cfg.svg, "also write an SVG picture");

    auto* local_cmd = app.add_subcommand("localmodel", "Sheffer local model near an essential singularity");
    common(local_cmd, false);
    local_cmd->add_option("--alpha", cfg.alpha, "alpha");
    local_cmd->add_option("--m", cfg.m, "pole order m");
    local_cmd->add_option("-n,--n", cfg.n, "polynomial degree");
    local_cmd->add_option("--lambda", cfg.lambda, "leading principal coefficient re,im for the pushforward");
    local_cmd->add_flag("--svg", cfg.svg, "also write an SVG picture");

    auto* rec_cmd = app.add_subcommand("reconstruct", "recover f from its logarithmic derivative");
    common(rec_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        cfg.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
        // the output directory may not have been parsed yet
        diagnose(cfg, error_kind_name(ErrorKind::InvalidInput), e.what(), kExitValidation, false);
        return kExitValidation;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        json s;
        if (cfg.command == "analyze") s = cmd_analyze(cfg);
        else if (cfg.command == "derive") s = cmd_derive(cfg);
        else if (cfg.command == "zeros") s = cmd_zeros(cfg);
        else if (cfg.command == "voronoi") s = cmd_voronoi(cfg);
        else if (cfg.command == "predict") s = cmd_predict(cfg);
        else if (cfg.command == "l1rate") s = cmd_l1rate(cfg);
        else if (cfg.command == "compare") s = cmd_compare(cfg);
        else if (cfg.command == "localmodel") s = cmd_localmodel(cfg);
        else if (cfg.command == "reconstruct") s = cmd_reconstruct(cfg);
        std::cout << s.dump() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        int code = exit_code_for(e.kind());
        diagnose(cfg, error_kind_name(e.kind()), e.what(), code);
        return code;
    } catch (const nlohmann::json::exception& e) {
        diagnose(cfg, error_kind_name(ErrorKind::InvalidInput), e.what(), kExitValidation);
        return kExitValidation;
    } catch (const std::exception& e) {
        diagnose(cfg, error_kind_name(ErrorKind::NumericalFailure), e.what(), kExitNumerical);
        return kExitNumerical;
    }
}
