#pragma once

#include <optional>
#include <vector>

#include "hxz/hyperfunc.hpp"
#include "hxz/roots.hpp"

namespace hxz {

// Points z with Re(z * conj(normal)) <= offset.
struct HalfPlane {
    BigComplex normal;
    BigReal offset;
    std::size_t other = 0;  // site the half-plane separates from
};

struct Edge {
    std::size_t i = 0, j = 0;
    BigComplex midpoint;
    BigComplex direction;  // unit, i * (a_j - a_i) / |a_j - a_i|
    BigReal delta;         // |a_i - a_j| / 2
    BigReal t_lo, t_hi;    // may be infinite

    BigComplex point(const BigReal& t) const { return midpoint + direction * t; }
    bool bounded() const { return t_lo.is_finite() && t_hi.is_finite(); }
};

struct Cell {
    std::size_t site = 0;
    std::vector<HalfPlane> halfplanes;
    std::vector<BigComplex> vertices;  // finite edge endpoints ordered by angle about the site
    std::vector<std::size_t> edges;
    bool bounded = false;
};

struct VoronoiDiagram {
    std::vector<SiteRecord> sites;
    std::vector<Cell> cells;
    std::vector<Edge> edges;
    BigReal diameter;

    std::size_t nearest(const BigComplex& z) const;
    // Difference between the second-nearest and nearest site distances.
    BigReal boundary_gap(const BigComplex& z) const;
};

VoronoiDiagram build_diagram(const std::vector<SiteRecord>& sites);
BigReal rho(const VoronoiDiagram& diagram, const BigComplex& z);

struct EdgeMass {
    Edge edge;
    BigReal mass;
};

struct LimitMeasure {
    int kappa = 1;
    std::vector<std::pair<std::size_t, BigReal>> atoms;  // (site index, m_j / kappa)
    std::vector<EdgeMass> edges;
    BigReal total;
    BigReal point_at_infinity_mass;
    std::vector<BigComplex> site_locations;

    // |a_i - a_j| / (2 pi kappa |z - a_i| |z - a_j|)
    BigReal edge_density(std::size_t e, const BigComplex& z) const;
    // Limit mass carried by the open disc.
    BigReal disc_mass(const BigComplex& center, const BigReal& r) const;
    // Normalized arctan CDF of edge e at parameter t.
    BigReal edge_cdf(std::size_t e, const BigReal& t) const;
};

// Closed-form mass of edge e on the parameter interval [lo, hi].
BigReal edge_mass(const Edge& e, int kappa, const BigReal& lo, const BigReal& hi);

LimitMeasure limit_measure(const StructureData& sd, const VoronoiDiagram& diagram);

BigReal psi(const StructureData& sd, const VoronoiDiagram& diagram, const BigComplex& z);
BigReal psi_i(const StructureData& sd, std::size_t i, const BigComplex& z);

BigComplex cauchy_transform(const StructureData& sd, const VoronoiDiagram& diagram, const BigComplex& z);
// Atoms exactly plus adaptive quadrature over each edge, in double precision.
std::complex<double> limit_cauchy_integral(const LimitMeasure& lim, std::complex<double> z);

struct CompareOptions {
    double atom_radius = 0.0;     // 0 selects 0.45 * distance to the nearest other site
    double corridor_width = -1.0;  // < 0 selects 1.5 * n^(-1/2) * diam
    int n = 1;
};

struct AtomComparison {
    std::size_t site = 0;
    double radius = 0.0;
    double empirical = 0.0;
    double predicted = 0.0;
    int flagged = 0;
};

struct EdgeComparison {
    std::size_t edge = 0;
    double corridor_mass = 0.0;
    double predicted = 0.0;
    int count = 0;
    std::optional<double> ks;
};

struct MeasureComparison {
    std::vector<AtomComparison> atoms;
    std::vector<EdgeComparison> edges;
    double global_discrepancy = 0.0;
    double corridor_width = 0.0;
};

MeasureComparison compare_measures(const EmpiricalMeasure& emp, const LimitMeasure& lim,
                                   const VoronoiDiagram& diagram, const CompareOptions& opt);

}  // namespace hxz
