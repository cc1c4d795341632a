#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hxz/cpoly.hpp"

namespace hxz {

// f = (P/Q) exp(S/T)
struct HyperExpSpec {
    CPoly P;
    CPoly Q;
    CPoly S;
    CPoly T;
};

enum class SiteKind { Essential, Pole };

struct SiteRecord {
    BigComplex location;
    SiteKind kind = SiteKind::Essential;
    int m = 0;      // ord T
    int p_loc = 0;  // ord P_T
    int r_loc = 0;  // ord Q
    int ell = 0;    // pole multiplicity for Pole sites
    int beta = 0;   // p_loc - r_loc
    std::optional<LaurentPrincipalPart> principal;

    // ord of W at the site
    int varpi() const { return kind == SiteKind::Essential ? m + 1 : 1; }
};

struct StructureData {
    HyperExpSpec spec;  // normalized
    CPoly P_T, P_sharp, W, U, H, M;
    CPoly T0, Q_star;
    std::vector<SiteRecord> sites;  // essential sites first, then poles; each group ordered by (re, im)
    int d = 0;
    int kappa = 0;
    int h = 0;
    BigReal sigma;
    BigComplex tau_h;  // leading coefficient of H when h > 0
    int t_check = 0;
    int q_check = 0;
    int p = 0;  // deg P
    int q = 0;  // deg Q
    std::optional<int> J;
    std::optional<BigComplex> G_minus_J;

    BigComplex E(const BigComplex& z) const;
    // Regular part of E at site i: constant Laurent term at essential sites, E(a) at poles.
    BigComplex E_reg(std::size_t i) const;
    // W / (z - a_i)^varpi_i evaluated at z.
    BigComplex W_tilde(std::size_t i, const BigComplex& z) const;
    BigReal rho(const BigComplex& z) const;
    // Index of the site within the coincidence radius of z, if any.
    std::optional<std::size_t> site_at(const BigComplex& z) const;
    std::vector<std::size_t> essential_indices() const;
    std::vector<std::size_t> pole_indices() const;
};

// Relative distance below which two points are the same site.
BigReal coincidence_radius();
bool same_site(const BigComplex& a, const BigComplex& b);

HyperExpSpec normalize(const HyperExpSpec& spec);
StructureData analyze(const HyperExpSpec& spec);

// P'/P - Q'/Q + E' as a single reduced rational function.
RationalFunction log_derivative(const HyperExpSpec& spec);

struct Reconstruction {
    std::vector<std::pair<BigComplex, int>> exponents;  // f = c * prod (z-a)^n_a * exp(H)
    RationalFunction H;
    double max_residue_deviation = 0.0;
    bool residue_warning = false;  // some residue was between 1e-10 and 1e-6 from an integer
};

Reconstruction reconstruct_from_log_derivative(const RationalFunction& r);

}  // namespace hxz
