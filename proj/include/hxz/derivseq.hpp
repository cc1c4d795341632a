#pragma once

#include <string>
#include <vector>

#include "hxz/hyperfunc.hpp"

namespace hxz {

// f^(n) = P_T B_n e^E / (Q W^n)
struct DerivSeq {
    StructureData structure;
    std::vector<CPoly> B;
    std::vector<BigComplex> gamma;
    std::vector<int> degs;
    std::vector<BigReal> s;  // 0 when h = 0, log n! otherwise

    int N() const { return static_cast<int>(B.size()) - 1; }
    // C_n(z)/n! = B_n(z) / (n! W(z)^n)
    BigComplex scaled_value(int n, const BigComplex& z) const;
    // (log|B_n(z)| - log|gamma_n| - s_n) / deg B_n
    BigReal L_tilde(int n, const BigComplex& z) const;
};

DerivSeq b_sequence(const StructureData& sd, int N);

struct DegreeLawRow {
    int n = 0;
    int deg = 0;
    int expected_deg = 0;
    BigComplex gamma;
    BigComplex expected_gamma;
    BigReal rel_residual;
    bool pass = false;
};

struct DegreeLawReport {
    std::string regime;  // "h>0", "h=0,p<q", "h=0,p>=q"
    std::vector<DegreeLawRow> rows;
    BigReal max_residual;
    bool pass = true;
};

// Relative tolerance applied to leading coefficients.
BigReal degree_law_tolerance();
DegreeLawReport check_degree_law(const DerivSeq& seq);

struct LocalIdentityRow {
    std::size_t site = 0;
    int n = 0;
    BigReal rel_residual;
    bool nonzero = true;
};

struct LocalIdentityReport {
    std::vector<LocalIdentityRow> rows;
    BigReal max_residual;
    bool all_nonzero = true;
};

LocalIdentityReport check_local_identities(const DerivSeq& seq);

struct OracleSample {
    BigComplex z;
    std::vector<BigComplex> values;  // C_n(z)/n!
    BigReal radius;
    int nodes = 0;
};

// Generating function C(z, xi) of the sequence C_n(z)/n!.
BigComplex translation_gf(const StructureData& sd, const BigComplex& z, const BigComplex& xi);
OracleSample gf_oracle(const StructureData& sd, const BigComplex& z, int N);

}  // namespace hxz
