#pragma once

#include <optional>
#include <vector>

#include "hxz/derivseq.hpp"
#include "hxz/voronoi.hpp"

namespace hxz {

enum class CellKind { Algebraic, Essential };

struct CellClassification {
    std::size_t site = 0;
    CellKind kind = CellKind::Algebraic;
    int m = 0;
    int beta = 0;
    int theta_num = 0;  // theta = theta_num / theta_den = -(2 beta + m + 2) / (2 (m + 1))
    int theta_den = 1;

    double theta() const { return static_cast<double>(theta_num) / theta_den; }
};

CellClassification classify(const StructureData& sd, std::size_t i);

// R_i(z, 1) from the local factorizations at a_i.
BigComplex amplitude_R(const StructureData& sd, std::size_t i, const BigComplex& z);

enum class Regime { Darboux, WrightOneSaddle, WrightMultiSaddle };
const char* regime_name(Regime r);

struct PredictionReport {
    BigComplex predicted;
    BigComplex exact;
    BigReal rel_error;  // |predicted / exact - 1|
    Regime regime = Regime::Darboux;
};

PredictionReport darboux_predict(const DerivSeq& seq, std::size_t i, const BigComplex& z, int n);

struct Saddle {
    int nu = 0;
    BigComplex omega;
    BigComplex seed;  // omega * eta * n^(-1/(m+1))
    BigComplex t;
    BigComplex phi2;       // Phi''(t)
    BigReal residual;      // |Phi'(t)|
    BigReal descent;       // steepest-descent angle aligned with the positively oriented t-circle
    BigComplex amplitude;  // Gaussian amplitude at the exact saddle, scaled by n^(-theta)
    BigComplex amplitude_leading;  // (omega eta)^beta (omega eta)^(1/2) R / sqrt(2 pi (m+1))
    BigComplex phase;      // Xi = Phi(t)
};

struct SaddleExpansion {
    std::size_t site = 0;
    BigComplex z;
    int n = 0;
    int m = 1;
    int beta = 0;
    double theta = 0.0;
    BigComplex eta;
    BigComplex d;  // a_i - z
    std::vector<BigComplex> lambda_tilde;  // lambda_tilde[s-1] = lambda_s (z - a)^(-s)
    std::vector<Saddle> saddles;
    std::vector<int> dominant;
    BigComplex R_at_1;
};

struct WrightOptions {
    bool leading_amplitude = false;  // use the closed-form leading amplitude instead of the saddle-refined one
    int eta_rotation = 0;            // relabels eta -> omega_k eta
    bool all_saddles = false;        // keep every summand even off the Stokes set
};

int wright_n_min(const StructureData& sd, std::size_t i, const BigComplex& z);
BigComplex eta_branch(const StructureData& sd, std::size_t i, const BigComplex& z);
SaddleExpansion wright_saddles(const StructureData& sd, std::size_t i, const BigComplex& z, int n,
                               const WrightOptions& opt = {});
// d^(-n) n^theta sum over the chosen summands
BigComplex wright_sum(const SaddleExpansion& se, const std::vector<int>& which, bool leading_amplitude);
PredictionReport wright_predict(const DerivSeq& seq, std::size_t i, const BigComplex& z, int n,
                                const WrightOptions& opt = {});

struct StokesIndicator {
    std::vector<int> dominant;
    BigReal margin;  // top Re(omega eta) minus the best non-dominant value
    bool on_stokes_set = false;
};

StokesIndicator stokes_indicator(const StructureData& sd, std::size_t i, const BigComplex& z);

struct BranchCalibration {
    BigReal error_as_oriented;  // against the oracle with the positively oriented contour
    BigReal error_flipped;      // all amplitudes negated
    bool orientation_confirmed = false;
};

BranchCalibration calibrate_branch(const StructureData& sd, std::size_t i, const BigComplex& z, int n);

struct Rectangle {
    double x0, x1, y0, y1;
};

struct L1RateReport {
    std::vector<int> n_list;
    std::vector<double> estimates;
    double slope = 0.0;
    int grid = 0;
    int replaced_points = 0;
};

// integral over K of |L_tilde_n - Psi_i| on a uniform midpoint grid
double l1_discrepancy(const DerivSeq& seq, std::size_t i, const Rectangle& K, int n, int grid, int* replaced = nullptr);
L1RateReport l1_rate_experiment(const DerivSeq& seq, std::size_t i, const Rectangle& K, const std::vector<int>& n_list,
                                int grid = 40);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hxz
