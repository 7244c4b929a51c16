// Analytical error-performance pipeline: per-path effective operators, the
// codeword difference Gram matrix and its eigen spectrum, conditional and
// unconditional pairwise error probabilities, and the union-bound BER
// averaged over channel geometry and oscillator phase realizations.
#pragma once

#include "otsm/channel.hpp"
#include "otsm/constellation.hpp"
#include "otsm/params.hpp"
#include "otsm/transforms.hpp"
#include "otsm/windows.hpp"

#include <cstdint>
#include <vector>

namespace otsm {

/// Upsilon_p = (W (x) G_rx) Theta Pi^alpha Delta^beta (W (x) G_tx): the
/// effective operator of one unit-gain path.
CMat build_upsilon(int alpha, Real beta, const PhnRealization& phn, const WindowDiagonal& g_tx,
                   const WindowDiagonal& g_rx, const RMat& walsh);

/// One operator per path of the realization (gains not applied).
std::vector<CMat> path_upsilons(const ChannelRealization& ch, const PhnRealization& phn,
                                const WindowDiagonal& g_tx, const WindowDiagonal& g_rx,
                                const RMat& walsh);

/// Sigma(x) = [Upsilon_1 x ... Upsilon_P x], MN x P.
CMat codeword_matrix(const CVec& x, const std::vector<CMat>& upsilons);

struct DistanceSpectrum {
    CMat xi;          // P x P Hermitian Gram matrix Sigma(e)^H Sigma(e)
    RVec lambda;      // all P eigenvalues, descending
    int rank = 0;     // eigenvalues above tol * lambda_max
    CVec varsigma;    // projections of the tap mean onto the eigenvectors
    RVec ricean_xi;   // |varsigma|^2
};

inline constexpr Real kRankTol = 1e-10;

/// Eigen spectrum of the Gram matrix of Sigma(e). h_mean is the tap mean
/// vector (empty = zero mean, the Rayleigh case).
DistanceSpectrum spectrum_from_sigma(const CMat& sigma_e, Real tol = kRankTol,
                                     const CVec& h_mean = CVec());
DistanceSpectrum gram_and_spectrum(const CVec& e, const std::vector<CMat>& upsilons,
                                   Real tol = kRankTol, const CVec& h_mean = CVec());

/// Quadratic form h^H Xi h (real by Hermitian symmetry).
Real quadratic_eta(const CVec& h, const DistanceSpectrum& spec);

/// Chernoff-bound pairwise error probability conditioned on the taps:
/// (1/2) exp(-eta / (4 N0)).
Real cpep(Real eta, Real n0);

/// Tap-averaged pairwise error probability:
/// (1/2) prod_i [1/(1+lambda_i/(4 P N0))] exp(-(xi_i lambda_i/(4 P N0)) /
/// (1+lambda_i/(4 P N0))), product over the spectrum rank.
Real upep(const DistanceSpectrum& spec, int p, Real n0);

/// High-SNR asymptote (4 P N0)^r / (2 prod_i lambda_i); zero-mean taps only.
Real upep_high_snr(const DistanceSpectrum& spec, int p, Real n0);

enum class BoundMode { Exact, Sampled };

struct BoundPoint {
    Real snr_db = 0.0;
    Real n0 = 0.0;
    Real bound = 0.0;           // union-bound BER estimate
    Real bound_high_snr = 0.0;  // same sum with the asymptotic pairwise term
    Real ci95 = 0.0;            // half-width over realization means
    std::uint64_t n_pairs = 0;  // ordered codeword pairs per realization
    int n_realizations = 0;
};

struct BoundReport {
    WindowKind window = WindowKind::Rectangular;
    BoundMode mode = BoundMode::Exact;
    std::vector<BoundPoint> points;
};

/// Union-bound BER over the SNR grid: averages the analytic pairwise error
/// probability, weighted by bit distance, over all (or sampled) ordered
/// codeword pairs and over n_realizations draws of path geometry and
/// oscillator phases. Exact mode enumerates all Q^MN frames (guarded at
/// 2^10); sampled mode draws n_samples pairs per realization.
BoundReport union_bound(const SystemParams& pr, const Constellation& c, WindowKind window,
                        const std::vector<Real>& snr_db, int n_realizations, BoundMode mode,
                        std::uint64_t seed, int n_samples = 2000);

}  // namespace otsm
