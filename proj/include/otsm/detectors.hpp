// Frame detectors: exhaustive maximum-likelihood search for bound validation
// and soft-output LMMSE equalization for coded operation. Both operate on the
// dense effective channel of one frame.
#pragma once

#include "otsm/constellation.hpp"
#include "otsm/types.hpp"

#include <cstdint>
#include <optional>

namespace otsm {

inline constexpr Real kLlrClip = 30.0;

struct MldResult {
    CVec x;                   // winning candidate symbols
    std::uint64_t index = 0;  // winning candidate number (bit pattern of the frame)
};

/// Exhaustive ML search over all Q^MN candidate frames. Candidate columns
/// are cached so Monte Carlo loops pay one matrix product per frame.
class MldDetector {
  public:
    MldDetector(const Constellation& c, int mn);

    MldResult detect(const CVec& y, const CMat& h) const;
    std::uint64_t candidate_count() const { return count_; }
    /// Symbols of candidate `index`, decoded from its base-Q digits.
    CVec candidate(std::uint64_t index) const;

  private:
    Constellation c_;
    int mn_ = 0;
    std::uint64_t count_ = 0;
    CMat candidates_;  // MN x count, built when the table fits in memory
};

/// argmin over all Q^MN candidates of ||y - Hx||^2; ties broken by lowest
/// candidate index. Throws InfeasibleError when Q^MN > 2^20.
CVec mld(const CVec& y, const CMat& h, const Constellation& c);

struct SoftOutput {
    CVec xhat;       // posterior symbol means
    RVec variances;  // per-symbol residual variances
    RVec llrs;       // per-bit extrinsic LLRs, log P(b=0)/P(b=1), clipped
};

/// Gaussian prior per transmit symbol.
struct SymbolPrior {
    CVec mean;
    RVec variance;
};

/// Linear MMSE estimate x_hat = mu + D H^H (H D H^H + N0 I)^{-1} (y - H mu)
/// and the diagonal of the posterior error covariance.
SoftOutput lmmse_equalize(const CVec& y, const CMat& h, Real n0, const SymbolPrior& prior);

/// Soft detector: equalizes with priors derived from per-bit LLRs (empty =
/// uninformative), then emits extrinsic bit LLRs through a per-symbol
/// Gaussian likelihood on the equalized estimates.
SoftOutput lmmse(const CVec& y, const CMat& h, Real n0, const Constellation& c,
                 const RVec& prior_llrs = RVec());

/// Symbol-wise Gaussian prior implied by independent per-bit LLRs.
SymbolPrior prior_from_llrs(const RVec& llrs, const Constellation& c, Eigen::Index mn);

}  // namespace otsm
