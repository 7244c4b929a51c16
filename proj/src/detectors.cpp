#include "otsm/detectors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace otsm {

namespace {

constexpr std::uint64_t kMaxSearchBits = 20;    // MLD enumeration guard: Q^MN <= 2^20
constexpr Eigen::Index kCacheEntryLimit = 1 << 22;  // candidate table memory cap
constexpr Eigen::Index kBlockColumns = 4096;
constexpr Real kVarianceFloor = 1e-12;

Real softplus(Real x) { return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0); }

// log prior weight of every constellation point of one symbol given the
// per-bit LLRs (log P(b=0)/P(b=1)); uniform when no LLRs are supplied.
std::vector<Real> point_log_priors(const RVec& llrs, const Constellation& c, Eigen::Index symbol) {
    std::vector<Real> logw(static_cast<std::size_t>(c.q), 0.0);
    if (llrs.size() == 0) return logw;
    for (int a = 0; a < c.q; ++a) {
        Real acc = 0.0;
        for (int b = 0; b < c.bits_per_symbol; ++b) {
            const Real llr = llrs(symbol * c.bits_per_symbol + b);
            const bool bit = (a >> (c.bits_per_symbol - 1 - b)) & 1;
            acc += bit ? -softplus(llr) : -softplus(-llr);
        }
        logw[static_cast<std::size_t>(a)] = acc;
    }
    return logw;
}

Real log_sum_exp(const std::vector<Real>& terms) {
    Real best = -std::numeric_limits<Real>::infinity();
    for (Real t : terms) best = std::max(best, t);
    if (!std::isfinite(best)) return best;
    Real acc = 0.0;
    for (Real t : terms) acc += std::exp(t - best);
    return best + std::log(acc);
}

}  // namespace

MldDetector::MldDetector(const Constellation& c, int mn) : c_(c), mn_(mn) {
    if (mn < 1) throw ConfigError("MldDetector: frame size must be positive");
    const std::uint64_t bits = static_cast<std::uint64_t>(c.bits_per_symbol) * mn;
    if (bits > kMaxSearchBits)
        throw InfeasibleError("MLD search space Q^MN = 2^" + std::to_string(bits) +
                              " exceeds 2^" + std::to_string(kMaxSearchBits) +
                              "; use the LMMSE detector for this geometry");
    count_ = std::uint64_t(1) << bits;
    if (static_cast<Eigen::Index>(count_) * mn_ <= kCacheEntryLimit) {
        candidates_.resize(mn_, static_cast<Eigen::Index>(count_));
        for (std::uint64_t idx = 0; idx < count_; ++idx)
            candidates_.col(static_cast<Eigen::Index>(idx)) = candidate(idx);
    }
}

CVec MldDetector::candidate(std::uint64_t index) const {
    CVec x(mn_);
    const int bps = c_.bits_per_symbol;
    for (int s = 0; s < mn_; ++s)
        x(s) = c_.point(static_cast<int>((index >> (s * bps)) & ((std::uint64_t(1) << bps) - 1)));
    return x;
}

MldResult MldDetector::detect(const CVec& y, const CMat& h) const {
    if (y.size() != mn_ || h.rows() != mn_ || h.cols() != mn_)
        throw ConfigError("mld: dimension mismatch");
    Real best = std::numeric_limits<Real>::infinity();
    std::uint64_t best_idx = 0;
    CMat block;
    for (std::uint64_t start = 0; start < count_; start += kBlockColumns) {
        const Eigen::Index cols =
            static_cast<Eigen::Index>(std::min<std::uint64_t>(kBlockColumns, count_ - start));
        const CMat* cand = &candidates_;
        Eigen::Index offset = static_cast<Eigen::Index>(start);
        if (candidates_.size() == 0) {
            block.resize(mn_, cols);
            for (Eigen::Index j = 0; j < cols; ++j) block.col(j) = candidate(start + j);
            cand = &block;
            offset = 0;
        }
        const CMat hx = h * cand->middleCols(offset, cols);
        for (Eigen::Index j = 0; j < cols; ++j) {
            const Real dist = (y - hx.col(j)).squaredNorm();
            if (dist < best) {
                best = dist;
                best_idx = start + j;
            }
        }
    }
    return MldResult{candidate(best_idx), best_idx};
}

CVec mld(const CVec& y, const CMat& h, const Constellation& c) {
    return MldDetector(c, static_cast<int>(y.size())).detect(y, h).x;
}

SoftOutput lmmse_equalize(const CVec& y, const CMat& h, Real n0, const SymbolPrior& prior) {
    const Eigen::Index mn = y.size();
    if (h.rows() != mn || h.cols() != mn) throw ConfigError("lmmse: dimension mismatch");
    if (prior.mean.size() != mn || prior.variance.size() != mn)
        throw ConfigError("lmmse: prior size mismatch");
    if (!(n0 > 0.0)) throw ConfigError("lmmse: N0 must be positive");
    if (h.cwiseAbs().maxCoeff() == 0.0)
        throw ConfigError("lmmse: channel matrix is identically zero (window nulls the link)");

    CMat s = h * prior.variance.asDiagonal() * h.adjoint();
    s.diagonal().array() += n0;
    const Eigen::LLT<CMat> llt(s);
    if (llt.info() != Eigen::Success)
        throw ConfigError("lmmse: covariance factorization failed (singular system)");

    SoftOutput out;
    out.xhat = prior.mean +
               prior.variance.asDiagonal() * (h.adjoint() * llt.solve(y - h * prior.mean));
    // Posterior error variance: D - D^2 diag(H^H S^{-1} H), with the
    // quadratic form taken column-wise on L^{-1} H.
    const CMat b = llt.matrixL().solve(h);
    out.variances.resize(mn);
    for (Eigen::Index i = 0; i < mn; ++i) {
        const Real d = prior.variance(i);
        out.variances(i) = std::max(d - d * d * b.col(i).squaredNorm(), kVarianceFloor);
    }
    return out;
}

SymbolPrior prior_from_llrs(const RVec& llrs, const Constellation& c, Eigen::Index mn) {
    SymbolPrior prior;
    prior.mean = CVec::Zero(mn);
    prior.variance = RVec::Ones(mn);
    if (llrs.size() == 0) return prior;
    if (llrs.size() != mn * c.bits_per_symbol) throw ConfigError("prior LLR length mismatch");
    for (Eigen::Index s = 0; s < mn; ++s) {
        const std::vector<Real> logw = point_log_priors(llrs, c, s);
        Real wmax = -std::numeric_limits<Real>::infinity();
        for (Real lw : logw) wmax = std::max(wmax, lw);
        Real norm = 0.0;
        Complex mean = 0.0;
        Real m2 = 0.0;
        for (int a = 0; a < c.q; ++a) {
            const Real w = std::exp(logw[static_cast<std::size_t>(a)] - wmax);
            norm += w;
            mean += w * c.point(a);
            m2 += w * std::norm(c.point(a));
        }
        mean /= norm;
        m2 /= norm;
        prior.mean(s) = mean;
        prior.variance(s) = std::max(m2 - std::norm(mean), 0.0);
    }
    return prior;
}

SoftOutput lmmse(const CVec& y, const CMat& h, Real n0, const Constellation& c,
                 const RVec& prior_llrs) {
    const Eigen::Index mn = y.size();
    SoftOutput out = lmmse_equalize(y, h, n0, prior_from_llrs(prior_llrs, c, mn));

    const int bps = c.bits_per_symbol;
    out.llrs.resize(mn * bps);
    std::vector<Real> zero_set, one_set;
    for (Eigen::Index s = 0; s < mn; ++s) {
        const std::vector<Real> logw = point_log_priors(prior_llrs, c, s);
        // Gaussian likelihood of each point at the equalized estimate.
        std::vector<Real> metric(static_cast<std::size_t>(c.q));
        for (int a = 0; a < c.q; ++a)
            metric[static_cast<std::size_t>(a)] =
                logw[static_cast<std::size_t>(a)] -
                std::norm(out.xhat(s) - c.point(a)) / out.variances(s);
        for (int b = 0; b < bps; ++b) {
            zero_set.clear();
            one_set.clear();
            for (int a = 0; a < c.q; ++a) {
                const bool bit = (a >> (bps - 1 - b)) & 1;
                (bit ? one_set : zero_set).push_back(metric[static_cast<std::size_t>(a)]);
            }
            const Real posterior = log_sum_exp(zero_set) - log_sum_exp(one_set);
            const Real prior = prior_llrs.size() ? prior_llrs(s * bps + b) : 0.0;
            Real extrinsic = posterior - prior;
            if (std::isnan(extrinsic)) extrinsic = 0.0;
            out.llrs(s * bps + b) = std::clamp(extrinsic, -kLlrClip, kLlrClip);
        }
    }
    return out;
}

}  // namespace otsm
