// Reproducible randomness: every stochastic operation takes an engine that
// was derived from an explicit root seed. Substreams are derived by mixing
// the root seed with stream labels, so Monte Carlo trials can be scheduled
// in any order (or in parallel) and still reproduce bit-for-bit.
#pragma once

#include "otsm/types.hpp"

#include <cstdint>
#include <random>

namespace otsm {

namespace detail {
// SplitMix64 finalizer; used purely as a seed mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d49d35aceb7917ULL;
    return z ^ (z >> 31);
}
}  // namespace detail

using RngEngine = std::mt19937_64;

/// Derives a deterministic child seed from a root seed and up to three
/// stream labels (e.g. SNR index, trial index, purpose tag).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t s = detail::mix64(root);
    s = detail::mix64(s ^ detail::mix64(a ^ 0x517cc1b727220a95ULL));
    s = detail::mix64(s ^ detail::mix64(b ^ 0x6c62272e07bb0142ULL));
    s = detail::mix64(s ^ detail::mix64(c ^ 0x2f0ed3f6a1b8f0aaULL));
    return s;
}

inline RngEngine make_engine(std::uint64_t root, std::uint64_t a = 0, std::uint64_t b = 0,
                             std::uint64_t c = 0) {
    return RngEngine(derive_seed(root, a, b, c));
}

/// One sample of a circularly-symmetric complex Gaussian CN(0, variance).
inline Complex draw_cn(RngEngine& rng, Real variance) {
    std::normal_distribution<Real> gauss(0.0, std::sqrt(variance / 2.0));
    return {gauss(rng), gauss(rng)};
}

/// Vector of i.i.d. CN(0, variance) samples.
inline CVec draw_cn_vector(RngEngine& rng, Eigen::Index n, Real variance) {
    std::normal_distribution<Real> gauss(0.0, std::sqrt(variance / 2.0));
    CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return v;
}

}  // namespace otsm
