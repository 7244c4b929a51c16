// Pulse-shaping window family: closed-form continuous evaluation over the
// support [0, T0] and sampling to the per-subsymbol diagonal used by the
// transmit/receive chains. T0 = (M-1)T/M, so the last of the M samples sits
// exactly on the trailing edge of the support.
#pragma once

#include "otsm/types.hpp"

#include <cmath>
#include <string>

namespace otsm {

enum class WindowKind { Rectangular, Hamming, Hanning, Blackman, BartlettHann };

inline const char* window_name(WindowKind kind) {
    switch (kind) {
        case WindowKind::Rectangular: return "rect";
        case WindowKind::Hamming: return "hamming";
        case WindowKind::Hanning: return "hanning";
        case WindowKind::Blackman: return "blackman";
        case WindowKind::BartlettHann: return "bartlett-hann";
    }
    return "?";
}

inline WindowKind parse_window(const std::string& name) {
    if (name == "rect" || name == "rectangular") return WindowKind::Rectangular;
    if (name == "hamming") return WindowKind::Hamming;
    if (name == "hanning" || name == "hann") return WindowKind::Hanning;
    if (name == "blackman") return WindowKind::Blackman;
    if (name == "bartlett-hann" || name == "bartletthann") return WindowKind::BartlettHann;
    throw ConfigError("unknown window kind: '" + name +
                      "' (expected rect|hamming|hanning|blackman|bartlett-hann)");
}

/// Window value at time t for support [0, T0]; exactly zero outside the
/// support, endpoints included in it.
template <typename Scalar = Real>
Scalar eval_window(WindowKind kind, Scalar t, Scalar t0) {
    if (!(t0 > Scalar(0))) throw ConfigError("eval_window: T0 must be positive");
    if (t < Scalar(0) || t > t0) return Scalar(0);
    const Scalar u = t / t0;
    constexpr Scalar two_pi = Scalar(2) * Scalar(EIGEN_PI);
    Scalar v = Scalar(0);
    switch (kind) {
        case WindowKind::Rectangular: return Scalar(1);
        case WindowKind::Hamming: v = Scalar(0.54) - Scalar(0.46) * std::cos(two_pi * u); break;
        case WindowKind::Hanning: v = Scalar(0.5) - Scalar(0.5) * std::cos(two_pi * u); break;
        case WindowKind::Blackman:
            v = Scalar(0.42) - Scalar(0.5) * std::cos(two_pi * u) +
                Scalar(0.08) * std::cos(Scalar(2) * two_pi * u);
            break;
        case WindowKind::BartlettHann: {
            const Scalar up = u - Scalar(0.5);
            v = Scalar(0.62) - Scalar(0.48) * std::abs(up) + Scalar(0.38) * std::cos(two_pi * up);
            break;
        }
    }
    // All five shapes are nonnegative on the support; edge values that are
    // exact zeros can round to tiny negatives, which would leak sign flips
    // into otherwise nonnegative diagonals.
    return std::max(Scalar(0), v);
}

/// The M window samples g(mT/M), m = 0..M-1, as a diagonal. The support
/// duration T0 and kind are retained for waveform synthesis and diagnostics.
struct WindowDiagonal {
    RVec g;
    Real t0 = 0.0;
    WindowKind kind = WindowKind::Rectangular;

    Eigen::Index size() const { return g.size(); }
    /// True when every sample is zero, which nulls the link entirely
    /// (e.g. Hanning with M = 2: both samples land on window zeros).
    bool degenerate() const { return (g.array() == 0.0).all(); }
};

/// normalize rescales to unit mean sample power, for experiments that want
/// window shape effects separated from the raw transmit-power loss. Off by
/// default: the plain sampled amplitudes are what degrade the channel gains.
inline WindowDiagonal sample_window(WindowKind kind, int m, Real t = 1.0, bool normalize = false) {
    if (m < 2) throw ConfigError("sample_window: M must be >= 2, got " + std::to_string(m));
    if (!(t > 0.0)) throw ConfigError("sample_window: T must be positive");
    WindowDiagonal w;
    w.kind = kind;
    w.t0 = (static_cast<Real>(m) - 1.0) * t / static_cast<Real>(m);
    w.g.resize(m);
    for (int i = 0; i < m; ++i) w.g(i) = eval_window(kind, static_cast<Real>(i) * t / static_cast<Real>(m), w.t0);
    if (normalize && !w.degenerate()) w.g *= std::sqrt(static_cast<Real>(m)) / w.g.norm();
    return w;
}

}  // namespace otsm
