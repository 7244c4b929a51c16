// Doubly-selective channel draws, the time-domain channel matrix built from
// cyclic delay shifts and Doppler phase ramps, and the Wiener phase-noise
// process applied at the receiver oscillator.
#pragma once

#include "otsm/params.hpp"
#include "otsm/rng.hpp"
#include "otsm/types.hpp"

#include <vector>

namespace otsm {

struct PathTap {
    Complex h;        // complex gain
    int l = 0;        // integer delay index (shift count alpha)
    int k = 0;        // integer Doppler index
    Real kappa = 0.0; // fractional Doppler in [-1/2, 1/2]

    int alpha() const { return l; }
    Real beta() const { return static_cast<Real>(k) + kappa; }
};

struct ChannelRealization {
    std::vector<PathTap> taps;
    int paths() const { return static_cast<int>(taps.size()); }
};

struct PhnRealization {
    RVec theta;  // MN oscillator phases, radians

    /// Diagonal of e^{j theta(q)}.
    CVec diagonal() const;
};

/// P path taps: gains CN(0, 1/P); first delay forced to zero, the rest
/// uniform over {0..l_max}; integer Doppler uniform over {-k_max..k_max};
/// fractional Doppler uniform on [-1/2, 1/2] when enabled.
ChannelRealization draw_channel(const SystemParams& pr, RngEngine& rng);

/// Dense MN x MN time-domain channel: sum over taps of gain x cyclic delay
/// shift x Doppler phase ramp diag(e^{j 2 pi beta q / MN}).
CMat time_domain_channel(const ChannelRealization& ch, int mn);

/// Matrix-free application of the same operator.
CVec apply_time_domain_channel(const ChannelRealization& ch, const CVec& v);

/// Wiener phase track: theta(q) = theta(q-1) + N(0, sigma_rad^2), with
/// theta(0) either fixed or uniform on [0, 2 pi).
PhnRealization draw_phn(Real sigma_rad, int mn, Theta0Mode mode, Real theta0_fixed_rad,
                        RngEngine& rng);
PhnRealization draw_phn(const SystemParams& pr, RngEngine& rng);

}  // namespace otsm
