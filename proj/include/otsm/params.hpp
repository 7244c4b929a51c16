// System-level constants for one simulation setup: lattice geometry, channel
// spread limits, phase-noise strength, constellation order and the SNR grid.
// All derived quantities (symbol time, bandwidth, noise level, Doppler limit)
// are computed here so every module agrees on them.
#pragma once

#include "otsm/types.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace otsm {

inline constexpr Real kSpeedOfLight = 299792458.0;

enum class Theta0Mode { Uniform, Fixed };
enum class KmaxMode { Explicit, FromVelocity };
/// How the configured phase-noise number sigma2_phn is interpreted:
/// VarianceDeg2 reads it as a variance in squared degrees (increment
/// std-dev = sqrt(sigma2) degrees); StddevDeg reads it as a std-dev in
/// degrees directly.
enum class PhnUnit { VarianceDeg2, StddevDeg };

struct SystemParams {
    int m = 4;                 // delay bins per frame
    int n = 2;                 // sequency bins per frame (Walsh size)
    Real delta_f = 15e3;       // subcarrier spacing, Hz
    Real f_c = 4e9;            // carrier frequency, Hz
    int q = 2;                 // constellation order
    int p = 2;                 // channel paths
    int l_max = 3;             // maximum integer delay index
    KmaxMode k_max_mode = KmaxMode::Explicit;
    int k_max = 1;             // explicit integer Doppler limit
    Real v_max = 0.0;          // maximum speed, km/h (FromVelocity mode)
    bool fractional_doppler = true;

    Real sigma2_phn = 0.3;     // phase-noise increment strength, degrees
    PhnUnit phn_unit = PhnUnit::VarianceDeg2;
    Theta0Mode theta0_mode = Theta0Mode::Uniform;
    Real theta0_fixed_deg = 0.0;

    std::vector<Real> snr_db = {0, 2, 4, 6, 8, 10, 12, 14};

    int mn() const { return m * n; }
    Real symbol_time() const { return 1.0 / delta_f; }        // T
    Real bandwidth() const { return m * delta_f; }            // B
    Real frame_duration() const { return n * symbol_time(); } // T_f

    /// Wiener increment standard deviation in radians.
    Real phn_sigma_rad() const {
        const Real deg = phn_unit == PhnUnit::VarianceDeg2 ? std::sqrt(sigma2_phn) : sigma2_phn;
        return deg * EIGEN_PI / 180.0;
    }
    Real theta0_fixed_rad() const { return theta0_fixed_deg * EIGEN_PI / 180.0; }

    void validate() const;
};

/// Noise variance for a symbol SNR gamma = 1/N0 given in dB.
inline Real n0_from_snr_db(Real snr_db) { return std::pow(10.0, -snr_db / 10.0); }

/// Integer Doppler limit: the explicit configured value, or derived from the
/// maximum velocity as ceil(nu_max * N * T) with nu_max = f_c * (v/3.6) / c.
inline int doppler_limit(const SystemParams& pr) {
    if (pr.k_max_mode == KmaxMode::Explicit) {
        if (pr.k_max < 0) throw ConfigError("k_max must be >= 0");
        return pr.k_max;
    }
    if (pr.v_max < 0.0) throw ConfigError("v_max must be >= 0");
    if (pr.f_c <= 0.0) throw ConfigError("f_c must be positive to derive k_max from velocity");
    const Real nu_max = pr.f_c * (pr.v_max / 3.6) / kSpeedOfLight;
    return static_cast<int>(std::ceil(nu_max * pr.n * pr.symbol_time()));
}

inline void SystemParams::validate() const {
    if (m < 2) throw ConfigError("M must be >= 2");
    if (!is_power_of_two(n)) throw ConfigError("N must be a power of two, got " + std::to_string(n));
    if (delta_f <= 0.0) throw ConfigError("delta_f must be positive");
    if (q != 2 && q != 4 && q != 16 && q != 64)
        throw ConfigError("unsupported constellation order Q=" + std::to_string(q) +
                          " (supported: 2, 4, 16, 64)");
    if (p < 1) throw ConfigError("P must be >= 1");
    if (l_max < 0 || l_max > m - 1)
        throw ConfigError("l_max must lie in [0, M-1], got " + std::to_string(l_max));
    if (sigma2_phn < 0.0) throw ConfigError("sigma2_phn must be >= 0");
    doppler_limit(*this);  // throws on inconsistent Doppler configuration
    for (Real s : snr_db)
        if (!std::isfinite(s)) throw ConfigError("snr_db grid contains a non-finite value");
}

}  // namespace otsm
