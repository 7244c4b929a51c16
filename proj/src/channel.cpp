#include "otsm/channel.hpp"

namespace otsm {

CVec PhnRealization::diagonal() const {
    CVec d(theta.size());
    for (Eigen::Index q = 0; q < theta.size(); ++q)
        d(q) = Complex(std::cos(theta(q)), std::sin(theta(q)));
    return d;
}

ChannelRealization draw_channel(const SystemParams& pr, RngEngine& rng) {
    if (pr.p < 1) throw ConfigError("draw_channel: P must be >= 1");
    if (pr.l_max > pr.m - 1) throw ConfigError("draw_channel: l_max must be <= M-1");
    const int kmax = doppler_limit(pr);
    std::uniform_int_distribution<int> delay(0, pr.l_max);
    std::uniform_int_distribution<int> doppler(-kmax, kmax);
    std::uniform_real_distribution<Real> frac(-0.5, 0.5);

    ChannelRealization ch;
    ch.taps.resize(pr.p);
    for (int p = 0; p < pr.p; ++p) {
        PathTap& tap = ch.taps[p];
        tap.h = draw_cn(rng, 1.0 / pr.p);
        tap.l = (p == 0) ? 0 : delay(rng);
        tap.k = doppler(rng);
        tap.kappa = pr.fractional_doppler ? frac(rng) : 0.0;
    }
    return ch;
}

CMat time_domain_channel(const ChannelRealization& ch, int mn) {
    CMat h = CMat::Zero(mn, mn);
    for (const PathTap& tap : ch.taps) {
        if (tap.l < 0 || tap.l >= mn) throw ConfigError("time_domain_channel: delay out of range");
        const Real beta = tap.beta();
        for (int i = 0; i < mn; ++i) {
            const int col = (i - tap.l % mn + mn) % mn;
            const Real phase = 2.0 * EIGEN_PI * beta * static_cast<Real>(col) / static_cast<Real>(mn);
            h(i, col) += tap.h * Complex(std::cos(phase), std::sin(phase));
        }
    }
    return h;
}

CVec apply_time_domain_channel(const ChannelRealization& ch, const CVec& v) {
    const int mn = static_cast<int>(v.size());
    CVec y = CVec::Zero(mn);
    for (const PathTap& tap : ch.taps) {
        const Real beta = tap.beta();
        for (int i = 0; i < mn; ++i) {
            const int col = (i - tap.l % mn + mn) % mn;
            const Real phase = 2.0 * EIGEN_PI * beta * static_cast<Real>(col) / static_cast<Real>(mn);
            y(i) += tap.h * Complex(std::cos(phase), std::sin(phase)) * v(col);
        }
    }
    return y;
}

PhnRealization draw_phn(Real sigma_rad, int mn, Theta0Mode mode, Real theta0_fixed_rad,
                        RngEngine& rng) {
    if (sigma_rad < 0.0) throw ConfigError("draw_phn: sigma must be >= 0");
    PhnRealization phn;
    phn.theta.resize(mn);
    Real theta;
    if (mode == Theta0Mode::Uniform) {
        std::uniform_real_distribution<Real> u(0.0, 2.0 * EIGEN_PI);
        theta = u(rng);
    } else {
        theta = theta0_fixed_rad;
    }
    // normal_distribution requires a strictly positive sigma; zero means a
    // constant phase track.
    std::normal_distribution<Real> increment(0.0, sigma_rad > 0.0 ? sigma_rad : 1.0);
    for (int q = 0; q < mn; ++q) {
        if (q > 0 && sigma_rad > 0.0) theta += increment(rng);
        phn.theta(q) = theta;
    }
    return phn;
}

PhnRealization draw_phn(const SystemParams& pr, RngEngine& rng) {
    return draw_phn(pr.phn_sigma_rad(), pr.mn(), pr.theta0_mode, pr.theta0_fixed_rad(), rng);
}

}  // namespace otsm
