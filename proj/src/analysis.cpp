#include "otsm/analysis.hpp"

#include "otsm/rng.hpp"

#include <bit>
#include <cmath>

namespace otsm {

CMat build_upsilon(int alpha, Real beta, const PhnRealization& phn, const WindowDiagonal& g_tx,
                   const WindowDiagonal& g_rx, const RMat& walsh) {
    const int mn = static_cast<int>(phn.theta.size());
    if (walsh.rows() * g_tx.size() != mn || walsh.rows() * g_rx.size() != mn)
        throw ConfigError("build_upsilon: dimension mismatch");
    const RMat kron_tx = apply_kron(walsh, g_tx.g, RMat::Identity(mn, mn));
    CMat b(mn, mn);
    for (int i = 0; i < mn; ++i) {
        const int src = ((i - alpha) % mn + mn) % mn;
        const Real ramp = 2.0 * EIGEN_PI * beta * static_cast<Real>(src) / static_cast<Real>(mn);
        const Complex scale =
            Complex(std::cos(phn.theta(i)), std::sin(phn.theta(i))) *
            Complex(std::cos(ramp), std::sin(ramp));
        b.row(i) = scale * kron_tx.row(src);
    }
    return apply_kron(walsh, g_rx.g, b);
}

std::vector<CMat> path_upsilons(const ChannelRealization& ch, const PhnRealization& phn,
                                const WindowDiagonal& g_tx, const WindowDiagonal& g_rx,
                                const RMat& walsh) {
    std::vector<CMat> ups;
    ups.reserve(ch.taps.size());
    for (const PathTap& tap : ch.taps)
        ups.push_back(build_upsilon(tap.alpha(), tap.beta(), phn, g_tx, g_rx, walsh));
    return ups;
}

CMat codeword_matrix(const CVec& x, const std::vector<CMat>& upsilons) {
    if (upsilons.empty()) throw ConfigError("codeword_matrix: no path operators");
    CMat sigma(x.size(), static_cast<Eigen::Index>(upsilons.size()));
    for (std::size_t p = 0; p < upsilons.size(); ++p) sigma.col(static_cast<Eigen::Index>(p)) = upsilons[p] * x;
    return sigma;
}

DistanceSpectrum spectrum_from_sigma(const CMat& sigma_e, Real tol, const CVec& h_mean) {
    DistanceSpectrum spec;
    spec.xi = sigma_e.adjoint() * sigma_e;
    const Eigen::Index p = spec.xi.rows();
    Eigen::SelfAdjointEigenSolver<CMat> es(spec.xi);
    if (es.info() != Eigen::Success) throw ConfigError("spectrum: eigensolver failed");
    // Eigen returns ascending order; store descending.
    spec.lambda = es.eigenvalues().reverse();
    CMat vectors(p, p);
    for (Eigen::Index i = 0; i < p; ++i) vectors.col(i) = es.eigenvectors().col(p - 1 - i);

    const Real lmax = spec.lambda.size() ? std::max(spec.lambda(0), 0.0) : 0.0;
    spec.rank = 0;
    for (Eigen::Index i = 0; i < p; ++i)
        if (spec.lambda(i) > tol * lmax && spec.lambda(i) > 0.0) ++spec.rank;

    spec.varsigma = CVec::Zero(p);
    if (h_mean.size()) {
        if (h_mean.size() != p) throw ConfigError("spectrum: tap mean length mismatch");
        spec.varsigma = vectors.adjoint() * h_mean;
    }
    spec.ricean_xi = spec.varsigma.cwiseAbs2();
    return spec;
}

DistanceSpectrum gram_and_spectrum(const CVec& e, const std::vector<CMat>& upsilons, Real tol,
                                   const CVec& h_mean) {
    if (e.cwiseAbs().maxCoeff() == 0.0)
        throw ConfigError("gram_and_spectrum: zero error vector (pairwise term undefined)");
    return spectrum_from_sigma(codeword_matrix(e, upsilons), tol, h_mean);
}

Real quadratic_eta(const CVec& h, const DistanceSpectrum& spec) {
    return (h.adjoint() * spec.xi * h)(0, 0).real();
}

Real cpep(Real eta, Real n0) {
    if (eta < 0.0 || !(n0 > 0.0)) throw ConfigError("cpep: requires eta >= 0 and N0 > 0");
    return 0.5 * std::exp(-eta / (4.0 * n0));
}

Real upep(const DistanceSpectrum& spec, int p, Real n0) {
    if (!(n0 > 0.0) || p < 1) throw ConfigError("upep: requires N0 > 0 and P >= 1");
    Real value = 0.5;
    for (int i = 0; i < spec.rank; ++i) {
        const Real ratio = spec.lambda(i) / (4.0 * p * n0);
        value *= std::exp(-spec.ricean_xi(i) * ratio / (1.0 + ratio)) / (1.0 + ratio);
    }
    return value;
}

Real upep_high_snr(const DistanceSpectrum& spec, int p, Real n0) {
    if (!(n0 > 0.0) || p < 1) throw ConfigError("upep_high_snr: requires N0 > 0 and P >= 1");
    Real denom = 2.0;
    for (int i = 0; i < spec.rank; ++i) {
        if (spec.ricean_xi(i) > 1e-15)
            throw ConfigError("upep_high_snr: valid for zero-mean (Rayleigh) taps only");
        denom *= spec.lambda(i);
    }
    return std::pow(4.0 * p * n0, spec.rank) / denom;
}

namespace {

// All Q^MN candidate frames as symbol columns; index digits are per-symbol
// bit patterns, so bit distance between candidates is a popcount of the
// index XOR.
CMat enumerate_frames(const Constellation& c, int mn, std::uint64_t count) {
    CMat frames(mn, static_cast<Eigen::Index>(count));
    const int bps = c.bits_per_symbol;
    for (std::uint64_t idx = 0; idx < count; ++idx)
        for (int s = 0; s < mn; ++s)
            frames(s, static_cast<Eigen::Index>(idx)) =
                c.point(static_cast<int>((idx >> (s * bps)) & ((1u << bps) - 1)));
    return frames;
}

}  // namespace

BoundReport union_bound(const SystemParams& pr, const Constellation& c, WindowKind window,
                        const std::vector<Real>& snr_db, int n_realizations, BoundMode mode,
                        std::uint64_t seed, int n_samples) {
    pr.validate();
    if (n_realizations < 1) throw ConfigError("union_bound: n_realizations must be >= 1");
    if (snr_db.empty()) throw ConfigError("union_bound: empty SNR grid");
    const int mn = pr.mn();
    const int bps = c.bits_per_symbol;
    const std::uint64_t total_bits = static_cast<std::uint64_t>(bps) * mn;  // L
    if (mode == BoundMode::Exact && total_bits > 10)
        throw InfeasibleError("union_bound: exact enumeration needs Q^MN <= 2^10 (L = " +
                              std::to_string(total_bits) + "); use sampled mode");
    if (mode == BoundMode::Sampled && n_samples < 2)
        throw ConfigError("union_bound: sampled mode needs n_samples >= 2");
    if (total_bits > 1000)
        throw InfeasibleError("union_bound: pair-count scale overflows beyond 1000 bits per frame");

    const RMat walsh = walsh_matrix(pr.n);
    const WindowDiagonal g = sample_window(window, pr.m);
    const std::uint64_t n_codewords =
        mode == BoundMode::Exact ? (std::uint64_t(1) << total_bits) : 0;

    // Per (SNR, realization) partial sums.
    RMat acc = RMat::Zero(static_cast<Eigen::Index>(snr_db.size()), n_realizations);
    RMat acc_hs = RMat::Zero(static_cast<Eigen::Index>(snr_db.size()), n_realizations);
    std::vector<Real> n0s(snr_db.size());
    for (std::size_t s = 0; s < snr_db.size(); ++s) n0s[s] = n0_from_snr_db(snr_db[s]);

    const CMat frames =
        mode == BoundMode::Exact ? enumerate_frames(c, mn, n_codewords) : CMat();

    for (int k = 0; k < n_realizations; ++k) {
        RngEngine rng = make_engine(seed, 0xb0, static_cast<std::uint64_t>(k));
        const ChannelRealization ch = draw_channel(pr, rng);
        const PhnRealization phn = draw_phn(pr, rng);
        const std::vector<CMat> ups = path_upsilons(ch, phn, g, g, walsh);

        auto accumulate_pair = [&](const CVec& e, int d, Real weight) {
            if (e.cwiseAbs().maxCoeff() == 0.0) return;
            const DistanceSpectrum spec = spectrum_from_sigma(codeword_matrix(e, ups));
            for (std::size_t s = 0; s < snr_db.size(); ++s) {
                acc(static_cast<Eigen::Index>(s), k) += weight * d * upep(spec, pr.p, n0s[s]);
                acc_hs(static_cast<Eigen::Index>(s), k) +=
                    weight * d * upep_high_snr(spec, pr.p, n0s[s]);
            }
        };

        if (mode == BoundMode::Exact) {
            // Sigma(e) columns are differences of per-path transformed frames.
            std::vector<CMat> v;
            v.reserve(ups.size());
            for (const CMat& u : ups) v.push_back(u * frames);
            CMat sigma(mn, static_cast<Eigen::Index>(ups.size()));
            const Real norm = 1.0 / (static_cast<Real>(total_bits) *
                                     static_cast<Real>(n_codewords));
            for (std::uint64_t i = 0; i < n_codewords; ++i)
                for (std::uint64_t j = i + 1; j < n_codewords; ++j) {
                    for (std::size_t p = 0; p < v.size(); ++p)
                        sigma.col(static_cast<Eigen::Index>(p)) =
                            v[p].col(static_cast<Eigen::Index>(i)) -
                            v[p].col(static_cast<Eigen::Index>(j));
                    const int d = std::popcount(i ^ j);
                    // The spectrum of e and -e coincide; count the ordered
                    // pair both ways.
                    const DistanceSpectrum spec = spectrum_from_sigma(sigma);
                    for (std::size_t s = 0; s < snr_db.size(); ++s) {
                        acc(static_cast<Eigen::Index>(s), k) +=
                            2.0 * norm * d * upep(spec, pr.p, n0s[s]);
                        acc_hs(static_cast<Eigen::Index>(s), k) +=
                            2.0 * norm * d * upep_high_snr(spec, pr.p, n0s[s]);
                    }
                }
        } else {
            // Uniform ordered pairs of distinct random frames; the estimator
            // scales the per-pair mean by (#codewords - 1)/L, the expected
            // number of pairings per transmitted word over the bit count.
            const Real pairs_per_word = std::pow(2.0, static_cast<double>(total_bits)) - 1.0;
            const Real weight = pairs_per_word / (static_cast<Real>(total_bits) * n_samples);
            for (int sample = 0; sample < n_samples; ++sample) {
                const Bits bx = draw_bits(rng, total_bits);
                Bits by = draw_bits(rng, total_bits);
                while (by == bx) by = draw_bits(rng, total_bits);
                int d = 0;
                for (std::size_t b = 0; b < bx.size(); ++b) d += bx[b] != by[b];
                accumulate_pair(map_bits(bx, c) - map_bits(by, c), d, weight);
            }
        }
    }

    BoundReport report;
    report.window = window;
    report.mode = mode;
    const std::uint64_t ordered_pairs =
        mode == BoundMode::Exact ? n_codewords * (n_codewords - 1)
                                 : static_cast<std::uint64_t>(n_samples);
    for (std::size_t s = 0; s < snr_db.size(); ++s) {
        BoundPoint pt;
        pt.snr_db = snr_db[s];
        pt.n0 = n0s[s];
        pt.n_pairs = ordered_pairs;
        pt.n_realizations = n_realizations;
        const auto row = acc.row(static_cast<Eigen::Index>(s));
        const auto row_hs = acc_hs.row(static_cast<Eigen::Index>(s));
        pt.bound = row.mean();
        pt.bound_high_snr = row_hs.mean();
        if (n_realizations > 1) {
            const Real var =
                (row.array() - pt.bound).square().sum() / (n_realizations - 1);
            pt.ci95 = 1.96 * std::sqrt(var / n_realizations);
        }
        report.points.push_back(pt);
    }
    return report;
}

}  // namespace otsm
