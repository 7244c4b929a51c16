#include "otsm/modem.hpp"

namespace otsm {

namespace {

void check_dims(Eigen::Index len, const RMat& walsh, const WindowDiagonal& g, const char* where) {
    if (walsh.rows() != walsh.cols()) throw ConfigError(std::string(where) + ": Walsh matrix must be square");
    if (len != walsh.rows() * g.size())
        throw ConfigError(std::string(where) + ": vector length must equal M*N");
}

}  // namespace

TxSignal modulate(const DsFrame& frame, const RMat& walsh, const WindowDiagonal& g_tx) {
    const CVec x = frame.vectorized();
    check_dims(x.size(), walsh, g_tx, "modulate");
    return TxSignal{apply_kron_vec(walsh, g_tx.g, x)};
}

CVec propagate(const TxSignal& tx, const ChannelRealization& ch, const PhnRealization& phn,
               Real n0, RngEngine& rng) {
    if (n0 < 0.0) throw ConfigError("propagate: N0 must be >= 0");
    if (phn.theta.size() != tx.s.size()) throw ConfigError("propagate: PHN length mismatch");
    CVec r = phn.diagonal().cwiseProduct(apply_time_domain_channel(ch, tx.s));
    if (n0 > 0.0) r += draw_cn_vector(rng, r.size(), n0);
    return r;
}

CVec demodulate(const CVec& r, const RMat& walsh, const WindowDiagonal& g_rx) {
    check_dims(r.size(), walsh, g_rx, "demodulate");
    return apply_kron_vec(walsh, g_rx.g, r);
}

EffectiveChannel effective_channel(const ChannelRealization& ch, const PhnRealization& phn,
                                   const WindowDiagonal& g_tx, const WindowDiagonal& g_rx,
                                   const RMat& walsh) {
    const int mn = static_cast<int>(walsh.rows() * g_tx.size());
    if (phn.theta.size() != mn) throw ConfigError("effective_channel: PHN length mismatch");
    EffectiveChannel ec;
    ec.ch = ch;
    ec.phn = phn;
    ec.g_tx = g_tx;
    ec.g_rx = g_rx;
    ec.walsh = walsh;
    // (W (x) G_tx) as a dense block, then channel + oscillator phases, then
    // the receive operator applied column-wise without materializing it.
    RMat kron_tx = apply_kron(walsh, g_tx.g, RMat::Identity(mn, mn));
    CMat b = phn.diagonal().asDiagonal() * (time_domain_channel(ch, mn) * kron_tx);
    ec.h = apply_kron(walsh, g_rx.g, b);
    return ec;
}

}  // namespace otsm
