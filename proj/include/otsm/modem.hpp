// Transmit chain, noisy propagation, receive chain, and assembly of the
// effective delay-sequency domain channel matrix. The chain never inserts
// guard samples: inter-block leakage wraps cyclically by construction.
#pragma once

#include "otsm/channel.hpp"
#include "otsm/frame.hpp"
#include "otsm/transforms.hpp"
#include "otsm/windows.hpp"

namespace otsm {

struct TxSignal {
    CVec s;  // MN time-domain samples at interval 1/(M delta_f)
};

/// Dense effective channel with its factors retained, so analysis code can
/// rebuild per-path operators without re-deriving window/transform products.
struct EffectiveChannel {
    CMat h;
    ChannelRealization ch;
    PhnRealization phn;
    WindowDiagonal g_tx;
    WindowDiagonal g_rx;
    RMat walsh;
};

/// s = (W (x) G_tx) x.
TxSignal modulate(const DsFrame& frame, const RMat& walsh, const WindowDiagonal& g_tx);

/// r = Theta H_T s + n with n ~ CN(0, N0 I).
CVec propagate(const TxSignal& tx, const ChannelRealization& ch, const PhnRealization& phn,
               Real n0, RngEngine& rng);

/// y = (W (x) G_rx) r.
CVec demodulate(const CVec& r, const RMat& walsh, const WindowDiagonal& g_rx);

/// H = (W (x) G_rx) Theta H_T (W (x) G_tx), dense.
EffectiveChannel effective_channel(const ChannelRealization& ch, const PhnRealization& phn,
                                   const WindowDiagonal& g_tx, const WindowDiagonal& g_rx,
                                   const RMat& walsh);

}  // namespace otsm
