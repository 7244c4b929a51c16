// Delay-sequency frame container: the M x N payload matrix and its
// column-major vectorization are two views of the same data.
#pragma once

#include "otsm/constellation.hpp"
#include "otsm/params.hpp"
#include "otsm/types.hpp"

namespace otsm {

inline CVec vec(const CMat& x) { return x.reshaped(); }
inline CMat unvec(const CVec& v, int m, int n) {
    if (v.size() != static_cast<Eigen::Index>(m) * n) throw ConfigError("unvec: length must equal M*N");
    return v.reshaped(m, n);
}

struct DsFrame {
    CMat entries;  // M x N

    static DsFrame from_vector(const CVec& x, int m, int n) { return DsFrame{unvec(x, m, n)}; }
    CVec vectorized() const { return vec(entries); }
    int m() const { return static_cast<int>(entries.rows()); }
    int n() const { return static_cast<int>(entries.cols()); }
};

/// Frame carrying the symbols for a length-L bit vector, filled column-major.
inline DsFrame map_frame(const Bits& bits, const Constellation& c, const SystemParams& pr) {
    if (bits.size() != static_cast<std::size_t>(pr.mn()) * c.bits_per_symbol)
        throw ConfigError("map_frame: expected M*N*log2(Q) bits");
    return DsFrame::from_vector(map_bits(bits, c), pr.m, pr.n);
}

inline Bits demap_frame(const DsFrame& f, const Constellation& c) {
    return demap_hard(f.vectorized(), c);
}

inline DsFrame random_frame(const Constellation& c, const SystemParams& pr, RngEngine& rng) {
    return map_frame(draw_bits(rng, static_cast<std::size_t>(pr.mn()) * c.bits_per_symbol), c, pr);
}

}  // namespace otsm
