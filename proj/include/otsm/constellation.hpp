// Unit-energy Gray-mapped constellations (BPSK, QPSK, square 16/64-QAM) and
// bit/symbol conversion. The bit pattern of a symbol, first bit most
// significant, is its index into the point table, so per-symbol bit
// differences are popcounts of index XORs.
#pragma once

#include "otsm/rng.hpp"
#include "otsm/types.hpp"

#include <bit>
#include <cstdint>
#include <vector>

namespace otsm {

using Bits = std::vector<std::uint8_t>;

struct Constellation {
    int q = 0;
    int bits_per_symbol = 0;
    CVec points;  // indexed by bit pattern

    const Complex& point(int pattern) const { return points(pattern); }

    /// Index of the nearest constellation point.
    int nearest(Complex v) const {
        int best = 0;
        Real best_d = std::norm(v - points(0));
        for (int i = 1; i < q; ++i) {
            const Real d = std::norm(v - points(i));
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }
};

namespace detail {

// Gray-coded amplitude for one axis: pattern v over `bits` bits maps to
// level (2^bits - 1) - 2*graydecode(v), giving +max for all-zero bits.
inline int gray_axis_level(std::uint32_t v, int bits) {
    std::uint32_t p = v;
    for (std::uint32_t shift = p >> 1; shift; shift >>= 1) p ^= shift;
    return ((1 << bits) - 1) - 2 * static_cast<int>(p);
}

}  // namespace detail

inline Constellation build_constellation(int q) {
    if (q != 2 && q != 4 && q != 16 && q != 64)
        throw ConfigError("unsupported constellation order Q=" + std::to_string(q) +
                          " (supported: 2, 4, 16, 64)");
    Constellation c;
    c.q = q;
    c.bits_per_symbol = std::countr_zero(static_cast<unsigned>(q));
    c.points.resize(q);
    if (q == 2) {
        c.points(0) = Complex(1.0, 0.0);
        c.points(1) = Complex(-1.0, 0.0);
        return c;
    }
    // Square QAM: first half of the bits picks the in-phase level, second
    // half the quadrature level, each axis independently Gray coded.
    const int axis_bits = c.bits_per_symbol / 2;
    const int levels = 1 << axis_bits;
    // Mean energy of levels {+-1, +-3, ...} on both axes.
    Real axis_ms = 0.0;
    for (int i = 0; i < levels; ++i) {
        const Real a = static_cast<Real>(2 * i + 1 - levels);
        axis_ms += a * a;
    }
    axis_ms /= levels;
    const Real scale = 1.0 / std::sqrt(2.0 * axis_ms);
    for (int v = 0; v < q; ++v) {
        const std::uint32_t vi = static_cast<std::uint32_t>(v) >> axis_bits;
        const std::uint32_t vq = static_cast<std::uint32_t>(v) & ((1u << axis_bits) - 1);
        c.points(v) = scale * Complex(detail::gray_axis_level(vi, axis_bits),
                                      detail::gray_axis_level(vq, axis_bits));
    }
    return c;
}

/// Packs consecutive bits_per_symbol bits (first bit most significant) into
/// symbol indexes; length must divide evenly.
inline std::vector<int> bits_to_patterns(const Bits& bits, const Constellation& c) {
    if (bits.size() % c.bits_per_symbol != 0)
        throw ConfigError("bit vector length must be a multiple of log2(Q)");
    std::vector<int> pat(bits.size() / c.bits_per_symbol);
    for (std::size_t s = 0; s < pat.size(); ++s) {
        int v = 0;
        for (int b = 0; b < c.bits_per_symbol; ++b)
            v = (v << 1) | (bits[s * c.bits_per_symbol + b] & 1);
        pat[s] = v;
    }
    return pat;
}

inline Bits patterns_to_bits(const std::vector<int>& pat, const Constellation& c) {
    Bits bits(pat.size() * c.bits_per_symbol);
    for (std::size_t s = 0; s < pat.size(); ++s)
        for (int b = 0; b < c.bits_per_symbol; ++b)
            bits[s * c.bits_per_symbol + b] =
                static_cast<std::uint8_t>((pat[s] >> (c.bits_per_symbol - 1 - b)) & 1);
    return bits;
}

/// Maps a length-L bit vector to the symbol vector x (one symbol per
/// consecutive log2 Q bits).
inline CVec map_bits(const Bits& bits, const Constellation& c) {
    const std::vector<int> pat = bits_to_patterns(bits, c);
    CVec x(static_cast<Eigen::Index>(pat.size()));
    for (std::size_t s = 0; s < pat.size(); ++s) x(static_cast<Eigen::Index>(s)) = c.point(pat[s]);
    return x;
}

/// Hard demapping by nearest constellation point.
inline Bits demap_hard(const CVec& x, const Constellation& c) {
    std::vector<int> pat(static_cast<std::size_t>(x.size()));
    for (Eigen::Index s = 0; s < x.size(); ++s) pat[static_cast<std::size_t>(s)] = c.nearest(x(s));
    return patterns_to_bits(pat, c);
}

/// Number of differing mapped bits between two symbol vectors drawn from c.
inline int hamming_distance(const CVec& x, const CVec& y, const Constellation& c) {
    if (x.size() != y.size()) throw ConfigError("hamming_distance: size mismatch");
    int d = 0;
    for (Eigen::Index s = 0; s < x.size(); ++s)
        d += std::popcount(static_cast<unsigned>(c.nearest(x(s)) ^ c.nearest(y(s))));
    return d;
}

inline Bits draw_bits(RngEngine& rng, std::size_t count) {
    Bits bits(count);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& b : bits) b = static_cast<std::uint8_t>(coin(rng));
    return bits;
}

}  // namespace otsm
