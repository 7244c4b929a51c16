// Normalized DFT and sequency-ordered Walsh-Hadamard matrices, plus
// Kronecker-structured operator application that never materializes the
// MN x MN product.
#pragma once

#include "otsm/types.hpp"

#include <bit>
#include <cstdint>

namespace otsm {

namespace detail {

/// Maps sequency index k to the natural (Hadamard) row index: bit-reversal
/// of the Gray code of k. Row k of the resulting matrix has exactly k sign
/// changes.
inline std::uint32_t sequency_to_natural(std::uint32_t k, int log2n) {
    std::uint32_t gray = k ^ (k >> 1);
    std::uint32_t rev = 0;
    for (int b = 0; b < log2n; ++b) rev |= ((gray >> b) & 1u) << (log2n - 1 - b);
    return rev;
}

}  // namespace detail

/// N x N sequency-ordered Walsh-Hadamard matrix with entries +-1/sqrt(N).
/// Symmetric and orthogonal, hence self-inverse. N must be a power of two.
template <typename Scalar = Real>
MatX<Scalar> walsh_matrix(int n) {
    if (!is_power_of_two(n)) throw ConfigError("walsh_matrix: N must be a power of two, got " + std::to_string(n));
    const int log2n = std::countr_zero(static_cast<unsigned>(n));
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(n));
    MatX<Scalar> w(n, n);
    for (int k = 0; k < n; ++k) {
        const std::uint32_t nat = detail::sequency_to_natural(static_cast<std::uint32_t>(k), log2n);
        for (int j = 0; j < n; ++j) {
            const bool neg = std::popcount(nat & static_cast<std::uint32_t>(j)) & 1;
            w(k, j) = neg ? -scale : scale;
        }
    }
    return w;
}

/// Normalized M-point DFT matrix, entries e^{-j2*pi*m*l/M}/sqrt(M). Unitary.
inline CMat dft_matrix(int m) {
    if (m < 1) throw ConfigError("dft_matrix: M must be >= 1");
    CMat f(m, m);
    const Real scale = 1.0 / std::sqrt(static_cast<Real>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            const Real phase = -2.0 * EIGEN_PI * static_cast<Real>(r) * static_cast<Real>(c) / static_cast<Real>(m);
            f(r, c) = Complex(std::cos(phase) * scale, std::sin(phase) * scale);
        }
    return f;
}

/// Applies (W (x) diag(g)) to each column of a, where W is N x N and g has
/// length M, via reshape-multiply-reshape: vec(diag(g) X W^T) per column.
/// Cost O(K MN (M+N)) for K columns.
template <typename DerivedA>
MatX<typename DerivedA::Scalar> apply_kron(const RMat& w, const RVec& g,
                                           const Eigen::MatrixBase<DerivedA>& a) {
    using Scalar = typename DerivedA::Scalar;
    const Eigen::Index m = g.size();
    const Eigen::Index n = w.rows();
    if (w.cols() != n) throw ConfigError("apply_kron: W must be square");
    if (a.rows() != m * n) throw ConfigError("apply_kron: vector length must equal M*N");
    MatX<Scalar> out(a.rows(), a.cols());
    for (Eigen::Index col = 0; col < a.cols(); ++col) {
        MatX<Scalar> x = a.col(col).reshaped(m, n);
        x = g.asDiagonal() * x * w.transpose();
        out.col(col) = x.reshaped();
    }
    return out;
}

inline CVec apply_kron_vec(const RMat& w, const RVec& g, const CVec& v) {
    return apply_kron(w, g, v).col(0);
}

/// In-place fast Walsh-Hadamard transform in sequency order, normalized by
/// 1/sqrt(N). Optimization path; correctness is defined by walsh_matrix().
template <typename Scalar>
void fwht_sequency(VecX<Scalar>& v) {
    const Eigen::Index n = v.size();
    if (!is_power_of_two(static_cast<int>(n)))
        throw ConfigError("fwht_sequency: length must be a power of two");
    const int log2n = std::countr_zero(static_cast<unsigned>(n));
    // Natural-order butterfly.
    for (Eigen::Index h = 1; h < n; h <<= 1) {
        for (Eigen::Index i = 0; i < n; i += h << 1) {
            for (Eigen::Index j = i; j < i + h; ++j) {
                const Scalar x = v(j);
                const Scalar y = v(j + h);
                v(j) = x + y;
                v(j + h) = x - y;
            }
        }
    }
    // Permute natural -> sequency and normalize.
    VecX<Scalar> out(n);
    const Real scale = 1.0 / std::sqrt(static_cast<Real>(n));
    for (Eigen::Index k = 0; k < n; ++k)
        out(k) = v(detail::sequency_to_natural(static_cast<std::uint32_t>(k), log2n)) * scale;
    v = std::move(out);
}

}  // namespace otsm
