// Rate-1/2 regular LDPC coding: seed-deterministic (3,6) construction free
// of length-4 cycles, GF(2) systematic encoding, sum-product decoding, a
// seeded uniform bit interleaver, and the iterative detection-decoding loop
// that couples the soft equalizer with the decoder across OTSM frames.
#pragma once

#include "otsm/constellation.hpp"
#include "otsm/detectors.hpp"
#include "otsm/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace otsm {

struct LdpcCode {
    int n = 0;                                // codeword length
    int checks = 0;                           // parity rows
    int message_len = 0;                      // n - rank
    std::vector<std::vector<int>> check_vars; // per check: variable indices
    std::vector<std::vector<int>> var_checks; // per variable: check indices

    // Systematic encoding realization: free columns carry the message, each
    // pivot column is the GF(2) sum of a fixed subset of free columns.
    std::vector<int> free_cols;
    std::vector<int> pivot_cols;
    std::vector<std::vector<int>> pivot_deps;  // per pivot: indices into free_cols

    Bits encode(const Bits& message) const;
    Bits extract_message(const Bits& codeword) const;
    bool parity_ok(const Bits& codeword) const;
};

/// Regular (3,6) Gallager-style random construction with 4-cycle avoidance;
/// deterministic per seed. Only rate 1/2 is supported.
LdpcCode ldpc_construct(int n_c, Real rate, std::uint64_t seed);

struct DecodeResult {
    Bits bits;
    RVec posterior;
    bool converged = false;
    int iterations = 0;
};

/// Sum-product decoding with early exit on parity satisfaction. max_iter = 0
/// degenerates to channel hard decisions. The convergence flag additionally
/// requires a nonzero posterior, so an all-zero input does not count as a
/// decode merely because the zero word satisfies parity.
DecodeResult spa_decode(const RVec& llrs, const LdpcCode& code, int max_iter);

/// Seeded uniform random permutation of coded-bit indices.
class Interleaver {
  public:
    Interleaver() = default;
    Interleaver(int n, std::uint64_t seed);

    int size() const { return static_cast<int>(perm_.size()); }
    Bits interleave(const Bits& in) const;
    Bits deinterleave(const Bits& in) const;
    RVec interleave(const RVec& in) const;
    RVec deinterleave(const RVec& in) const;
    const std::vector<int>& permutation() const { return perm_; }

  private:
    std::vector<int> perm_;     // output i takes input perm_[i]
    std::vector<int> inverse_;
};

/// Sparse parity-check exchange in alist text format.
void write_alist(const LdpcCode& code, std::ostream& os);
void write_alist_file(const LdpcCode& code, const std::string& path);
LdpcCode read_alist(std::istream& is);
LdpcCode read_alist_file(const std::string& path);

struct TurboResult {
    Bits codeword;
    Bits message;
    bool converged = false;
    int outer_iterations = 0;
};

/// Iterative detection-decoding of one codeword spanning several frames:
/// per outer iteration, the equalizer consumes decoder priors and feeds
/// extrinsic LLRs through the deinterleaver into the sum-product decoder,
/// whose extrinsic output becomes the next detection prior. Bits beyond the
/// codeword (tail-frame padding) are pinned as known zeros. When given,
/// unsat_trace records the unsatisfied-check count after each outer pass.
TurboResult turbo_loop(const std::vector<CVec>& ys, const std::vector<CMat>& hs, Real n0,
                       const LdpcCode& code, const Interleaver& il, const Constellation& c,
                       int t_det, int t_ldpc, std::vector<int>* unsat_trace = nullptr);

}  // namespace otsm
