#include "otsm/ldpc.hpp"

#include "otsm/rng.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace otsm {

namespace {

constexpr int kColWeight = 3;
constexpr int kRowWeight = 6;
constexpr int kConstructRetries = 100;

// One greedy pass: per column, attach kColWeight distinct checks, never
// letting two checks of the same column share a previous column (which would
// close a 4-cycle). Among admissible checks the fullest are avoided by
// drawing from those with maximal remaining capacity.
bool try_construct(int n, int m, RngEngine& rng, std::vector<std::vector<int>>& check_vars) {
    check_vars.assign(m, {});
    std::vector<int> capacity(m, kRowWeight);
    std::vector<int> picked;
    std::vector<int> pool;
    for (int v = 0; v < n; ++v) {
        picked.clear();
        for (int w = 0; w < kColWeight; ++w) {
            pool.clear();
            int best_cap = 0;
            for (int cidx = 0; cidx < m; ++cidx) {
                if (capacity[cidx] <= 0 || capacity[cidx] < best_cap) continue;
                if (std::find(picked.begin(), picked.end(), cidx) != picked.end()) continue;
                bool closes_cycle = false;
                for (int other : picked) {
                    for (int shared : check_vars[other]) {
                        if (std::find(check_vars[cidx].begin(), check_vars[cidx].end(), shared) !=
                            check_vars[cidx].end()) {
                            closes_cycle = true;
                            break;
                        }
                    }
                    if (closes_cycle) break;
                }
                if (closes_cycle) continue;
                if (capacity[cidx] > best_cap) {
                    best_cap = capacity[cidx];
                    pool.clear();
                }
                pool.push_back(cidx);
            }
            if (pool.empty()) return false;
            std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
            picked.push_back(pool[pick(rng)]);
        }
        for (int cidx : picked) {
            check_vars[cidx].push_back(v);
            --capacity[cidx];
        }
    }
    return true;
}

// Row-reduce the parity matrix over GF(2) with 64-bit words and derive the
// systematic encoding (pivot columns as sums of free columns).
void build_encoder(LdpcCode& code) {
    const int n = code.n;
    const int m = code.checks;
    const int words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(m, std::vector<std::uint64_t>(words, 0));
    for (int c = 0; c < m; ++c)
        for (int v : code.check_vars[c]) rows[c][v / 64] ^= std::uint64_t(1) << (v % 64);

    auto get = [&](int r, int c) { return (rows[r][c / 64] >> (c % 64)) & 1; };

    std::vector<int> pivot_of_row;
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int pivot = -1;
        for (int r = rank; r < m; ++r)
            if (get(r, col)) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < m; ++r) {
            if (r == rank || !get(r, col)) continue;
            for (int w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
        }
        pivot_of_row.push_back(col);
        ++rank;
    }

    code.pivot_cols = pivot_of_row;
    code.message_len = n - rank;
    code.free_cols.clear();
    std::vector<int> free_index(n, -1);
    {
        std::vector<bool> is_pivot(n, false);
        for (int col : code.pivot_cols) is_pivot[col] = true;
        for (int col = 0; col < n; ++col)
            if (!is_pivot[col]) {
                free_index[col] = static_cast<int>(code.free_cols.size());
                code.free_cols.push_back(col);
            }
    }
    code.pivot_deps.assign(rank, {});
    for (int r = 0; r < rank; ++r)
        for (int col = 0; col < n; ++col)
            if (free_index[col] >= 0 && get(r, col)) code.pivot_deps[r].push_back(free_index[col]);
}

}  // namespace

Bits LdpcCode::encode(const Bits& message) const {
    if (message.size() != static_cast<std::size_t>(message_len))
        throw ConfigError("ldpc encode: expected " + std::to_string(message_len) + " message bits");
    Bits cw(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < message.size(); ++i)
        cw[static_cast<std::size_t>(free_cols[i])] = message[i] & 1;
    for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
        std::uint8_t acc = 0;
        for (int fi : pivot_deps[r]) acc ^= message[static_cast<std::size_t>(fi)] & 1;
        cw[static_cast<std::size_t>(pivot_cols[r])] = acc;
    }
    return cw;
}

Bits LdpcCode::extract_message(const Bits& codeword) const {
    if (codeword.size() != static_cast<std::size_t>(n))
        throw ConfigError("ldpc extract: codeword length mismatch");
    Bits msg(static_cast<std::size_t>(message_len));
    for (std::size_t i = 0; i < msg.size(); ++i)
        msg[i] = codeword[static_cast<std::size_t>(free_cols[i])];
    return msg;
}

bool LdpcCode::parity_ok(const Bits& codeword) const {
    for (const auto& vars : check_vars) {
        std::uint8_t acc = 0;
        for (int v : vars) acc ^= codeword[static_cast<std::size_t>(v)] & 1;
        if (acc) return false;
    }
    return true;
}

LdpcCode ldpc_construct(int n_c, Real rate, std::uint64_t seed) {
    if (n_c < 2 * kRowWeight) throw ConfigError("ldpc_construct: codeword length too short");
    if (std::abs(rate - 0.5) > 1e-12)
        throw ConfigError("ldpc_construct: only rate 1/2 is supported");
    if (n_c % 2 != 0) throw ConfigError("ldpc_construct: codeword length must be even");
    const int m = n_c / 2;

    LdpcCode code;
    code.n = n_c;
    code.checks = m;
    bool ok = false;
    for (int attempt = 0; attempt < kConstructRetries && !ok; ++attempt) {
        RngEngine rng = make_engine(seed, 0x1dbc, static_cast<std::uint64_t>(attempt));
        ok = try_construct(n_c, m, rng, code.check_vars);
    }
    if (!ok) throw ConfigError("ldpc_construct: failed to place edges without 4-cycles");

    for (auto& vars : code.check_vars) std::sort(vars.begin(), vars.end());
    code.var_checks.assign(static_cast<std::size_t>(n_c), {});
    for (int c = 0; c < m; ++c)
        for (int v : code.check_vars[c]) code.var_checks[static_cast<std::size_t>(v)].push_back(c);

    build_encoder(code);
    return code;
}

DecodeResult spa_decode(const RVec& llrs, const LdpcCode& code, int max_iter) {
    if (llrs.size() != code.n) throw ConfigError("spa_decode: LLR length mismatch");
    if (max_iter < 0) throw ConfigError("spa_decode: max_iter must be >= 0");

    DecodeResult res;
    res.posterior = llrs;
    auto harden = [&] {
        res.bits.resize(static_cast<std::size_t>(code.n));
        for (int v = 0; v < code.n; ++v)
            res.bits[static_cast<std::size_t>(v)] = res.posterior(v) < 0.0 ? 1 : 0;
    };
    auto decoded = [&] {
        return code.parity_ok(res.bits) && res.posterior.cwiseAbs().maxCoeff() > 0.0;
    };
    if (max_iter == 0) {
        harden();
        res.converged = decoded();
        return res;
    }

    // Check-to-variable messages, one slot per edge of each check.
    std::vector<std::vector<Real>> r_msg(code.check_vars.size());
    for (std::size_t c = 0; c < code.check_vars.size(); ++c)
        r_msg[c].assign(code.check_vars[c].size(), 0.0);

    std::vector<Real> tanh_q, fwd, bwd;
    for (int iter = 1; iter <= max_iter; ++iter) {
        for (std::size_t c = 0; c < code.check_vars.size(); ++c) {
            const auto& vars = code.check_vars[c];
            const std::size_t deg = vars.size();
            tanh_q.resize(deg);
            for (std::size_t e = 0; e < deg; ++e) {
                // Variable-to-check message: posterior minus this edge's
                // previous check message.
                const Real q = res.posterior(vars[e]) - r_msg[c][e];
                tanh_q[e] = std::tanh(0.5 * std::clamp(q, -kLlrClip, kLlrClip));
            }
            fwd.assign(deg + 1, 1.0);
            bwd.assign(deg + 1, 1.0);
            for (std::size_t e = 0; e < deg; ++e) fwd[e + 1] = fwd[e] * tanh_q[e];
            for (std::size_t e = deg; e > 0; --e) bwd[e - 1] = bwd[e] * tanh_q[e - 1];
            for (std::size_t e = 0; e < deg; ++e) {
                const Real prod = std::clamp(fwd[e] * bwd[e + 1], -(1.0 - 1e-15), 1.0 - 1e-15);
                r_msg[c][e] = std::clamp(2.0 * std::atanh(prod), -kLlrClip, kLlrClip);
            }
        }
        res.posterior = llrs;
        for (std::size_t c = 0; c < code.check_vars.size(); ++c)
            for (std::size_t e = 0; e < code.check_vars[c].size(); ++e)
                res.posterior(code.check_vars[c][e]) += r_msg[c][e];
        res.iterations = iter;
        harden();
        if (decoded()) {
            res.converged = true;
            return res;
        }
    }
    res.converged = false;
    return res;
}

Interleaver::Interleaver(int n, std::uint64_t seed) {
    if (n < 1) throw ConfigError("interleaver: size must be positive");
    perm_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm_[static_cast<std::size_t>(i)] = i;
    RngEngine rng = make_engine(seed, 0x11ea);
    for (int i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<int> pick(0, i);
        std::swap(perm_[static_cast<std::size_t>(i)], perm_[static_cast<std::size_t>(pick(rng))]);
    }
    inverse_.resize(perm_.size());
    for (int i = 0; i < n; ++i) inverse_[static_cast<std::size_t>(perm_[static_cast<std::size_t>(i)])] = i;
}

template <typename Seq>
static Seq permute(const Seq& in, const std::vector<int>& perm) {
    if (static_cast<std::size_t>(in.size()) != perm.size())
        throw ConfigError("interleaver: length mismatch");
    Seq out(in.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        out[static_cast<Eigen::Index>(i)] = in[static_cast<Eigen::Index>(perm[i])];
    return out;
}

Bits Interleaver::interleave(const Bits& in) const {
    Bits out(in.size());
    for (std::size_t i = 0; i < perm_.size(); ++i) out[i] = in[static_cast<std::size_t>(perm_[i])];
    return out;
}
Bits Interleaver::deinterleave(const Bits& in) const {
    Bits out(in.size());
    for (std::size_t i = 0; i < inverse_.size(); ++i)
        out[i] = in[static_cast<std::size_t>(inverse_[i])];
    return out;
}
RVec Interleaver::interleave(const RVec& in) const { return permute(in, perm_); }
RVec Interleaver::deinterleave(const RVec& in) const { return permute(in, inverse_); }

void write_alist(const LdpcCode& code, std::ostream& os) {
    std::size_t max_col = 0, max_row = 0;
    for (const auto& cs : code.var_checks) max_col = std::max(max_col, cs.size());
    for (const auto& vs : code.check_vars) max_row = std::max(max_row, vs.size());
    os << code.n << ' ' << code.checks << '\n' << max_col << ' ' << max_row << '\n';
    for (int v = 0; v < code.n; ++v)
        os << code.var_checks[static_cast<std::size_t>(v)].size() << (v + 1 < code.n ? ' ' : '\n');
    for (int c = 0; c < code.checks; ++c)
        os << code.check_vars[static_cast<std::size_t>(c)].size()
           << (c + 1 < code.checks ? ' ' : '\n');
    for (const auto& cs : code.var_checks) {
        for (std::size_t e = 0; e < max_col; ++e)
            os << (e < cs.size() ? cs[e] + 1 : 0) << (e + 1 < max_col ? ' ' : '\n');
    }
    for (const auto& vs : code.check_vars) {
        for (std::size_t e = 0; e < max_row; ++e)
            os << (e < vs.size() ? vs[e] + 1 : 0) << (e + 1 < max_row ? ' ' : '\n');
    }
}

void write_alist_file(const LdpcCode& code, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open for writing: " + path);
    write_alist(code, os);
}

LdpcCode read_alist(std::istream& is) {
    LdpcCode code;
    std::size_t max_col = 0, max_row = 0;
    if (!(is >> code.n >> code.checks >> max_col >> max_row))
        throw ConfigError("alist: malformed header");
    if (code.n <= 0 || code.checks <= 0) throw ConfigError("alist: invalid dimensions");
    std::vector<std::size_t> col_w(static_cast<std::size_t>(code.n)),
        row_w(static_cast<std::size_t>(code.checks));
    for (auto& w : col_w) is >> w;
    for (auto& w : row_w) is >> w;
    code.var_checks.assign(static_cast<std::size_t>(code.n), {});
    code.check_vars.assign(static_cast<std::size_t>(code.checks), {});
    for (int v = 0; v < code.n; ++v)
        for (std::size_t e = 0; e < max_col; ++e) {
            int c = 0;
            if (!(is >> c)) throw ConfigError("alist: truncated column lists");
            if (c > 0) code.var_checks[static_cast<std::size_t>(v)].push_back(c - 1);
        }
    for (int c = 0; c < code.checks; ++c)
        for (std::size_t e = 0; e < max_row; ++e) {
            int v = 0;
            if (!(is >> v)) throw ConfigError("alist: truncated row lists");
            if (v > 0) code.check_vars[static_cast<std::size_t>(c)].push_back(v - 1);
        }
    for (int v = 0; v < code.n; ++v)
        if (code.var_checks[static_cast<std::size_t>(v)].size() != col_w[static_cast<std::size_t>(v)])
            throw ConfigError("alist: column weight mismatch");
    for (int c = 0; c < code.checks; ++c)
        if (code.check_vars[static_cast<std::size_t>(c)].size() != row_w[static_cast<std::size_t>(c)])
            throw ConfigError("alist: row weight mismatch");
    build_encoder(code);
    return code;
}

LdpcCode read_alist_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open alist file: " + path);
    return read_alist(is);
}

TurboResult turbo_loop(const std::vector<CVec>& ys, const std::vector<CMat>& hs, Real n0,
                       const LdpcCode& code, const Interleaver& il, const Constellation& c,
                       int t_det, int t_ldpc, std::vector<int>* unsat_trace) {
    if (ys.empty() || ys.size() != hs.size()) throw ConfigError("turbo_loop: frame list mismatch");
    if (t_det < 1 || t_ldpc < 1) throw ConfigError("turbo_loop: iteration counts must be >= 1");
    if (il.size() != code.n) throw ConfigError("turbo_loop: interleaver span must equal n_c");
    const Eigen::Index frame_bits = ys[0].size() * c.bits_per_symbol;
    const Eigen::Index total = static_cast<Eigen::Index>(ys.size()) * frame_bits;
    if (total < code.n)
        throw ConfigError("turbo_loop: frames carry fewer bits than the codeword");

    TurboResult res;
    RVec prior = RVec::Zero(total);
    // Tail-frame padding bits are known zeros.
    for (Eigen::Index i = code.n; i < total; ++i) prior(i) = kLlrClip;

    DecodeResult dec;
    for (int outer = 1; outer <= t_det; ++outer) {
        RVec det_ext(total);
        for (std::size_t f = 0; f < ys.size(); ++f) {
            const RVec slice = prior.segment(static_cast<Eigen::Index>(f) * frame_bits, frame_bits);
            const SoftOutput so = lmmse(ys[f], hs[f], n0, c, slice);
            det_ext.segment(static_cast<Eigen::Index>(f) * frame_bits, frame_bits) = so.llrs;
        }
        const RVec dec_in = il.deinterleave(det_ext.head(code.n).eval());
        dec = spa_decode(dec_in, code, t_ldpc);
        res.outer_iterations = outer;
        if (unsat_trace) {
            int unsat = 0;
            for (const auto& vars : code.check_vars) {
                std::uint8_t acc = 0;
                for (int v : vars) acc ^= dec.bits[static_cast<std::size_t>(v)] & 1;
                unsat += acc;
            }
            unsat_trace->push_back(unsat);
        }
        if (dec.converged || outer == t_det) break;
        const RVec dec_ext =
            (dec.posterior - dec_in).cwiseMax(-kLlrClip).cwiseMin(kLlrClip);
        prior.head(code.n) = il.interleave(dec_ext);
    }
    res.codeword = dec.bits;
    res.message = code.extract_message(dec.bits);
    res.converged = dec.converged;
    return res;
}

}  // namespace otsm
