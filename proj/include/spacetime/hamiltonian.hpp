#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spacetime/config.hpp"
#include "spacetime/linalg.hpp"

namespace spacetime {

/// Register layout of the spacetime code: n data qubits S_i, n flag qubits
/// F_i, and n clock registers C_i of X = (D-2)/2 qubits.  Globally qubit
/// indices are 0-based: S_i -> i-1, F_i -> n+i-1, C_{i,j} -> 2n+(i-1)X+(j-1).
struct RegisterLayout {
  int n = 0;
  int D = 0;
  int X = 0;

  RegisterLayout() = default;
  RegisterLayout(int n_, int D_) : n(n_), D(D_), X((D_ - 2) / 2) {
    if (D < 4 || D % 2 != 0)
      fail(Error::Kind::invalid_argument, "depth must be even and at least 4");
  }

  int total_qubits() const { return n * (X + 2); }
  int data_qubit(int i) const { return i - 1; }
  int flag_qubit(int i) const { return n + i - 1; }
  int clock_qubit(int i, int j) const { return 2 * n + (i - 1) * X + (j - 1); }

  // compact time-register bit layout used by structured states:
  // per qubit i, bit 0 is the flag and bits 1..X the clock
  int time_bits() const { return n * (X + 1); }
  int tb_flag(int i) const { return (i - 1) * (X + 1); }
  int tb_clock(int i, int j) const { return (i - 1) * (X + 1) + j; }
  int tb_to_global(int tb) const {
    const int i = tb / (X + 1) + 1, r = tb % (X + 1);
    return r == 0 ? flag_qubit(i) : clock_qubit(i, r);
  }
};

/// Domain-wall encoding of time t on one register: flag bit plus clock string.
inline std::pair<int, std::vector<int>> encode_time(int t, int X) {
  if (t < 0 || t > 2 * X + 1) fail(Error::Kind::invalid_argument, "time out of range");
  std::vector<int> clock(X, 0);
  int flag = 0;
  if (t <= X) {
    for (int j = 0; j < t; ++j) clock[j] = 1;
  } else {
    flag = 1;
    for (int j = 0; j < 2 * X + 1 - t; ++j) clock[j] = 1;
  }
  return {flag, clock};
}

/// Compact time key of a full configuration.
inline std::uint64_t encode_config(const RegisterLayout& lay, const Config& tau) {
  std::uint64_t key = 0;
  for (int i = 1; i <= lay.n; ++i) {
    auto [flag, clock] = encode_time(tau[i - 1], lay.X);
    if (flag) key |= std::uint64_t{1} << lay.tb_flag(i);
    for (int j = 1; j <= lay.X; ++j)
      if (clock[j - 1]) key |= std::uint64_t{1} << lay.tb_clock(i, j);
  }
  return key;
}

/// |ket><bra| on one compact time bit.
struct BitFactor {
  int tb = 0;
  int ket = 0;
  int bra = 0;
};

/// coeff * (tensor of BitFactors on time bits) * (matrix on data qubits).
struct Summand {
  cplx coeff{1.0, 0.0};
  std::vector<BitFactor> bits;
  std::vector<int> data;  // 1-based data qubit ids (0, 1 or 2 of them)
  Mat op;                 // 2^|data| square matrix; empty means identity
};

struct Term {
  std::string family;
  std::vector<Summand> summands;

  /// Global qubits the term acts on.
  std::vector<int> support(const RegisterLayout& lay) const {
    std::vector<int> s;
    for (const auto& sm : summands) {
      for (const auto& b : sm.bits) s.push_back(lay.tb_to_global(b.tb));
      for (int d : sm.data) s.push_back(lay.data_qubit(d));
    }
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
  }
};

namespace detail {

/// Minimal domain-wall signature of time t on register i: the bits that
/// distinguish |t> from its neighbors given a valid clock.
inline std::vector<BitFactor> time_signature(const RegisterLayout& lay, int i, int t) {
  const int X = lay.X;
  std::vector<BitFactor> bits;
  auto set = [&](int tb, int b) { bits.push_back({tb, b, b}); };
  if (t <= X) {
    set(lay.tb_flag(i), 0);
    if (t >= 1) set(lay.tb_clock(i, t), 1);
    if (t + 1 <= X) set(lay.tb_clock(i, t + 1), 0);
  } else {
    set(lay.tb_flag(i), 1);
    if (2 * X + 1 - t >= 1) set(lay.tb_clock(i, 2 * X + 1 - t), 1);
    if (2 * X + 2 - t <= X) set(lay.tb_clock(i, 2 * X + 2 - t), 0);
  }
  return bits;
}

/// A_{t,t'}[i] as a partial isometry: bits specified by either side project,
/// bits specified by both with different values flip.  Merging both sides
/// keeps every H_t[p,q] an exact projector.
inline std::vector<BitFactor> time_transition(const RegisterLayout& lay, int i, int t_ket,
                                              int t_bra) {
  std::map<int, std::pair<int, int>> merged;  // tb -> (ket, bra)
  for (const auto& b : time_signature(lay, i, t_ket)) merged[b.tb] = {b.ket, -1};
  for (const auto& b : time_signature(lay, i, t_bra)) {
    auto it = merged.find(b.tb);
    if (it == merged.end())
      merged[b.tb] = {-1, b.bra};
    else
      it->second.second = b.bra;
  }
  std::vector<BitFactor> out;
  for (auto& [tb, kb] : merged) {
    auto [k, b] = kb;
    if (k < 0) k = b;
    if (b < 0) b = k;
    out.push_back({tb, k, b});
  }
  return out;
}

inline std::vector<BitFactor> merge_bits(std::vector<BitFactor> a,
                                         const std::vector<BitFactor>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Projector summands for "register i holds a time in the interval [lo, hi]"
/// intersected with one flag phase; empty when the intersection is empty.
inline std::optional<Summand> phase_interval(const RegisterLayout& lay, int i, int lo, int hi,
                                             bool second_phase) {
  const int X = lay.X;
  const int plo = second_phase ? X + 1 : 0, phi = second_phase ? 2 * X + 1 : X;
  lo = std::max(lo, plo);
  hi = std::min(hi, phi);
  if (lo > hi) return std::nullopt;
  Summand s;
  auto set = [&](int tb, int b) { s.bits.push_back({tb, b, b}); };
  if (!second_phase) {
    set(lay.tb_flag(i), 0);
    if (lo >= 1) set(lay.tb_clock(i, lo), 1);       // t >= lo
    if (hi < X) set(lay.tb_clock(i, hi + 1), 0);    // t <= hi
  } else {
    set(lay.tb_flag(i), 1);
    if (hi <= 2 * X) set(lay.tb_clock(i, 2 * X + 1 - hi), 1);  // t <= hi
    if (lo >= X + 2) set(lay.tb_clock(i, 2 * X + 2 - lo), 0);  // t >= lo
  }
  return s;
}

/// B projector onto "register i holds a time in the circular arc [from, to)",
/// decomposed by flag phase into minimal domain-wall checks.
inline std::vector<Summand> arc_projector(const RegisterLayout& lay, int i, int from, int to) {
  const int D = lay.D;
  from = ((from % D) + D) % D;
  to = ((to % D) + D) % D;
  std::vector<std::pair<int, int>> intervals;  // inclusive [lo, hi]
  if (from == to) return {};                   // empty arc
  if (from < to)
    intervals.push_back({from, to - 1});
  else {
    intervals.push_back({from, D - 1});
    if (to > 0) intervals.push_back({0, to - 1});
  }
  std::vector<Summand> out;
  for (const auto& [lo, hi] : intervals)
    for (bool phase : {false, true})
      if (auto s = phase_interval(lay, i, lo, hi, phase)) out.push_back(*s);
  return out;
}

}  // namespace detail

/// H_clock: domain-wall checks |01><01| on adjacent clock qubits.  The
/// register has X qubits, so the adjacent pairs run j = 1..X-1.
inline std::vector<Term> build_h_clock(const RegisterLayout& lay) {
  std::vector<Term> out;
  for (int i = 1; i <= lay.n; ++i)
    for (int j = 1; j + 1 <= lay.X; ++j) {
      Term t;
      t.family = "clock";
      Summand s;
      s.bits = {{lay.tb_clock(i, j), 0, 0}, {lay.tb_clock(i, j + 1), 1, 1}};
      t.summands.push_back(s);
      out.push_back(t);
    }
  return out;
}

/// H_init: ancilla qubits i = k+1..n must be |0> whenever their time register
/// encodes 0 or 2X+1, which on domain walls is exactly "first clock qubit 0".
inline std::vector<Term> build_h_init(const RegisterLayout& lay, int k) {
  if (k < 0 || k > lay.n) fail(Error::Kind::invalid_argument, "k out of range");
  std::vector<Term> out;
  for (int i = k + 1; i <= lay.n; ++i) {
    Term t;
    t.family = "init";
    Summand s;
    s.bits = {{lay.tb_clock(i, 1), 0, 0}};
    s.data = {i};
    s.op = Mat::Zero(2, 2);
    s.op(1, 1) = 1.0;  // projector onto |1> on S_i
    t.summands.push_back(s);
    out.push_back(t);
  }
  return out;
}

/// H_prop: one term per gate slot.  The gate in layer d moves both clocks
/// from t = d-1 to t = d (mod D) and applies the gate to the data pair.
inline std::vector<Term> build_h_prop(const Circuit& c, const RegisterLayout& lay) {
  if (!c.arch.circular) fail(Error::Kind::invalid_argument, "circular architecture required");
  if (c.arch.depth() != lay.D) fail(Error::Kind::invalid_argument, "depth mismatch");
  std::vector<Term> out;
  for (int d = 1; d <= lay.D; ++d)
    for (std::size_t slot = 0; slot < c.arch.layers[d - 1].size(); ++slot) {
      const auto& [p, q] = c.arch.layers[d - 1][slot];
      const Gate& g = c.gates[d - 1][slot];
      const int t = d - 1, t1 = d % lay.D;
      Term term;
      term.family = "prop";
      // diagonal halves, beta-extended so the term squares to itself
      for (int side : {0, 1}) {
        const int tk = side == 0 ? t : t1, tb = side == 0 ? t1 : t;
        Summand s;
        s.coeff = 0.5;
        auto proj = [&](int i) {
          auto bits = detail::time_transition(lay, i, tk, tb);
          for (auto& b : bits) b.bra = b.ket;  // keep the ket-side pattern
          return bits;
        };
        s.bits = detail::merge_bits(proj(p), proj(q));
        term.summands.push_back(s);
      }
      // off-diagonal hops
      Summand fwd;
      fwd.coeff = -0.5;
      fwd.bits = detail::merge_bits(detail::time_transition(lay, p, t1, t),
                                    detail::time_transition(lay, q, t1, t));
      fwd.data = {p, q};
      fwd.op = g.u;
      Summand bwd;
      bwd.coeff = -0.5;
      bwd.bits = detail::merge_bits(detail::time_transition(lay, p, t, t1),
                                    detail::time_transition(lay, q, t, t1));
      bwd.data = {p, q};
      bwd.op = g.u.adjoint();
      term.summands.push_back(fwd);
      term.summands.push_back(bwd);
      out.push_back(term);
    }
  return out;
}

/// H_causal: for each ordered interacting pair (p, q) and each window W
/// between consecutive shared depths, penalize "clock p inside W while clock
/// q is outside".  (Pairing the A window with a B projector onto the same
/// window, as a literal reading of the sum suggests, would penalize exactly
/// the valid configurations.)
inline std::vector<Term> build_h_causal(const Circuit& c, const RegisterLayout& lay) {
  if (!c.arch.circular) fail(Error::Kind::invalid_argument, "circular architecture required");
  std::vector<Term> out;
  const int D = lay.D;
  for (int p = 1; p <= lay.n; ++p)
    for (int q = 1; q <= lay.n; ++q) {
      if (p == q) continue;
      const auto depths = detail::shared_depths(c.arch, std::min(p, q), std::max(p, q));
      if (depths.size() < 2) continue;  // a single window imposes nothing
      for (std::size_t j = 0; j < depths.size(); ++j) {
        const int w_from = depths[j] % D;
        const int w_to = depths[(j + 1) % depths.size()] % D;  // next window start
        const auto outside = detail::arc_projector(lay, q, w_to, w_from);
        if (outside.empty()) continue;
        for (int t = w_from; t != w_to; t = (t + 1) % D) {
          Term term;
          term.family = "causal";
          const auto a_bits = detail::time_signature(lay, p, t);
          for (const auto& b_sum : outside) {
            Summand s;
            s.bits = detail::merge_bits(a_bits, b_sum.bits);
            term.summands.push_back(s);
          }
          out.push_back(term);
        }
      }
    }
  return out;
}

inline std::vector<Term> build_code_hamiltonian(const Circuit& c, const RegisterLayout& lay,
                                                int k) {
  std::vector<Term> all = build_h_clock(lay);
  auto append = [&](std::vector<Term> v) {
    all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  };
  append(build_h_init(lay, k));
  append(build_h_prop(c, lay));
  append(build_h_causal(c, lay));
  return all;
}

// ---------------------------------------------------------------------------
// Structured states: maps from compact time keys to data vectors.  All the
// term families preserve the key-block structure, which keeps history-state
// energies exact and cheap even when 2^{n(X+2)} is out of reach.
// ---------------------------------------------------------------------------

struct StructuredState {
  RegisterLayout lay;
  std::map<std::uint64_t, Vec> amp;  // time key -> data vector (dim 2^n)

  double norm() const {
    double s = 0.0;
    for (const auto& [k, v] : amp) s += v.squaredNorm();
    return std::sqrt(s);
  }
  void scale(cplx f) {
    for (auto& [k, v] : amp) v *= f;
  }
  cplx dot(const StructuredState& o) const {  // <this|o>
    cplx s = 0.0;
    for (const auto& [k, v] : amp) {
      const auto it = o.amp.find(k);
      if (it != o.amp.end()) s += v.dot(it->second);
    }
    return s;
  }
};

namespace detail {

inline void apply_small_op(const Mat& op, const std::vector<int>& qubits, const Vec& in,
                           Vec& out) {
  const int k = static_cast<int>(qubits.size());
  const int dim = 1 << k;
  for (std::int64_t x = 0; x < in.size(); ++x) {
    if (in(x) == cplx(0, 0)) continue;
    int col = 0;
    for (int a = 0; a < k; ++a)
      if (x & (std::int64_t{1} << (qubits[a] - 1))) col |= 1 << (k - 1 - a);
    for (int row = 0; row < dim; ++row) {
      if (op(row, col) == cplx(0, 0)) continue;
      std::int64_t y = x;
      for (int a = 0; a < k; ++a) {
        const std::int64_t bit = std::int64_t{1} << (qubits[a] - 1);
        if (row & (1 << (k - 1 - a)))
          y |= bit;
        else
          y &= ~bit;
      }
      out(y) += op(row, col) * in(x);
    }
  }
}

}  // namespace detail

/// One summand applied to a structured state.
inline void apply_summand(const Summand& s, const StructuredState& in, StructuredState& out) {
  for (const auto& [key, vec] : in.amp) {
    bool match = true;
    std::uint64_t nkey = key;
    for (const auto& b : s.bits) {
      const std::uint64_t bit = std::uint64_t{1} << b.tb;
      if (((key & bit) != 0) != (b.bra != 0)) {
        match = false;
        break;
      }
      if (b.ket)
        nkey |= bit;
      else
        nkey &= ~bit;
    }
    if (!match) continue;
    auto [it, inserted] = out.amp.try_emplace(nkey, Vec::Zero(vec.size()));
    if (s.data.empty()) {
      it->second += s.coeff * vec;
    } else {
      Vec tmp = Vec::Zero(vec.size());
      detail::apply_small_op(s.op, s.data, vec, tmp);
      it->second += s.coeff * tmp;
    }
  }
}

inline StructuredState apply_terms(const std::vector<Term>& terms, const StructuredState& in) {
  StructuredState out;
  out.lay = in.lay;
  for (const auto& t : terms)
    for (const auto& s : t.summands) apply_summand(s, in, out);
  // drop numerically dead blocks
  for (auto it = out.amp.begin(); it != out.amp.end();)
    it = (it->second.norm() < 1e-300) ? out.amp.erase(it) : std::next(it);
  return out;
}

inline cplx expectation(const std::vector<Term>& terms, const StructuredState& psi) {
  return psi.dot(apply_terms(terms, psi));
}

// ---------------------------------------------------------------------------
// Dense / sparse materialization
// ---------------------------------------------------------------------------

/// Global basis index from (time key, data bits): data bits occupy the low n
/// bits and time bits map through the layout.
inline std::int64_t global_index(const RegisterLayout& lay, std::uint64_t key,
                                 std::int64_t data) {
  std::int64_t idx = data;
  for (int tb = 0; tb < lay.time_bits(); ++tb)
    if (key & (std::uint64_t{1} << tb)) idx |= std::int64_t{1} << lay.tb_to_global(tb);
  return idx;
}

inline SparseC to_sparse(const std::vector<Term>& terms, const RegisterLayout& lay) {
  const int tb_total = lay.time_bits();
  const std::int64_t dim = std::int64_t{1} << lay.total_qubits();
  std::vector<Triplet> ts;
  for (const auto& term : terms)
    for (const auto& s : term.summands) {
      // enumerate time keys consistent with the bra side
      std::vector<int> free_bits;
      std::uint64_t bra = 0, braMask = 0, ketSet = 0, ketClear = 0;
      for (const auto& b : s.bits) {
        braMask |= std::uint64_t{1} << b.tb;
        if (b.bra) bra |= std::uint64_t{1} << b.tb;
        if (b.ket)
          ketSet |= std::uint64_t{1} << b.tb;
        else
          ketClear |= std::uint64_t{1} << b.tb;
      }
      for (int tb = 0; tb < tb_total; ++tb)
        if (!(braMask & (std::uint64_t{1} << tb))) free_bits.push_back(tb);
      const std::int64_t combos = std::int64_t{1} << free_bits.size();
      for (std::int64_t m = 0; m < combos; ++m) {
        std::uint64_t key = bra;
        for (std::size_t a = 0; a < free_bits.size(); ++a)
          if (m & (std::int64_t{1} << a)) key |= std::uint64_t{1} << free_bits[a];
        const std::uint64_t nkey = (key | ketSet) & ~ketClear;
        if (s.data.empty()) {
          for (std::int64_t x = 0; x < (std::int64_t{1} << lay.n); ++x)
            ts.push_back({static_cast<int>(global_index(lay, nkey, x)),
                          static_cast<int>(global_index(lay, key, x)), s.coeff});
        } else {
          const int kq = static_cast<int>(s.data.size());
          for (std::int64_t x = 0; x < (std::int64_t{1} << lay.n); ++x) {
            int col = 0;
            for (int a = 0; a < kq; ++a)
              if (x & (std::int64_t{1} << (s.data[a] - 1))) col |= 1 << (kq - 1 - a);
            for (int row = 0; row < (1 << kq); ++row) {
              if (s.op(row, col) == cplx(0, 0)) continue;
              std::int64_t y = x;
              for (int a = 0; a < kq; ++a) {
                const std::int64_t bit = std::int64_t{1} << (s.data[a] - 1);
                if (row & (1 << (kq - 1 - a)))
                  y |= bit;
                else
                  y &= ~bit;
              }
              ts.push_back({static_cast<int>(global_index(lay, nkey, y)),
                            static_cast<int>(global_index(lay, key, x)),
                            s.coeff * s.op(row, col)});
            }
          }
        }
      }
    }
  return sparse_from_triplets(dim, ts);
}

// ---------------------------------------------------------------------------
// History states
// ---------------------------------------------------------------------------

/// Canonical lift of a circular configuration into nonnegative layer counts.
inline Config canonical_lift(const Architecture& a, const Config& tau) {
  const auto f = detail::family_of(a);
  const int D = a.depth();
  const int r = detail::canonical_window(f, tau, D);
  Config lift(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i)
    lift[i] = r + (((tau[i] - r) % D) + D) % D;
  return lift;
}

/// U(tau <- 0) applied to a data vector: gates in the past cone of the lift,
/// layer by layer (any valid schedule gives the same operator).
inline Vec partial_unitary_apply(const Circuit& c, const Config& lift, const Vec& in) {
  StateVector sv = StateVector::from(in, c.arch.n);
  const int D = c.arch.depth();
  const int top = *std::max_element(lift.begin(), lift.end());
  for (int d = 1; d <= top; ++d) {
    const int layer = (d - 1) % D;
    for (std::size_t slot = 0; slot < c.arch.layers[layer].size(); ++slot) {
      const auto& [p, q] = c.arch.layers[layer][slot];
      if (lift[p - 1] >= d && lift[q - 1] >= d)
        sv.apply(c.gates[layer][slot], p, q);
    }
  }
  return sv.amplitudes();
}

/// |Psi> = |V|^{-1/2} sum_tau |tau> (x) U(tau <- 0) |input>.
inline StructuredState history_state(const Circuit& c, const RegisterLayout& lay,
                                     const Vec& input, std::uint64_t cap = kDefaultEnumCap) {
  StructuredState psi;
  psi.lay = lay;
  const auto valid = enumerate_valid(c.arch, cap);
  const double w = 1.0 / std::sqrt(static_cast<double>(valid.size()));
  for (const auto& tau : valid) {
    const Config lift = canonical_lift(c.arch, tau);
    Vec v = partial_unitary_apply(c, lift, input);
    psi.amp[encode_config(lay, tau)] = w * v;
  }
  return psi;
}

inline Vec to_dense(const StructuredState& s) {
  Vec out = Vec::Zero(std::int64_t{1} << s.lay.total_qubits());
  for (const auto& [key, vec] : s.amp)
    for (std::int64_t x = 0; x < vec.size(); ++x)
      out(global_index(s.lay, key, x)) += vec(x);
  return out;
}

/// U(tau <- 0)^dagger applied to a data vector.
inline Vec partial_unitary_adjoint_apply(const Circuit& c, const Config& lift, const Vec& in) {
  StateVector sv = StateVector::from(in, c.arch.n);
  const int D = c.arch.depth();
  const int top = *std::max_element(lift.begin(), lift.end());
  for (int d = top; d >= 1; --d) {
    const int layer = (d - 1) % D;
    for (std::size_t slot = 0; slot < c.arch.layers[layer].size(); ++slot) {
      const auto& [p, q] = c.arch.layers[layer][slot];
      if (lift[p - 1] >= d && lift[q - 1] >= d) {
        Gate inv = c.gates[layer][slot];
        inv.u = inv.u.adjoint().eval();
        if (inv.label != "II") inv.label = "U4";
        sv.apply(inv, p, q);
      }
    }
  }
  return sv.amplitudes();
}

/// W^dagger H_prop W restricted to the valid sector, as a dense matrix over
/// (configuration index, data) pairs with W = sum_tau U(tau <- 0)|tau><tau|.
/// Equals half the combinatorial Laplacian of the configuration graph
/// tensored with the identity.
inline Mat rotated_prop_block(const Circuit& c, const RegisterLayout& lay,
                              std::uint64_t cap = kDefaultEnumCap) {
  const auto valid = enumerate_valid(c.arch, cap);
  const auto prop = build_h_prop(c, lay);
  const std::int64_t dn = std::int64_t{1} << lay.n;
  const std::int64_t dim = static_cast<std::int64_t>(valid.size()) * dn;
  std::vector<Config> lifts;
  std::vector<std::uint64_t> keys;
  std::map<std::uint64_t, int> key_index;
  for (std::size_t v = 0; v < valid.size(); ++v) {
    lifts.push_back(canonical_lift(c.arch, valid[v]));
    keys.push_back(encode_config(lay, valid[v]));
    key_index[keys.back()] = static_cast<int>(v);
  }
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t v = 0; v < valid.size(); ++v)
    for (std::int64_t x = 0; x < dn; ++x) {
      StructuredState basis;
      basis.lay = lay;
      Vec data = Vec::Zero(dn);
      data(x) = 1.0;
      basis.amp[keys[v]] = partial_unitary_apply(c, lifts[v], data);
      const StructuredState image = apply_terms(prop, basis);
      for (const auto& [key, vec] : image.amp) {
        const auto it = key_index.find(key);
        if (it == key_index.end())
          fail(Error::Kind::numeric, "H_prop left the valid sector");
        const Vec back = partial_unitary_adjoint_apply(c, lifts[it->second], vec);
        for (std::int64_t y = 0; y < dn; ++y)
          out(it->second * dn + y, static_cast<std::int64_t>(v) * dn + x) += back(y);
      }
    }
  return out;
}

/// Kitaev's geometrical lemma value Lambda sin^2(theta/2) with
/// Lambda = min(1, Delta_prop).
inline double geometric_lemma_bound(double delta_prop, double cos2_theta) {
  if (delta_prop < 0 || cos2_theta < 0 || cos2_theta > 1)
    fail(Error::Kind::invalid_argument, "inputs must lie in [0,1]");
  const double lambda = std::min(1.0, delta_prop);
  const double theta = std::acos(std::sqrt(cos2_theta));
  const double s = std::sin(theta / 2.0);
  return lambda * s * s;
}

// ---------------------------------------------------------------------------
// Fidelity counting for identity-padded circular products
// ---------------------------------------------------------------------------

/// exact |T_comp| / |T| where T_comp holds the configurations whose canonical
/// window lies entirely inside the last pad_layers identity layers.  When the
/// pad is the whole circle every window qualifies, wrapping ones included.
inline Rational fidelity_counting(int ell, int m, int pad_layers) {
  detail::check_rank(ell);
  const int D = m * ell;
  if (pad_layers < ell)
    fail(Error::Kind::invalid_argument, "pad region shorter than one window");
  if (pad_layers > D) fail(Error::Kind::invalid_argument, "pad exceeds the depth");
  const std::uint64_t windows =
      pad_layers == D ? static_cast<std::uint64_t>(D)
                      : static_cast<std::uint64_t>(pad_layers - ell + 1);
  return Rational(CountInt(windows), CountInt(static_cast<std::uint64_t>(D)));
}

}  // namespace spacetime
