#pragma once

#include <vector>

#include "spacetime/hamiltonian.hpp"
#include "spacetime/markov.hpp"

namespace spacetime {

// Weighted global-clock Feynman-Kitaev construction: one gate per time step,
// a unary clock of T+n+1 states, stationary weights eps/(T+n) away from the
// endpoint and 1-eps on it, and a staggered input check on the ancillas.

struct SequentialGate {
  int p = 0, q = 0;  // 1-based data qubits, p < q
  Gate g;
};

struct WeightedFk {
  int T = 0, n = 0, k = 0;
  double eps = 0.0;
  std::vector<SequentialGate> gates;
  Eigen::VectorXd pi;  // clock weights, length T+n+1
  Mat effective;       // Hamiltonian on the unary-clock sector, dim (T+n+1) 2^n
};

namespace detail {

inline Mat embed_gate(int n, const SequentialGate& sg) {
  const std::int64_t dn = std::int64_t{1} << n;
  Mat u = Mat::Zero(dn, dn);
  for (std::int64_t x = 0; x < dn; ++x) {
    Vec in = Vec::Zero(dn);
    in(x) = 1.0;
    StateVector sv = StateVector::from(in, n);
    sv.apply(sg.g, sg.p, sg.q);
    u.col(x) = sv.amplitudes();
  }
  return u;
}

}  // namespace detail

/// Assemble the effective weighted-FK Hamiltonian H_in + H_prop on the
/// (T+n+1)-state clock basis.  Gates are applied at steps n+1..n+T; the first
/// n steps idle so the staggered input check has one clock value per ancilla.
inline WeightedFk build_weighted_fk(const std::vector<SequentialGate>& gates, int n, int k,
                                    double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Error::Kind::invalid_argument, "eps must be in (0,1)");
  if (k < 0 || k > n) fail(Error::Kind::invalid_argument, "k out of range");
  if (n - k > n) fail(Error::Kind::invalid_argument, "too many ancilla checks");
  WeightedFk w;
  w.T = static_cast<int>(gates.size());
  w.n = n;
  w.k = k;
  w.eps = eps;
  w.gates = gates;
  const int N = w.T + n;
  const std::int64_t dn = std::int64_t{1} << n;
  w.pi.resize(N + 1);
  for (int t = 0; t < N; ++t) w.pi(t) = eps / N;
  w.pi(N) = 1.0 - eps;

  const std::int64_t dim = static_cast<std::int64_t>(N + 1) * dn;
  w.effective = Mat::Zero(dim, dim);
  // staggered input check: ancilla i is checked at clock value i - k - 1
  for (int i = k + 1; i <= n; ++i) {
    const int t = i - k - 1;
    for (std::int64_t x = 0; x < dn; ++x)
      if (x & (std::int64_t{1} << (i - 1))) w.effective(t * dn + x, t * dn + x) += 1.0;
  }
  // Metropolis-weighted propagation, one PSD rank-deficient piece per step
  auto metro = [&](int t, int u) { return 0.25 * std::min(1.0, w.pi(u) / w.pi(t)); };
  for (int t = 1; t <= N; ++t) {
    const double p_dn = metro(t, t - 1), p_up = metro(t - 1, t);
    const double hop = std::sqrt(w.pi(t) / w.pi(t - 1)) * p_dn;
    Mat u = Mat::Identity(dn, dn);
    if (t > n) u = detail::embed_gate(n, gates[t - n - 1]);
    for (std::int64_t x = 0; x < dn; ++x) {
      w.effective(t * dn + x, t * dn + x) += 0.5 * p_dn;
      w.effective((t - 1) * dn + x, (t - 1) * dn + x) += 0.5 * p_up;
    }
    w.effective.block(t * dn, (t - 1) * dn, dn, dn) -= 0.5 * hop * u;
    w.effective.block((t - 1) * dn, t * dn, dn, dn) -= 0.5 * hop * u.adjoint();
  }
  return w;
}

/// The sqrt(pi)-weighted history state for a k-qubit input x (ancillas |0>).
inline Vec weighted_history_state(const WeightedFk& w, std::int64_t logical) {
  const int N = w.T + w.n;
  const std::int64_t dn = std::int64_t{1} << w.n;
  Vec data = Vec::Zero(dn);
  data(logical) = 1.0;  // logical bits sit on the low k qubits
  Vec out = Vec::Zero(static_cast<std::int64_t>(N + 1) * dn);
  for (int t = 0; t <= N; ++t) {
    out.segment(t * dn, dn) = std::sqrt(w.pi(t)) * data;
    if (t >= w.n && t < N) {
      StateVector sv = StateVector::from(data, w.n);
      sv.apply(w.gates[t - w.n].g, w.gates[t - w.n].p, w.gates[t - w.n].q);
      data = sv.amplitudes();
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Qubit-space materialization with a unary domain-wall clock (T+n clock
// qubits after the n data qubits), for cross-checking small instances and for
// the locality audit.  Clock projectors use minimal domain-wall signatures,
// so every term touches at most 3 clock qubits plus the 2-qubit gate.
// ---------------------------------------------------------------------------

struct WfkQubitTerm {
  std::string family;
  std::vector<int> support;  // 0-based global qubits
  SparseC matrix;            // over the full 2^{n+T+n} space
};

inline std::vector<WfkQubitTerm> wfk_qubit_terms(const WeightedFk& w) {
  const int N = w.T + w.n;
  const int total = w.n + N;
  if (total > 24) fail(Error::Kind::cap_exceeded, "qubit-space build limited to 24 qubits");
  const std::int64_t dim = std::int64_t{1} << total;
  std::vector<WfkQubitTerm> out;
  const auto cq = [&](int j) { return w.n + j - 1; };  // clock qubit j, 1-based

  // clock-state bit signatures: |t><t| needs c_t = 1 (t >= 1), c_{t+1} = 0 (t < N)
  auto state_bits = [&](int t) {
    std::vector<std::pair<int, int>> bits;
    if (t >= 1) bits.push_back({cq(t), 1});
    if (t < N) bits.push_back({cq(t + 1), 0});
    return bits;
  };

  auto add_term = [&](const std::string& family, std::vector<Triplet> ts,
                      std::vector<int> support) {
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    out.push_back({family, support, sparse_from_triplets(dim, ts)});
  };

  // domain-wall checks
  for (int j = 1; j < N; ++j) {
    std::vector<Triplet> ts;
    for (std::int64_t x = 0; x < dim; ++x)
      if (!(x & (std::int64_t{1} << cq(j))) && (x & (std::int64_t{1} << cq(j + 1))))
        ts.push_back({static_cast<int>(x), static_cast<int>(x), 1.0});
    add_term("wall", std::move(ts), {cq(j), cq(j + 1)});
  }
  // staggered input checks
  for (int i = w.k + 1; i <= w.n; ++i) {
    const int t = i - w.k - 1;
    const auto bits = state_bits(t);
    std::vector<Triplet> ts;
    std::vector<int> sup = {i - 1};
    for (const auto& [qb, b] : bits) sup.push_back(qb);
    for (std::int64_t x = 0; x < dim; ++x) {
      bool ok = (x & (std::int64_t{1} << (i - 1))) != 0;
      for (const auto& [qb, b] : bits)
        ok = ok && (((x >> qb) & 1) == static_cast<std::uint64_t>(b));
      if (ok) ts.push_back({static_cast<int>(x), static_cast<int>(x), 1.0});
    }
    add_term("init", std::move(ts), std::move(sup));
  }
  // propagation
  auto metro = [&](int t, int u) { return 0.25 * std::min(1.0, w.pi(u) / w.pi(t)); };
  for (int t = 1; t <= N; ++t) {
    const double p_dn = metro(t, t - 1), p_up = metro(t - 1, t);
    const double hop = std::sqrt(w.pi(t) / w.pi(t - 1)) * p_dn;
    // transition t-1 -> t flips c_t with context c_{t-1} = 1, c_{t+1} = 0
    std::vector<std::pair<int, int>> ctx;
    if (t >= 2) ctx.push_back({cq(t - 1), 1});
    if (t < N) ctx.push_back({cq(t + 1), 0});
    std::vector<int> sup = {cq(t)};
    for (const auto& [qb, b] : ctx) sup.push_back(qb);
    const SequentialGate* sg = t > w.n ? &w.gates[t - w.n - 1] : nullptr;
    if (sg) {
      sup.push_back(sg->p - 1);
      sup.push_back(sg->q - 1);
    }
    std::vector<Triplet> ts;
    for (std::int64_t x = 0; x < dim; ++x) {
      bool ok = true;
      for (const auto& [qb, b] : ctx)
        ok = ok && (((x >> qb) & 1) == static_cast<std::uint64_t>(b));
      if (!ok) continue;
      const bool ct = (x >> cq(t)) & 1;
      // diagonal halves
      ts.push_back({static_cast<int>(x), static_cast<int>(x), ct ? 0.5 * p_dn : 0.5 * p_up});
      if (ct) continue;  // emit each hop pair once, from the c_t = 0 side
      const std::int64_t y = x | (std::int64_t{1} << cq(t));
      if (!sg) {
        ts.push_back({static_cast<int>(y), static_cast<int>(x), -0.5 * hop});
        ts.push_back({static_cast<int>(x), static_cast<int>(y), -0.5 * hop});
      } else {
        const std::int64_t bp = std::int64_t{1} << (sg->p - 1), bq = std::int64_t{1} << (sg->q - 1);
        const int col = 2 * ((x & bp) != 0) + ((x & bq) != 0);
        for (int row = 0; row < 4; ++row) {
          if (sg->g.u(row, col) == cplx(0, 0)) continue;
          std::int64_t y2 = y;
          y2 = (row & 2) ? (y2 | bp) : (y2 & ~bp);
          y2 = (row & 1) ? (y2 | bq) : (y2 & ~bq);
          ts.push_back({static_cast<int>(y2), static_cast<int>(x), -0.5 * hop * sg->g.u(row, col)});
          ts.push_back({static_cast<int>(x), static_cast<int>(y2),
                        -0.5 * hop * std::conj(sg->g.u(row, col))});
        }
      }
    }
    add_term("prop", std::move(ts), std::move(sup));
  }
  return out;
}

inline SparseC wfk_qubit_hamiltonian(const WeightedFk& w) {
  const auto terms = wfk_qubit_terms(w);
  SparseC h = terms.front().matrix;
  for (std::size_t i = 1; i < terms.size(); ++i) h = h + terms[i].matrix;
  return h;
}

}  // namespace spacetime
