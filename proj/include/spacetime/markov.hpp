#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "spacetime/config.hpp"
#include "spacetime/linalg.hpp"
#include "spacetime/tiling.hpp"

namespace spacetime {

/// Row-stochastic reversible chain over an indexed state set.
struct ReversibleChain {
  Eigen::SparseMatrix<double> P;  // row-stochastic
  Eigen::VectorXd pi;             // stationary distribution, sums to 1

  std::int64_t states() const { return P.rows(); }

  /// Rows sum to 1, detailed balance holds, and the support is irreducible.
  void validate(double tol = 1e-12) const {
    const std::int64_t n = states();
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    if (((P * ones) - ones).cwiseAbs().maxCoeff() > tol)
      fail(Error::Kind::numeric, "rows do not sum to 1");
    Eigen::SparseMatrix<double> f = pi.asDiagonal() * P;
    Eigen::SparseMatrix<double> g = Eigen::SparseMatrix<double>(f.transpose()) - f;
    g.makeCompressed();
    for (int k = 0; k < g.nonZeros(); ++k)
      if (std::abs(g.valuePtr()[k]) > tol)
        fail(Error::Kind::numeric, "detailed balance violated");
    // reachability on the nonzero pattern (P^T is column-major over rows of P)
    Eigen::SparseMatrix<double> pt = P.transpose();
    std::vector<bool> seen(n, false);
    std::vector<std::int64_t> stack = {0};
    seen[0] = true;
    std::int64_t count = 1;
    while (!stack.empty()) {
      const std::int64_t i = stack.back();
      stack.pop_back();
      for (Eigen::SparseMatrix<double>::InnerIterator it(pt, i); it; ++it)
        if (!seen[it.row()] && it.value() > 0) {
          seen[it.row()] = true;
          ++count;
          stack.push_back(it.row());
        }
    }
    if (count != n) fail(Error::Kind::numeric, "chain is not irreducible");
  }
};

/// Vertices are valid configurations (sorted order), edges are single-gate
/// toggles.
struct ConfigGraph {
  Architecture arch;
  std::vector<Config> states;
  std::vector<std::pair<int, int>> edges;

  int index_of(const Config& c) const {
    const auto it = std::lower_bound(states.begin(), states.end(), c);
    if (it == states.end() || *it != c)
      fail(Error::Kind::invalid_argument, "configuration not in the graph");
    return static_cast<int>(it - states.begin());
  }
};

inline ConfigGraph config_graph(const Architecture& a, std::uint64_t cap = kDefaultEnumCap) {
  ConfigGraph g;
  g.arch = a;
  g.states = enumerate_valid(a, cap);
  for (std::size_t i = 0; i < g.states.size(); ++i)
    for (const auto& mv : available_moves(a, g.states[i]))
      if (mv.apply) {
        const int j = g.index_of(apply_move(a, g.states[i], mv));
        g.edges.push_back({static_cast<int>(i), j});
      }
  return g;
}

inline Eigen::SparseMatrix<double> graph_laplacian(const ConfigGraph& g) {
  std::vector<Eigen::Triplet<double>> ts;
  for (const auto& [i, j] : g.edges) {
    ts.push_back({i, j, -1.0});
    ts.push_back({j, i, -1.0});
    ts.push_back({i, i, 1.0});
    ts.push_back({j, j, 1.0});
  }
  Eigen::SparseMatrix<double> l(g.states.size(), g.states.size());
  l.setFromTriplets(ts.begin(), ts.end());
  return l;
}

/// P = I - L / ||L|| over a connected configuration graph; pi is uniform.
inline ReversibleChain chain_from_laplacian(const ConfigGraph& g) {
  const std::int64_t n = static_cast<std::int64_t>(g.states.size());
  Eigen::SparseMatrix<double> l = graph_laplacian(g);
  double norm;
  if (n <= 2048) {
    norm = dense_eigenvalues(Eigen::MatrixXd(l)).maxCoeff();
  } else {
    auto res = lanczos_extremal(
        [&](const Vec& x, Vec& y) {
          y = (l * x.real()).cast<cplx>() + cplx(0, 1) * (l * x.imag()).cast<cplx>();
        },
        n, 1, false, 1e-12);
    norm = res.values[0];
  }
  ReversibleChain c;
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  c.P = id - l / norm;
  c.pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  c.validate(1e-10);
  return c;
}

enum class FlipVariant { lazy, resample };

/// States of the edge-flip chain in sorted tiling order, via the
/// configuration bijection.
struct TilingChain {
  ReversibleChain chain;
  std::vector<DyadicTiling> states;
};

/// Edge-flip Markov chain on rank-ell dyadic tilings.  Each step picks one of
/// the 2^ell rectangles and one of its 4 edges uniformly; a flippable
/// segment is picked with probability 2 / 2^{ell+2}.  The lazy variant holds
/// on unflippable picks (uniform stationary distribution); the resample
/// variant conditions on flippable picks (stationary mass proportional to the
/// flippable-edge count).
inline TilingChain edge_flip_chain(int ell, FlipVariant variant,
                                   std::uint64_t cap = kDefaultEnumCap) {
  TilingChain out;
  const Architecture b = build_bitonic_block(ell);
  for (const auto& tau : enumerate_valid(b, cap))
    out.states.push_back(config_to_tiling(ell, tau));
  std::sort(out.states.begin(), out.states.end());
  const std::int64_t n = static_cast<std::int64_t>(out.states.size());
  auto index_of = [&](const DyadicTiling& d) {
    return static_cast<int>(std::lower_bound(out.states.begin(), out.states.end(), d) -
                            out.states.begin());
  };
  std::vector<Eigen::Triplet<double>> ts;
  std::vector<double> degree(n);
  const double pick = 2.0 / (4.0 * static_cast<double>(std::int64_t{1} << ell));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto flips = flippable_edges(out.states[i]);
    degree[i] = static_cast<double>(flips.size());
    double off = 0.0;
    for (const auto& seg : flips) {
      const int j = index_of(flip_edge(out.states[i], seg));
      const double p = variant == FlipVariant::lazy ? pick : 1.0 / degree[i];
      ts.push_back({static_cast<int>(i), j, p});
      off += p;
    }
    if (off < 1.0) ts.push_back({static_cast<int>(i), static_cast<int>(i), 1.0 - off});
  }
  out.chain.P.resize(n, n);
  out.chain.P.setFromTriplets(ts.begin(), ts.end());
  if (variant == FlipVariant::lazy) {
    out.chain.pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  } else {
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(degree.data(), n);
    out.chain.pi = d / d.sum();
  }
  out.chain.validate(1e-12);
  return out;
}

/// Lazy single-toggle chain on the valid configurations of an architecture:
/// each step draws one (gate slot, direction) pair uniformly and holds when
/// the move does not apply.  per_move_prob overrides the uniform pick so the
/// chain can be matched against the edge-flip chain.
inline ReversibleChain toggle_chain(const ConfigGraph& g, double per_move_prob = 0.0) {
  const std::int64_t n = static_cast<std::int64_t>(g.states.size());
  const double slots = static_cast<double>(g.arch.depth()) * (g.arch.n / 2);
  const double p = per_move_prob > 0 ? per_move_prob : 1.0 / (2.0 * slots);
  std::vector<Eigen::Triplet<double>> ts;
  std::vector<double> off(n, 0.0);
  for (const auto& [i, j] : g.edges) {
    ts.push_back({i, j, p});
    ts.push_back({j, i, p});
    off[i] += p;
    off[j] += p;
  }
  for (std::int64_t i = 0; i < n; ++i) ts.push_back({static_cast<int>(i), static_cast<int>(i), 1.0 - off[i]});
  ReversibleChain c;
  c.P.resize(n, n);
  c.P.setFromTriplets(ts.begin(), ts.end());
  c.pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  c.validate(1e-12);
  return c;
}

/// The weighted global-clock Metropolis chain on {0..T+n}: uniform mass
/// eps/(T+n) on all but the endpoint, 1-eps on t = T+n.  Every state proposes
/// each neighbor with probability 1/4 (endpoints hold the unused quarter);
/// a 1/2 endpoint rate would break the detailed balance the construction
/// needs, and the bottleneck conductance 1/(4(T+n)) is unaffected.
inline ReversibleChain weighted_clock_chain(int T, int n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(Error::Kind::invalid_argument, "eps must be in (0,1)");
  const int N = T + n;  // states 0..N
  Eigen::VectorXd pi(N + 1);
  for (int t = 0; t < N; ++t) pi(t) = eps / N;
  pi(N) = 1.0 - eps;
  auto metro = [&](int t, int u) { return 0.25 * std::min(1.0, pi(u) / pi(t)); };
  std::vector<Eigen::Triplet<double>> ts;
  for (int t = 0; t <= N; ++t) {
    double off = 0.0;
    if (t > 0) {
      const double dn = metro(t, t - 1);
      ts.push_back({t, t - 1, dn});
      off += dn;
    }
    if (t < N) {
      const double up = metro(t, t + 1);
      ts.push_back({t, t + 1, up});
      off += up;
    }
    ts.push_back({t, t, 1.0 - off});
  }
  ReversibleChain c;
  c.P.resize(N + 1, N + 1);
  c.P.setFromTriplets(ts.begin(), ts.end());
  c.pi = pi;
  c.validate(1e-12);
  return c;
}

struct GapResult {
  double gap = 0.0;
  double lambda2 = 0.0;
  std::string method;
  double residual = 0.0;
};

/// 1 - lambda_2 of a reversible chain: dense solve of the symmetrized kernel
/// for small chains, deflated Lanczos (tolerance 1e-8, deterministic start)
/// for large ones.
inline GapResult spectral_gap(const ReversibleChain& c, std::int64_t dense_limit = 10000) {
  const std::int64_t n = c.states();
  if (n < 2) fail(Error::Kind::invalid_argument, "gap of a chain with fewer than 2 states");
  Eigen::VectorXd sqrt_pi = c.pi.cwiseSqrt();
  Eigen::SparseMatrix<double> s =
      sqrt_pi.asDiagonal() * c.P * sqrt_pi.cwiseInverse().asDiagonal();
  GapResult r;
  if (n <= dense_limit) {
    // symmetrize exactly against round-off
    Eigen::MatrixXd sd = Eigen::MatrixXd(s);
    sd = 0.5 * (sd + sd.transpose());
    Eigen::VectorXd ev = dense_eigenvalues(sd);
    r.lambda2 = ev(n - 2);
    r.method = "dense";
    r.residual = 0.0;
  } else {
    Vec stat = sqrt_pi.cast<cplx>();
    stat.normalize();
    auto res = lanczos_extremal(
        [&](const Vec& x, Vec& y) {
          Eigen::VectorXd xr = x.real(), xi = x.imag();
          y = ((s * xr).cast<cplx>() + cplx(0, 1) * (s * xi).cast<cplx>());
        },
        n, 1, false, 1e-8, 600, {stat});
    r.lambda2 = res.values[0];
    r.method = "lanczos";
    r.residual = res.residual;
  }
  r.gap = 1.0 - r.lambda2;
  return r;
}

/// Conductance of a cut: Phi(S) = (1/pi(S)) sum_{x in S, y notin S} pi_x P_xy.
inline double conductance(const ReversibleChain& c, const std::vector<int>& cut) {
  std::vector<bool> in(c.states(), false);
  for (int i : cut) in[i] = true;
  double mass = 0.0;
  for (int i : cut) mass += c.pi(i);
  if (cut.empty() || mass >= 1.0 - 1e-15)
    fail(Error::Kind::invalid_argument, "cut must be a proper nonempty subset");
  double flow = 0.0;
  Eigen::SparseMatrix<double> pt = c.P.transpose();
  for (int i : cut)
    for (Eigen::SparseMatrix<double>::InnerIterator it(pt, i); it; ++it)
      if (!in[it.row()]) flow += c.pi(i) * it.value();
  return flow / mass;
}

struct CheegerResult {
  double phi = 0.0;
  double lower_bound = 0.0;  // phi^2 / 2 <= gap
};

/// Minimum conductance over all cuts with pi(S) <= 1/2 (exhaustive, only for
/// chains with at most 20 states) or over a caller-supplied cut family.
inline CheegerResult cheeger_bound(const ReversibleChain& c,
                                   const std::vector<std::vector<int>>& cuts = {}) {
  double phi = std::numeric_limits<double>::infinity();
  if (!cuts.empty()) {
    for (const auto& cut : cuts) {
      double mass = 0.0;
      for (int i : cut) mass += c.pi(i);
      if (mass > 0.5 + 1e-12) continue;
      phi = std::min(phi, conductance(c, cut));
    }
  } else {
    const std::int64_t n = c.states();
    if (n > 20) fail(Error::Kind::invalid_argument, "exhaustive Phi only for <= 20 states");
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
      std::vector<int> cut;
      double massa = 0.0;
      for (std::int64_t i = 0; i < n; ++i)
        if (mask & (std::uint64_t{1} << i)) {
          cut.push_back(static_cast<int>(i));
          massa += c.pi(i);
        }
      if (massa > 0.5 + 1e-12) continue;
      phi = std::min(phi, conductance(c, cut));
    }
  }
  return {phi, phi * phi / 2.0};
}

// ---------------------------------------------------------------------------
// Madras-Randall decomposition
// ---------------------------------------------------------------------------

struct Decomposition {
  std::vector<std::vector<int>> blocks;  // state indices, each sorted
  int theta = 0;                         // max containment multiplicity
};

/// Window blocks of the circular configuration chain: Omega_r holds the
/// configurations whose times fit in [r, r+ell] mod D; Theta is computed
/// exactly by counting containments.
inline Decomposition block_decomposition(const ConfigGraph& g, int ell) {
  if (!g.arch.circular) fail(Error::Kind::invalid_argument, "decomposition needs circular time");
  const int D = g.arch.depth();
  Decomposition dec;
  dec.blocks.assign(D, {});
  std::vector<int> containment(g.states.size(), 0);
  for (std::size_t i = 0; i < g.states.size(); ++i)
    for (int r = 0; r < D; ++r) {
      bool inside = true;
      for (int t : g.states[i])
        if (((t - r) % D + D) % D > ell) {
          inside = false;
          break;
        }
      if (inside) {
        dec.blocks[r].push_back(static_cast<int>(i));
        ++containment[i];
      }
    }
  dec.theta = *std::max_element(containment.begin(), containment.end());
  for (int c : containment)
    if (c == 0) fail(Error::Kind::numeric, "decomposition does not cover the state space");
  return dec;
}

/// Aggregate chain P-bar of Madras-Randall: off-diagonal
/// P(i,j) = pi(Omega_i cap Omega_j) / (Theta pi(Omega_i)); residual mass
/// sits on the diagonal.  Reversible w.r.t. pi-bar_i = pi(Omega_i).
inline ReversibleChain aggregate_chain(const ReversibleChain& c, const Decomposition& dec) {
  const int R = static_cast<int>(dec.blocks.size());
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(R);
  for (int i = 0; i < R; ++i)
    for (int x : dec.blocks[i]) mass(i) += c.pi(x);
  std::vector<Eigen::Triplet<double>> ts;
  for (int i = 0; i < R; ++i) {
    double off = 0.0;
    for (int j = 0; j < R; ++j) {
      if (i == j) continue;
      double inter = 0.0;
      std::size_t a = 0, b = 0;
      while (a < dec.blocks[i].size() && b < dec.blocks[j].size()) {
        if (dec.blocks[i][a] < dec.blocks[j][b])
          ++a;
        else if (dec.blocks[j][b] < dec.blocks[i][a])
          ++b;
        else {
          inter += c.pi(dec.blocks[i][a]);
          ++a;
          ++b;
        }
      }
      if (inter > 0.0) {
        const double p = inter / (dec.theta * mass(i));
        ts.push_back({i, j, p});
        off += p;
      }
    }
    ts.push_back({i, i, 1.0 - off});
  }
  ReversibleChain agg;
  agg.P.resize(R, R);
  agg.P.setFromTriplets(ts.begin(), ts.end());
  agg.pi = mass / mass.sum();
  agg.validate(1e-10);
  return agg;
}

/// Restricted chain P_i: moves of P that stay inside the block; leaked mass
/// joins the diagonal.
inline ReversibleChain restricted_chain(const ReversibleChain& c, const std::vector<int>& block) {
  const int m = static_cast<int>(block.size());
  std::map<int, int> local;
  for (int i = 0; i < m; ++i) local[block[i]] = i;
  std::vector<Eigen::Triplet<double>> ts;
  Eigen::SparseMatrix<double> pt = c.P.transpose();
  Eigen::VectorXd pi(m);
  for (int i = 0; i < m; ++i) {
    double off = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(pt, block[i]); it; ++it) {
      const auto found = local.find(static_cast<int>(it.row()));
      if (found != local.end() && found->second != i) {
        ts.push_back({i, found->second, it.value()});
        off += it.value();
      }
    }
    ts.push_back({i, i, 1.0 - off});
    pi(i) = c.pi(block[i]);
  }
  ReversibleChain r;
  r.P.resize(m, m);
  r.P.setFromTriplets(ts.begin(), ts.end());
  r.pi = pi / pi.sum();
  r.validate(1e-10);
  return r;
}

/// Exact overlap ratio a_{ell-j}^{2^j} / a_ell of consecutive window blocks.
inline Rational overlap_ratio(int ell, int j) {
  if (j < 1 || j >= ell) fail(Error::Kind::invalid_argument, "need 1 <= j < ell");
  return Rational(count_bitonic(ell - j).pow(1u << j), count_bitonic(ell));
}

// ---------------------------------------------------------------------------
// Trajectory sampling
// ---------------------------------------------------------------------------

struct McmcReport {
  std::uint64_t steps = 0;
  double tv_to_uniform = -1.0;           // -1 when the state set was not enumerated
  double autocorr_time = 0.0;            // integrated, of the applied-gate count
  double gap_estimate = 0.0;             // from the autocorrelation time
  std::vector<double> occupancy;         // empirical state frequencies (if enumerated)
  std::vector<std::pair<std::uint64_t, double>> trace;  // (step, observable) subsample
};

/// Lazy toggle-walk on the valid configurations of an architecture.  Each
/// step draws (layer, slot, direction) uniformly and holds when inapplicable.
/// Deterministic under the seed.  When the exact state set fits under the
/// cap, the report includes occupancy frequencies and the exact TV distance
/// to uniform.
inline McmcReport mcmc_run(const Architecture& a, std::uint64_t steps, std::uint64_t seed,
                           bool enumerate_states = true,
                           std::uint64_t cap = kDefaultEnumCap) {
  Rng rng(seed);
  const int D = a.depth();
  const int slots = a.n / 2;
  McmcReport rep;
  rep.steps = steps;

  std::vector<Config> states;
  std::map<Config, std::size_t> index;
  if (enumerate_states) {
    states = enumerate_valid(a, cap);
    for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = i;
    rep.occupancy.assign(states.size(), 0.0);
  }

  Config cur(a.n, 0);
  std::vector<double> observable;
  observable.reserve(steps);
  // summary observable: applied-gate count (= vertical segments under the
  // tiling bijection); for circular time, where "applied" is relative, the
  // clock sum serves instead
  auto summary = [&](const Config& tau) {
    int count = 0;
    if (a.circular) {
      for (int t : tau) count += t;
      return count;
    }
    for (int d = 1; d <= D; ++d)
      for (const auto& [p, q] : a.layers[d - 1])
        count += (tau[p - 1] >= d && tau[q - 1] >= d);
    return count;
  };
  for (std::uint64_t s = 0; s < steps; ++s) {
    const int d = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(D)));
    const int slot = static_cast<int>(rng.below(static_cast<std::uint64_t>(slots)));
    const bool apply = rng.below(2) == 0;
    const auto& [p, q] = a.layers[d - 1][slot];
    const int before = a.circular ? (d - 1) % D : d - 1;
    const int after = a.circular ? d % D : d;
    const int want = apply ? before : after, target = apply ? after : before;
    if (cur[p - 1] == want && cur[q - 1] == want) {
      cur[p - 1] = target;
      cur[q - 1] = target;
    }
    if (enumerate_states) rep.occupancy[index.at(cur)] += 1.0;
    observable.push_back(static_cast<double>(summary(cur)));
    if (s % std::max<std::uint64_t>(1, steps / 1000) == 0)
      rep.trace.push_back({s, observable.back()});
  }

  if (enumerate_states) {
    double tv = 0.0;
    const double u = 1.0 / static_cast<double>(states.size());
    for (double& f : rep.occupancy) {
      f /= static_cast<double>(steps);
      tv += std::abs(f - u);
    }
    rep.tv_to_uniform = tv / 2.0;
  }

  // integrated autocorrelation of the observable, with a standard windowed cut
  const std::uint64_t m = observable.size();
  double mean = 0.0;
  for (double v : observable) mean += v;
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double v : observable) var += (v - mean) * (v - mean);
  var /= static_cast<double>(m);
  double tau_int = 0.5;
  if (var > 1e-12) {
    for (std::uint64_t lag = 1; lag < m / 4; ++lag) {
      double acf = 0.0;
      for (std::uint64_t s = 0; s + lag < m; ++s)
        acf += (observable[s] - mean) * (observable[s + lag] - mean);
      acf /= static_cast<double>(m - lag) * var;
      if (acf < 0.01) break;
      tau_int += acf;
      if (lag > 8 * static_cast<std::uint64_t>(tau_int)) break;
    }
  }
  rep.autocorr_time = tau_int;
  // for a single exponential mode, tau_int = (1 + lambda_2) / (2 (1 - lambda_2))
  rep.gap_estimate = 2.0 / (2.0 * tau_int + 1.0);
  return rep;
}

}  // namespace spacetime
