#pragma once

#include <algorithm>
#include <climits>
#include <deque>
#include <unordered_set>
#include <vector>

#include "spacetime/architecture.hpp"
#include "spacetime/bigint.hpp"
#include "spacetime/rng.hpp"

namespace spacetime {

/// Per-qubit time vector.  Linear case: tau_i in [0, D]; circular: [0, D).
using Config = std::vector<int>;

inline constexpr std::uint64_t kDefaultEnumCap = 1000000;

namespace detail {

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : c) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Shared depths of an ordered qubit pair, ascending 1-based layers.
inline std::vector<int> shared_depths(const Architecture& a, int i, int j) {
  std::vector<int> out;
  for (int d = 1; d <= a.depth(); ++d)
    if (a.partner(i, d) == j) out.push_back(d);
  return out;
}

/// Unrolled window start of time t for a sorted shared-depth list: the largest
/// depth <= t, or max(depths) - D when t precedes them all.
inline int unrolled_window_start(const std::vector<int>& depths, int t, int D) {
  int u = depths.back() - D;
  for (int d : depths)
    if (d <= t) u = d;
  return u;
}

}  // namespace detail

/// Causal validity.  A slot at depth d on (i, j) is applied iff both clocks
/// passed it; consistency of the two clocks at every shared depth is exactly
/// the causal-closure condition.  Circular validity quotients the infinite
/// unrolling by D Z^n, which reduces to the same test on circular windows
/// between consecutive shared depths.
inline bool is_valid(const Architecture& a, const Config& tau) {
  if (static_cast<int>(tau.size()) != a.n)
    fail(Error::Kind::invalid_argument, "configuration length mismatch");
  const int D = a.depth();
  for (int t : tau) {
    if (t < 0) return false;
    if (a.circular ? t >= D : t > D) return false;
  }
  if (!a.circular) {
    for (int d = 1; d <= D; ++d)
      for (const auto& [i, j] : a.layers[d - 1])
        if ((tau[i - 1] >= d) != (tau[j - 1] >= d)) return false;
    return true;
  }
  // Circular case: each pair must sit in a common window between consecutive
  // shared depths, and the lift offsets k with tau_hat = tau + D k must be
  // consistent around interaction cycles ("spiral" vectors are pairwise
  // consistent but have no lift and are not in V_infty / D Z^n).
  std::vector<std::vector<std::pair<int, int>>> adj(a.n + 1);  // (j, delta)
  for (int i = 1; i <= a.n; ++i)
    for (int j = i + 1; j <= a.n; ++j) {
      auto depths = detail::shared_depths(a, i, j);
      if (depths.empty()) continue;
      const int ui = detail::unrolled_window_start(depths, tau[i - 1], D);
      const int uj = detail::unrolled_window_start(depths, tau[j - 1], D);
      if ((ui - uj) % D != 0) return false;  // different windows
      const int delta = (ui - uj) / D;       // k_j - k_i
      adj[i].push_back({j, delta});
      adj[j].push_back({i, -delta});
    }
  std::vector<int> k(a.n + 1, INT_MIN);
  for (int root = 1; root <= a.n; ++root) {
    if (k[root] != INT_MIN) continue;
    k[root] = 0;
    std::vector<int> stack = {root};
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (const auto& [j, delta] : adj[i]) {
        if (k[j] == INT_MIN) {
          k[j] = k[i] + delta;
          stack.push_back(j);
        } else if (k[j] != k[i] + delta) {
          return false;
        }
      }
    }
  }
  return true;
}

struct Move {
  int layer = 0;   // 1-based depth
  int slot = 0;    // pair index within the layer
  bool apply = true;

  bool operator==(const Move& o) const {
    return layer == o.layer && slot == o.slot && apply == o.apply;
  }
};

/// All single-gate toggles applicable to a valid configuration, in a fixed
/// deterministic order (layer, slot, apply-before-unapply).
inline std::vector<Move> available_moves(const Architecture& a, const Config& tau) {
  if (!is_valid(a, tau))
    fail(Error::Kind::invalid_argument, "available_moves on invalid configuration");
  const int D = a.depth();
  std::vector<Move> out;
  for (int d = 1; d <= D; ++d)
    for (std::size_t s = 0; s < a.layers[d - 1].size(); ++s) {
      const auto& [i, j] = a.layers[d - 1][s];
      const int ti = tau[i - 1], tj = tau[j - 1];
      const int before = a.circular ? (d - 1) % D : d - 1;
      const int after = a.circular ? d % D : d;
      if (ti == before && tj == before) out.push_back({d, static_cast<int>(s), true});
      if (ti == after && tj == after) out.push_back({d, static_cast<int>(s), false});
    }
  return out;
}

inline Config apply_move(const Architecture& a, Config tau, const Move& mv) {
  const int D = a.depth();
  const auto& [i, j] = a.layers[mv.layer - 1][mv.slot];
  const int target = mv.apply ? (a.circular ? mv.layer % D : mv.layer)
                              : (a.circular ? (mv.layer - 1) % D : mv.layer - 1);
  tau[i - 1] = target;
  tau[j - 1] = target;
  return tau;
}

/// Exact set of valid configurations, BFS closure of single-gate toggles from
/// the all-zero configuration.  Deterministic: returned sorted.
inline std::vector<Config> enumerate_valid(const Architecture& a,
                                           std::uint64_t cap = kDefaultEnumCap) {
  Config zero(a.n, 0);
  std::unordered_set<Config, detail::ConfigHash> seen;
  std::deque<Config> frontier;
  seen.insert(zero);
  frontier.push_back(zero);
  while (!frontier.empty()) {
    Config cur = std::move(frontier.front());
    frontier.pop_front();
    for (const auto& mv : available_moves(a, cur)) {
      Config nxt = apply_move(a, cur, mv);
      if (seen.insert(nxt).second) {
        if (seen.size() > cap)
          fail(Error::Kind::cap_exceeded, "cap-exceeded: more than " +
                                              std::to_string(cap) + " configurations");
        frontier.push_back(nxt);
      }
    }
  }
  std::vector<Config> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Exact counting via the recurrence a_ell = 2 a_{ell-1}^2 - a_{ell-2}^4 with
// a_0 = 1, a_1 = 2 (then a_2 = 7 follows).
// ---------------------------------------------------------------------------

inline CountInt count_bitonic(int ell) {
  if (ell < 0) fail(Error::Kind::invalid_argument, "invalid-rank");
  std::vector<CountInt> a = {CountInt(1), CountInt(2)};
  for (int k = 2; k <= ell; ++k) {
    CountInt next = CountInt(2) * a[k - 1] * a[k - 1] - a[k - 2].pow(4);
    a.push_back(next);
  }
  return a[ell];
}

/// Configurations of B_ell with some layer-1 gate unapplied: a_ell - a_{ell-1}^2.
inline CountInt count_first_layer_incomplete(int ell) {
  detail::check_rank(ell);
  return count_bitonic(ell) - count_bitonic(ell - 1).pow(2);
}

inline CountInt count_product(int ell, int m) {
  detail::check_rank(ell);
  if (m < 1) fail(Error::Kind::invalid_argument, "invalid-rank: m >= 1");
  const CountInt a = count_bitonic(ell), a1 = count_bitonic(ell - 1);
  const CountInt w(static_cast<std::uint64_t>(m - 1) * ell);
  return (w + CountInt(1)) * a - w * a1 * a1;
}

/// Circular count (a_ell - a_{ell-1}^2) * m * ell.  The m = 1 wrap identifies
/// layer ell with layer 0 of the same block; the theorem is stated for
/// products of blocks, so m = 1 results are validated by enumeration only.
inline CountInt count_circular(int ell, int m) {
  detail::check_rank(ell);
  if (m < 1) fail(Error::Kind::invalid_argument, "invalid-rank: m >= 1");
  return count_first_layer_incomplete(ell) * CountInt(static_cast<std::uint64_t>(m) * ell);
}

inline CountInt count_qubit_at_zero(int ell, int /*m*/, bool circular) {
  detail::check_rank(ell);
  if (circular) return count_first_layer_incomplete(ell);
  CountInt prod(1);
  for (int j = 1; j <= ell - 1; ++j) prod = prod * count_bitonic(j);
  return prod;
}

/// Width w(tau) = max - min; circular width is taken over the minimal circular
/// window containing all times.
inline int width(const Architecture& a, const Config& tau) {
  if (!a.circular) {
    auto [mn, mx] = std::minmax_element(tau.begin(), tau.end());
    return *mx - *mn;
  }
  std::vector<int> ts(tau);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.size() == 1) return 0;
  const int D = a.depth();
  int max_gap = ts.front() + D - ts.back();
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    max_gap = std::max(max_gap, ts[i + 1] - ts[i]);
  return D - max_gap;
}

// ---------------------------------------------------------------------------
// Ranking / unranking.  v-configurations of a block occupy [0, a_{ell-1}^2);
// the h-branch splits into (h,h), (h,v), (v,h) sub-cases with counts
// (a_{ell-1} - a_{ell-2}^2)^2 and a_{ell-2}^2 (a_{ell-1} - a_{ell-2}^2) per
// mixed case -- the unique split summing to a_ell - a_{ell-1}^2.  Products
// and circulars are partitioned by the first window containing the
// configuration.
// ---------------------------------------------------------------------------

namespace detail {

inline bool block_is_v(const Config& tau) {
  return std::all_of(tau.begin(), tau.end(), [](int t) { return t >= 1; });
}

/// rank within [0, a_ell) for a configuration of the standard block B_ell
/// (times in [0, ell]).
inline CountInt rank_block(int ell, const Config& tau) {
  if (ell == 0) return CountInt(0);
  if (ell == 1) return block_is_v(tau) ? CountInt(0) : CountInt(1);
  const int half = 1 << (ell - 1);
  const CountInt a1 = count_bitonic(ell - 1), a2 = count_bitonic(ell - 2);
  const CountInt v1 = a2 * a2;             // v-configs of a child block
  const CountInt A = a1 - v1;              // not-v configs of a child block
  if (block_is_v(tau)) {
    Config top(tau.begin(), tau.begin() + half), bot(tau.begin() + half, tau.end());
    for (int& t : top) --t;
    for (int& t : bot) --t;
    return rank_block(ell - 1, top) * a1 + rank_block(ell - 1, bot);
  }
  Config odd(half), even(half);
  for (int u = 0; u < half; ++u) {
    odd[u] = tau[2 * u];
    even[u] = tau[2 * u + 1];
  }
  const bool vo = block_is_v(odd), ve = block_is_v(even);
  const CountInt ro = rank_block(ell - 1, odd), re = rank_block(ell - 1, even);
  CountInt h;
  if (!vo && !ve)
    h = (ro - v1) * A + (re - v1);
  else if (!vo && ve)
    h = A * A + (ro - v1) * v1 + re;
  else if (vo && !ve)
    h = A * A + A * v1 + ro * A + (re - v1);
  else
    fail(Error::Kind::numeric, "h-configuration with two v children");
  return a1 * a1 + h;
}

inline Config unrank_block(int ell, CountInt idx) {
  if (ell == 0) return {0};
  if (ell == 1) return idx.is_zero() ? Config{1, 1} : Config{0, 0};
  const int half = 1 << (ell - 1);
  const CountInt a1 = count_bitonic(ell - 1), a2 = count_bitonic(ell - 2);
  const CountInt v1 = a2 * a2, A = a1 - v1;
  Config tau(2 * half);
  if (idx < a1 * a1) {
    auto [it, ib] = CountInt::divmod(idx, a1);
    Config top = unrank_block(ell - 1, it), bot = unrank_block(ell - 1, ib);
    for (int u = 0; u < half; ++u) {
      tau[u] = top[u] + 1;
      tau[u + half] = bot[u] + 1;
    }
    return tau;
  }
  CountInt h = idx - a1 * a1;
  Config odd, even;
  if (h < A * A) {
    auto [ho, he] = CountInt::divmod(h, A);
    odd = unrank_block(ell - 1, v1 + ho);
    even = unrank_block(ell - 1, v1 + he);
  } else if (h < A * A + A * v1) {
    auto [ho, ve] = CountInt::divmod(h - A * A, v1);
    odd = unrank_block(ell - 1, v1 + ho);
    even = unrank_block(ell - 1, ve);
  } else {
    auto [vo, he] = CountInt::divmod(h - A * A - A * v1, A);
    odd = unrank_block(ell - 1, vo);
    even = unrank_block(ell - 1, v1 + he);
  }
  for (int u = 0; u < half; ++u) {
    tau[2 * u] = odd[u];
    tau[2 * u + 1] = even[u];
  }
  return tau;
}

struct FamilyShape {
  int ell = 0;
  int m = 0;
  bool circular = false;
};

/// Recognize a built bitonic family from its layer structure.
inline FamilyShape family_of(const Architecture& a) {
  int ell = 0;
  while ((1 << ell) < a.n) ++ell;
  if ((1 << ell) != a.n || ell < 1)
    fail(Error::Kind::unsupported, "width is not a power of two");
  if (a.depth() % ell != 0)
    fail(Error::Kind::unsupported, "depth is not a multiple of the rank");
  FamilyShape f{ell, a.depth() / ell, a.circular};
  Architecture ref = f.circular ? build_circular(f.ell, f.m) : build_product(f.ell, f.m);
  if (!(ref == a))
    fail(Error::Kind::unsupported, "architecture is not a bitonic block family");
  return f;
}

/// Canonical window start: smallest r with all times in [r, r+ell] (mod D when
/// circular) and some time equal to r.
inline int canonical_window(const FamilyShape& f, const Config& tau, int D) {
  if (!f.circular) {
    const int mn = *std::min_element(tau.begin(), tau.end());
    return std::min(mn, D - f.ell);
  }
  for (int r = 0; r < D; ++r) {
    bool at_r = false, inside = true;
    for (int t : tau) {
      const int rel = ((t - r) % D + D) % D;
      if (rel > f.ell) {
        inside = false;
        break;
      }
      if (rel == 0) at_r = true;
    }
    if (inside && at_r) return r;
  }
  fail(Error::Kind::numeric, "no containing window for a valid configuration");
}

/// Standard-block view of the window config: wc[pi^s(i)] = tau_i - r with
/// s = r mod ell, pi the shift permutation.
inline Config window_config(const FamilyShape& f, const Config& tau, int r, int D) {
  const Permutation sigma = shift_permutation(f.ell, r % f.ell);
  Config wc(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const int rel = f.circular ? (((tau[i] - r) % D + D) % D) : tau[i] - r;
    wc[sigma(static_cast<int>(i) + 1) - 1] = rel;
  }
  return wc;
}

inline Config window_config_inverse(const FamilyShape& f, const Config& wc, int r, int D) {
  const Permutation sigma = shift_permutation(f.ell, r % f.ell);
  Config tau(wc.size());
  for (std::size_t i = 0; i < wc.size(); ++i) {
    const int abs = wc[sigma(static_cast<int>(i) + 1) - 1] + r;
    tau[i] = f.circular ? abs % D : abs;
  }
  return tau;
}

}  // namespace detail

inline CountInt count_valid(const Architecture& a) {
  const auto f = detail::family_of(a);
  return f.circular ? count_circular(f.ell, f.m) : count_product(f.ell, f.m);
}

/// rank / unrank: mutually inverse bijection between valid configurations and
/// [0, count_valid(a)).
inline CountInt rank(const Architecture& a, const Config& tau) {
  if (!is_valid(a, tau)) fail(Error::Kind::invalid_argument, "invalid configuration");
  const auto f = detail::family_of(a);
  const int D = a.depth();
  const int r = detail::canonical_window(f, tau, D);
  const Config wc = detail::window_config(f, tau, r, D);
  const CountInt per = count_first_layer_incomplete(f.ell);
  const CountInt v1 = count_bitonic(f.ell - 1).pow(2);
  const CountInt block_rank = detail::rank_block(f.ell, wc);
  if (!f.circular && r == D - f.ell)
    return CountInt(static_cast<std::uint64_t>(r)) * per + block_rank;
  return CountInt(static_cast<std::uint64_t>(r)) * per + (block_rank - v1);
}

inline Config unrank(const Architecture& a, const CountInt& idx) {
  const auto f = detail::family_of(a);
  const int D = a.depth();
  if (!(idx < count_valid(a)))
    fail(Error::Kind::invalid_argument, "index out of range");
  const CountInt per = count_first_layer_incomplete(f.ell);
  const CountInt v1 = count_bitonic(f.ell - 1).pow(2);
  auto [w, local] = CountInt::divmod(idx, per);
  int r = static_cast<int>(w.to_u64());
  CountInt block_rank;
  if (!f.circular && r >= D - f.ell) {
    r = D - f.ell;
    block_rank = idx - CountInt(static_cast<std::uint64_t>(r)) * per;
  } else {
    block_rank = local + v1;
  }
  const Config wc = detail::unrank_block(f.ell, block_rank);
  return detail::window_config_inverse(f, wc, r, D);
}

/// Uniform sample via unrank of a uniform index; deterministic under the rng.
inline Config sample_uniform(const Architecture& a, Rng& rng) {
  const CountInt total = count_valid(a);
  if (total.fits_u64()) return unrank(a, CountInt(rng.below(total.to_u64())));
  // rejection sampling over bit_length-wide integers
  const std::size_t bits = total.bit_length();
  const std::size_t words = (bits + 31) / 32;
  const std::uint32_t top_mask =
      (bits % 32 == 0) ? 0xffffffffu : ((std::uint32_t{1} << (bits % 32)) - 1);
  for (;;) {
    CountInt x(static_cast<std::uint32_t>(rng.next()) & top_mask);
    for (std::size_t w = 1; w < words; ++w)
      x = x * CountInt(std::uint64_t{1} << 32) + CountInt(static_cast<std::uint32_t>(rng.next()));
    if (x < total) return unrank(a, x);
  }
}

}  // namespace spacetime
