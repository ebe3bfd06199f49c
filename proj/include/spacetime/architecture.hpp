#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spacetime/gates.hpp"

namespace spacetime {

struct Error : std::runtime_error {
  enum class Kind { invalid_argument, cap_exceeded, unsupported, numeric };
  Error(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

[[noreturn]] inline void fail(Error::Kind k, const std::string& msg) { throw Error(k, msg); }

using QubitPair = std::pair<int, int>;       // 1-based, stored (lo, hi)
using Layer = std::vector<QubitPair>;        // perfect matching of {1..n}

/// Layered DAG of two-qubit gate slots.  Every layer is a full perfect
/// matching (identity slots are explicit members), so each qubit has exactly
/// one slot per layer.  Circular architectures take time indices mod depth.
struct Architecture {
  int n = 0;
  bool circular = false;
  std::vector<Layer> layers;

  int depth() const { return static_cast<int>(layers.size()); }

  /// 1-based partner of qubit q in layer d (1-based).
  int partner(int q, int d) const {
    for (const auto& [a, b] : layers[d - 1]) {
      if (a == q) return b;
      if (b == q) return a;
    }
    fail(Error::Kind::invalid_argument, "qubit not covered by layer");
  }

  /// Index of the pair containing q within layer d, for gate lookup.
  int slot_index(int q, int d) const {
    const auto& layer = layers[d - 1];
    for (std::size_t i = 0; i < layer.size(); ++i)
      if (layer[i].first == q || layer[i].second == q) return static_cast<int>(i);
    fail(Error::Kind::invalid_argument, "qubit not covered by layer");
  }

  bool operator==(const Architecture& o) const {
    return n == o.n && circular == o.circular && layers == o.layers;
  }
};

struct Permutation {
  std::vector<int> map;  // map[i-1] = pi(i), 1-based values

  explicit Permutation(int n = 0) : map(n) { std::iota(map.begin(), map.end(), 1); }
  int size() const { return static_cast<int>(map.size()); }
  int operator()(int i) const { return map[i - 1]; }

  Permutation inverse() const {
    Permutation r(size());
    for (int i = 1; i <= size(); ++i) r.map[map[i - 1] - 1] = i;
    return r;
  }
  /// Composition (a * b)(i) = a(b(i)).
  friend Permutation operator*(const Permutation& a, const Permutation& b) {
    Permutation r(a.size());
    for (int i = 1; i <= a.size(); ++i) r.map[i - 1] = a(b(i));
    return r;
  }
  bool is_identity() const {
    for (int i = 1; i <= size(); ++i)
      if (map[i - 1] != i) return false;
    return true;
  }
  void validate() const {
    std::vector<bool> seen(map.size(), false);
    for (int v : map) {
      if (v < 1 || v > size() || seen[v - 1])
        fail(Error::Kind::invalid_argument, "not a bijection on {1..n}");
      seen[v - 1] = true;
    }
  }
};

struct Circuit {
  Architecture arch;
  std::vector<std::vector<Gate>> gates;  // gates[d-1][i] for layer d pair i

  const Gate& gate_at(int q, int d) const { return gates[d - 1][arch.slot_index(q, d)]; }

  static Circuit identity_on(Architecture a) {
    Circuit c;
    c.gates.assign(a.layers.size(), {});
    for (std::size_t d = 0; d < a.layers.size(); ++d)
      c.gates[d].assign(a.layers[d].size(), gatelib::identity());
    c.arch = std::move(a);
    return c;
  }

  /// Full unitary action on a state vector (layers applied in order, each
  /// gate's first factor is the pair's lower qubit index).
  void apply(StateVector& sv) const {
    for (std::size_t d = 0; d < arch.layers.size(); ++d)
      for (std::size_t i = 0; i < arch.layers[d].size(); ++i)
        sv.apply(gates[d][i], arch.layers[d][i].first, arch.layers[d][i].second);
  }
};

namespace detail {
inline void check_rank(int ell) {
  if (ell < 1) fail(Error::Kind::invalid_argument, "invalid-rank: rank must be >= 1");
}
inline Layer sorted_layer(Layer l) {
  for (auto& p : l)
    if (p.first > p.second) std::swap(p.first, p.second);
  std::sort(l.begin(), l.end());
  return l;
}
}  // namespace detail

/// Bitonic block B_ell: layer 1 pairs i with i + 2^{ell-1}; layers 2..ell are
/// two recursive blocks on the top and bottom halves.
inline Architecture build_bitonic_block(int ell) {
  detail::check_rank(ell);
  Architecture a;
  a.n = 1 << ell;
  a.circular = false;
  if (ell == 1) {
    a.layers = {{{1, 2}}};
    return a;
  }
  Architecture sub = build_bitonic_block(ell - 1);
  const int half = a.n / 2;
  Layer first;
  for (int i = 1; i <= half; ++i) first.push_back({i, i + half});
  a.layers.push_back(std::move(first));
  for (const auto& sl : sub.layers) {
    Layer l;
    for (const auto& [p, q] : sl) l.push_back({p, q});
    for (const auto& [p, q] : sl) l.push_back({p + half, q + half});
    a.layers.push_back(detail::sorted_layer(std::move(l)));
  }
  return a;
}

/// Linear product B_ell^{x m}: m concatenated blocks.
inline Architecture build_product(int ell, int m) {
  detail::check_rank(ell);
  if (m < 1) fail(Error::Kind::invalid_argument, "invalid-rank: m must be >= 1");
  Architecture block = build_bitonic_block(ell), a;
  a.n = block.n;
  a.circular = false;
  for (int i = 0; i < m; ++i)
    a.layers.insert(a.layers.end(), block.layers.begin(), block.layers.end());
  return a;
}

/// Circular wrapping B_ell^{<-> m}: same layers, time taken mod m*ell.
inline Architecture build_circular(int ell, int m) {
  Architecture a = build_product(ell, m);
  a.circular = true;
  return a;
}

/// pi_ell of Lemma "permutation": relabeling by pi_ell^j maps the j-layer
/// left-cyclic-shifted block back to B_ell.
inline Permutation shift_permutation(int ell, int j) {
  detail::check_rank(ell);
  const int n = 1 << ell;
  Permutation pi(n);
  for (int i = 1; i <= n; ++i) pi.map[i - 1] = (i <= n / 2) ? 2 * i - 1 : 2 * i - n;
  Permutation inv = pi.inverse();
  // order of pi divides lcm of cycle lengths; just reduce j by repeated apply
  Permutation r(n);
  long order = 1;
  {
    Permutation acc = pi;
    while (!acc.is_identity()) {
      acc = pi * acc;
      ++order;
    }
  }
  long e = ((j % order) + order) % order;
  for (long k = 0; k < e; ++k) r = pi * r;
  return r;
}

/// Relabel all qubits of an architecture: pair (i, j) -> (sigma(i), sigma(j)).
inline Architecture relabel(const Architecture& a, const Permutation& sigma) {
  Architecture r = a;
  for (auto& layer : r.layers) {
    for (auto& p : layer) p = {sigma(p.first), sigma(p.second)};
    layer = detail::sorted_layer(layer);
  }
  return r;
}

/// Left-cyclic layer shift by s: new layer 1 is old layer s+1.
inline Architecture shift_layers(const Architecture& a, int s) {
  Architecture r = a;
  const int d = a.depth();
  s = ((s % d) + d) % d;
  for (int i = 0; i < d; ++i) r.layers[i] = a.layers[(i + s) % d];
  return r;
}

namespace detail {

/// Benes switch routing embedded in B_ell^{x ell}.  Block 1 supplies the
/// descending dimension sweep (dims ell-1 .. 0); the ascending sweep takes
/// dim d from block d+1, whose block-layer ell-d pairs wires differing in
/// bit d.  Waksman loop coloring seeds each cycle "straight", so the identity
/// permutation routes with no swaps at all.
struct BenesRouter {
  int ell;
  Circuit* circ;

  int descending_layer(int dim) const { return ell - dim; }           // 1-based
  int ascending_layer(int dim) const { return ell + dim * (ell - 1); }

  void emit_swap(int layer, int wire_a, int wire_b) {
    const int slot = circ->arch.slot_index(wire_a, layer);
    circ->gates[layer - 1][slot] = gatelib::make("SWAP");
  }

  /// wires[a] = 1-based wire of local address a; perm[a] = local destination.
  void solve(int k, const std::vector<int>& wires, const std::vector<int>& perm) {
    if (k == 0) return;
    const int h = 1 << (k - 1);
    if (k == 1) {
      if (perm[0] != 0) emit_swap(descending_layer(0), wires[0], wires[1]);
      return;
    }
    // Waksman 2-coloring of tokens: tokens sharing an input or output switch
    // must land in different subnets; the constraint graph is even cycles.
    std::vector<int> color(2 * h, -1);  // 0 = top subnet, 1 = bottom
    std::vector<std::array<int, 2>> out_tokens(h, {-1, -1});
    for (int a = 0; a < 2 * h; ++a) {
      const int s = perm[a] & (h - 1);
      out_tokens[s][out_tokens[s][0] < 0 ? 0 : 1] = a;
    }
    auto other_out = [&](int a) {
      const int s = perm[a] & (h - 1);
      return out_tokens[s][0] == a ? out_tokens[s][1] : out_tokens[s][0];
    };
    std::vector<int> stack;
    for (int seed = 0; seed < 2 * h; ++seed) {
      if (color[seed] >= 0) continue;
      color[seed] = seed < h ? 0 : 1;  // seed straight: identity stays swap-free
      stack.assign(1, seed);
      while (!stack.empty()) {
        const int a = stack.back();
        stack.pop_back();
        for (const int b : {a ^ h, other_out(a)})
          if (color[b] < 0) {
            color[b] = 1 - color[a];
            stack.push_back(b);
          }
      }
    }
    // input switch s crosses when its top-wire token goes to the bottom subnet
    for (int s = 0; s < h; ++s)
      if (color[s] == 1) emit_swap(descending_layer(k - 1), wires[s], wires[s + h]);
    // output switch s crosses when the token destined for its top wire comes
    // from the bottom subnet
    for (int s = 0; s < h; ++s) {
      const int a0 = out_tokens[s][0];
      const int top_dest = perm[a0] < h ? a0 : out_tokens[s][1];
      if (color[top_dest] == 1) emit_swap(ascending_layer(k - 1), wires[s], wires[s + h]);
    }
    // recurse
    std::vector<int> wt(h), wb(h), pt(h), pb(h);
    for (int a = 0; a < 2 * h; ++a) {
      const int entry = a & (h - 1), exit = perm[a] & (h - 1);
      if (color[a] == 0)
        pt[entry] = exit;
      else
        pb[entry] = exit;
    }
    for (int s = 0; s < h; ++s) {
      wt[s] = wires[s];
      wb[s] = wires[s + h];
    }
    solve(k - 1, wt, pt);
    solve(k - 1, wb, pb);
  }
};

}  // namespace detail

/// Circuit over B_ell^{x ell} of SWAP/identity gates whose net wire action is
/// pi: the label starting on wire w ends on wire pi(w).  Identity routes with
/// identity gates only.
inline Circuit route_permutation(const Permutation& pi) {
  const int n = pi.size();
  if (n < 2 || (n & (n - 1)) != 0)
    fail(Error::Kind::invalid_argument, "width must be a power of 2");
  pi.validate();
  int ell = 0;
  while ((1 << ell) < n) ++ell;
  Circuit c = Circuit::identity_on(build_product(ell, ell));
  detail::BenesRouter router{ell, &c};
  std::vector<int> wires(n), perm(n);
  for (int a = 0; a < n; ++a) {
    wires[a] = a + 1;
    perm[a] = pi(a + 1) - 1;
  }
  router.solve(ell, wires, perm);
  return c;
}

/// Net permutation realized by the SWAP pattern of a routing circuit:
/// result(w) = final wire of the label that starts on wire w.
inline Permutation wire_trace(const Circuit& c) {
  const int n = c.arch.n;
  std::vector<int> pos(n + 1);                 // pos[label] = wire
  for (int i = 1; i <= n; ++i) pos[i] = i;
  std::vector<int> at(n + 1);                  // at[wire] = label
  for (int i = 1; i <= n; ++i) at[i] = i;
  for (int d = 1; d <= c.arch.depth(); ++d)
    for (std::size_t s = 0; s < c.arch.layers[d - 1].size(); ++s) {
      const auto& g = c.gates[d - 1][s];
      if (g.label != "SWAP") continue;
      auto [a, b] = c.arch.layers[d - 1][s];
      std::swap(at[a], at[b]);
      pos[at[a]] = a;
      pos[at[b]] = b;
    }
  Permutation r(n);
  for (int i = 1; i <= n; ++i) r.map[i - 1] = pos[i];
  return r;
}

/// Uniformization: every layer L_t of c is replaced by a routing block over
/// B_ell^{x ell} followed by the gate layer on consecutive pairs; with
/// merge_last_layer the gate layer is folded into the final routing layer, so
/// each original layer costs ell^2 layers instead of ell^2 + 1.  With
/// restore_frame (default) a last routing block returns the wires to their
/// original order, making the output act identically on state vectors;
/// without it the output equals c up to a final wire relabeling, which is the
/// paper-faithful depth accounting.
inline Circuit uniformize(const Circuit& c, bool merge_last_layer = true,
                          bool restore_frame = true) {
  const int n = c.arch.n;
  if (n < 2 || (n & (n - 1)) != 0)
    fail(Error::Kind::invalid_argument, "width must be a power of 2");
  int ell = 0;
  while ((1 << ell) < n) ++ell;

  Circuit out;
  out.arch.n = n;
  out.arch.circular = false;
  Permutation wires(n);  // wires(w) = logical qubit currently on wire w

  for (int d = 1; d <= c.arch.depth(); ++d) {
    // target arrangement: pair i of L_d on wires (2i-1, 2i)
    Permutation target(n);
    for (std::size_t i = 0; i < c.arch.layers[d - 1].size(); ++i) {
      target.map[2 * i] = c.arch.layers[d - 1][i].first;
      target.map[2 * i + 1] = c.arch.layers[d - 1][i].second;
    }
    // route so that wire w carries target(w): label at wire w must move to
    // wire route(w) with route = target^{-1} * wires
    Permutation route = target.inverse() * wires;
    Circuit block = route_permutation(route);
    // gate layer on consecutive pairs, with qubit order matching the pair
    std::vector<Gate> gate_layer;
    for (std::size_t i = 0; i < c.arch.layers[d - 1].size(); ++i)
      gate_layer.push_back(c.gates[d - 1][i]);

    const int bd = block.arch.depth();
    for (int t = 1; t <= bd; ++t) {
      out.arch.layers.push_back(block.arch.layers[t - 1]);
      out.gates.push_back(block.gates[t - 1]);
    }
    // final layer of B_ell^{x ell} pairs consecutive wires (2i-1, 2i)
    if (merge_last_layer) {
      auto& last_arch = out.arch.layers.back();
      auto& last_gates = out.gates.back();
      for (std::size_t i = 0; i < gate_layer.size(); ++i) {
        const int slot = [&] {
          for (std::size_t s = 0; s < last_arch.size(); ++s)
            if (last_arch[s].first == static_cast<int>(2 * i + 1)) return static_cast<int>(s);
          fail(Error::Kind::numeric, "missing consecutive pair in final layer");
        }();
        // merged unitary: gate after the (possible) swap
        Eigen::Matrix4cd u = gate_layer[i].u * last_gates[slot].u;
        if (last_gates[slot].is_identity())
          last_gates[slot] = gate_layer[i];
        else if (gate_layer[i].is_identity())
          ;  // keep swap
        else
          last_gates[slot] = gatelib::generic(u);
      }
    } else {
      Layer l;
      std::vector<Gate> g;
      for (std::size_t i = 0; i < gate_layer.size(); ++i) {
        l.push_back({static_cast<int>(2 * i + 1), static_cast<int>(2 * i + 2)});
        g.push_back(gate_layer[i]);
      }
      out.arch.layers.push_back(std::move(l));
      out.gates.push_back(std::move(g));
    }
    wires = target;
  }
  // wire w holds logical qubit wires(w); move it back to wire wires(w)
  if (restore_frame && !wires.is_identity()) {
    Circuit fix = route_permutation(wires);
    for (int t = 1; t <= fix.arch.depth(); ++t) {
      out.arch.layers.push_back(fix.arch.layers[t - 1]);
      out.gates.push_back(fix.gates[t - 1]);
    }
  }
  return out;
}

/// Gate-order-respecting statevector action of a circuit where each layer's
/// pairs carry the gate with first factor = lower wire index.
inline Vec apply_circuit(const Circuit& c, const Vec& in) {
  StateVector sv = StateVector::from(in, c.arch.n);
  c.apply(sv);
  return sv.amplitudes();
}

/// True iff the layer sequence is isomorphic to B_j tensor-powers:
/// used by the sub-architecture corollary checks.
inline bool is_bitonic_block_shape(const std::vector<Layer>& layers,
                                   const std::vector<int>& qubits) {
  const int j = static_cast<int>(layers.size());
  if (qubits.size() != (std::size_t{1} << j)) return false;
  if (j == 0) return qubits.size() == 1;
  std::set<int> qs(qubits.begin(), qubits.end());
  // restrict each layer to these qubits; every layer must match them perfectly
  std::vector<Layer> restricted(j);
  for (int d = 0; d < j; ++d) {
    for (const auto& [a, b] : layers[d]) {
      const bool ia = qs.count(a), ib = qs.count(b);
      if (ia != ib) return false;
      if (ia) restricted[d].push_back({a, b});
    }
    if (restricted[d].size() * 2 != qs.size()) return false;
  }
  if (j == 1) return true;
  // remove layer 1; the rest must split into two halves connected by layer 1
  std::vector<Layer> rest(restricted.begin() + 1, restricted.end());
  // connected components under layers 2..j
  std::vector<int> comp_of;
  std::vector<std::vector<int>> comps;
  {
    std::vector<int> idx(qubits.begin(), qubits.end());
    std::sort(idx.begin(), idx.end());
    std::vector<int> parent(idx.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](auto&& self, int x) -> int {
      return parent[x] == x ? x : parent[x] = self(self, parent[x]);
    };
    auto pos = [&](int q) {
      return static_cast<int>(std::lower_bound(idx.begin(), idx.end(), q) - idx.begin());
    };
    for (const auto& layer : rest)
      for (const auto& [a, b] : layer) parent[find(find, pos(a))] = find(find, pos(b));
    std::vector<int> roots;
    comps.clear();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const int r = find(find, static_cast<int>(i));
      auto it = std::find(roots.begin(), roots.end(), r);
      if (it == roots.end()) {
        roots.push_back(r);
        comps.push_back({});
        it = roots.end() - 1;
      }
      comps[it - roots.begin()].push_back(idx[i]);
    }
  }
  if (comps.size() != 2) return false;
  // layer 1 must be a perfect matching between the two components
  std::set<int> c0(comps[0].begin(), comps[0].end());
  for (const auto& [a, b] : restricted[0])
    if (c0.count(a) == c0.count(b)) return false;
  return is_bitonic_block_shape(rest, comps[0]) && is_bitonic_block_shape(rest, comps[1]);
}

/// Sub-architecture induced by a subset of layers (orders kept).
inline std::vector<Layer> sub_layers(const Architecture& a, const std::vector<int>& layer_ids) {
  std::vector<Layer> out;
  for (int d : layer_ids) out.push_back(a.layers[d - 1]);
  return out;
}

}  // namespace spacetime
