#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spacetime/config.hpp"

namespace spacetime {

// All geometry is exact: coordinates are scaled by 2^rank so every dyadic
// rational becomes an integer in [0, 2^rank].  The y axis points down, so the
// "top" of the square is y = 0 (the side of qubit 1).

/// [a 2^-s, (a+1) 2^-s] x [b 2^-t, (b+1) 2^-t] stored as scaled integers.
struct DyadicRect {
  int x = 0, y = 0, w = 0, h = 0;  // scaled by 2^rank

  bool operator==(const DyadicRect& o) const {
    return x == o.x && y == o.y && w == o.w && h == o.h;
  }
  bool operator<(const DyadicRect& o) const {
    return std::tie(y, x, w, h) < std::tie(o.y, o.x, o.w, o.h);
  }
};

/// Axis-aligned segment; horizontal iff y0 == y1.
struct Segment {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  bool horizontal() const { return y0 == y1; }
  bool operator==(const Segment& o) const {
    return x0 == o.x0 && y0 == o.y0 && x1 == o.x1 && y1 == o.y1;
  }
  bool operator<(const Segment& o) const {
    return std::tie(y0, x0, y1, x1) < std::tie(o.y0, o.x0, o.y1, o.x1);
  }
};

struct DyadicTiling {
  int rank = 0;
  std::vector<DyadicRect> rects;  // kept sorted

  int side() const { return 1 << rank; }
  bool operator==(const DyadicTiling& o) const { return rank == o.rank && rects == o.rects; }
  bool operator<(const DyadicTiling& o) const { return rects < o.rects; }
};

/// Exact tiling validity: 2^rank dyadic-aligned rectangles of equal area
/// 2^-rank, pairwise interior-disjoint, covering the unit square.
inline bool is_tiling(const DyadicTiling& d) {
  const long side = d.side();
  if (d.rects.size() != static_cast<std::size_t>(side)) return false;
  long area = 0;
  for (const auto& r : d.rects) {
    if (r.w <= 0 || r.h <= 0 || r.x < 0 || r.y < 0) return false;
    if (r.x + r.w > side || r.y + r.h > side) return false;
    if ((r.w & (r.w - 1)) || (r.h & (r.h - 1))) return false;
    if (static_cast<long>(r.w) * r.h != side) return false;    // equal area
    if (r.x % r.w != 0 || r.y % r.h != 0) return false;        // dyadic aligned
    area += static_cast<long>(r.w) * r.h;
  }
  if (area != side * side) return false;
  for (std::size_t i = 0; i < d.rects.size(); ++i)
    for (std::size_t j = i + 1; j < d.rects.size(); ++j) {
      const auto &a = d.rects[i], &b = d.rects[j];
      if (a.x < b.x + b.w && b.x < a.x + a.w && a.y < b.y + b.h && b.y < a.y + a.h)
        return false;
    }
  return true;
}

/// Complete binary tree of depth `rank`: 2^rank - 1 internal H/V labels in
/// heap order (root at index 1).  No H node may have two V children.
struct HVTree {
  int rank = 0;
  std::vector<char> label;  // size 2^rank, entry 0 unused

  char at(int node) const { return label[node]; }
  bool internal(int node) const { return node < (1 << rank); }
  bool operator==(const HVTree& o) const { return rank == o.rank && label == o.label; }
  bool operator<(const HVTree& o) const { return label < o.label; }
};

inline bool is_hv_tree(const HVTree& t) {
  if (static_cast<int>(t.label.size()) != (1 << t.rank)) return false;
  for (int node = 1; node < (1 << t.rank); ++node) {
    if (t.label[node] != 'H' && t.label[node] != 'V') return false;
    const int c = 2 * node;
    if (c < (1 << t.rank) && t.label[node] == 'H' && t.label[c] == 'V' &&
        t.label[c + 1] == 'V')
      return false;
  }
  return true;
}

namespace detail {

inline void hv_to_rects(const HVTree& t, int node, DyadicRect region,
                        std::vector<DyadicRect>& out) {
  if (!t.internal(node)) {
    out.push_back(region);
    return;
  }
  if (t.at(node) == 'V') {
    const int w = region.w / 2;
    hv_to_rects(t, 2 * node, {region.x, region.y, w, region.h}, out);
    hv_to_rects(t, 2 * node + 1, {region.x + w, region.y, w, region.h}, out);
  } else {
    const int h = region.h / 2;
    hv_to_rects(t, 2 * node, {region.x, region.y, region.w, h}, out);
    hv_to_rects(t, 2 * node + 1, {region.x, region.y + h, region.w, h}, out);
  }
}

inline void rects_to_hv(const std::vector<DyadicRect>& rects, DyadicRect region, int node,
                        HVTree& t) {
  if (rects.size() == 1) {
    if (!(rects[0] == region))
      fail(Error::Kind::invalid_argument, "rectangle set is not a dyadic tiling");
    return;
  }
  const int xm = region.x + region.w / 2, ym = region.y + region.h / 2;
  std::vector<DyadicRect> first, second;
  bool v_cut = true;
  for (const auto& r : rects) {
    if (r.x + r.w <= xm)
      first.push_back(r);
    else if (r.x >= xm)
      second.push_back(r);
    else {
      v_cut = false;
      break;
    }
  }
  if (!v_cut) {
    first.clear();
    second.clear();
    for (const auto& r : rects) {
      if (r.y + r.h <= ym)
        first.push_back(r);
      else if (r.y >= ym)
        second.push_back(r);
      else
        fail(Error::Kind::invalid_argument, "rectangle set is not a dyadic tiling");
    }
  }
  t.label[node] = v_cut ? 'V' : 'H';  // prefer the V-cut when both exist
  const DyadicRect r1 = v_cut ? DyadicRect{region.x, region.y, region.w / 2, region.h}
                              : DyadicRect{region.x, region.y, region.w, region.h / 2};
  const DyadicRect r2 = v_cut
                            ? DyadicRect{region.x + region.w / 2, region.y, region.w / 2, region.h}
                            : DyadicRect{region.x, region.y + region.h / 2, region.w, region.h / 2};
  rects_to_hv(first, r1, 2 * node, t);
  rects_to_hv(second, r2, 2 * node + 1, t);
}

}  // namespace detail

inline DyadicTiling hvtree_to_tiling(const HVTree& t) {
  if (!is_hv_tree(t)) fail(Error::Kind::invalid_argument, "tree violates the HV constraint");
  DyadicTiling d;
  d.rank = t.rank;
  detail::hv_to_rects(t, 1, {0, 0, d.side(), d.side()}, d.rects);
  std::sort(d.rects.begin(), d.rects.end());
  return d;
}

inline HVTree tiling_to_hvtree(const DyadicTiling& d) {
  if (!is_tiling(d)) fail(Error::Kind::invalid_argument, "rectangle set is not a dyadic tiling");
  HVTree t;
  t.rank = d.rank;
  t.label.assign(std::size_t{1} << d.rank, '.');
  detail::rects_to_hv(d.rects, {0, 0, d.side(), d.side()}, 1, t);
  return t;
}

// ---------------------------------------------------------------------------
// Configuration <-> HV-tree.  Root is V iff layer 1 is fully applied
// (v-configuration); V recurses on the last ell-1 layers over the top and
// bottom qubit halves, H on the first ell-1 layers over odd and even qubits.
// ---------------------------------------------------------------------------

namespace detail {

inline void config_to_hv(const Config& tau, int node, HVTree& t) {
  const int n = static_cast<int>(tau.size());
  if (n == 1) return;
  const int half = n / 2;
  Config c1(half), c2(half);
  if (block_is_v(tau)) {
    t.label[node] = 'V';
    for (int u = 0; u < half; ++u) {
      c1[u] = tau[u] - 1;
      c2[u] = tau[u + half] - 1;
    }
  } else {
    t.label[node] = 'H';
    for (int u = 0; u < half; ++u) {
      c1[u] = tau[2 * u];
      c2[u] = tau[2 * u + 1];
    }
  }
  config_to_hv(c1, 2 * node, t);
  config_to_hv(c2, 2 * node + 1, t);
}

inline Config hv_to_config(const HVTree& t, int node, int rank) {
  if (rank == 0) return {0};
  const Config c1 = hv_to_config(t, 2 * node, rank - 1);
  const Config c2 = hv_to_config(t, 2 * node + 1, rank - 1);
  const int half = 1 << (rank - 1);
  Config tau(2 * half);
  if (t.at(node) == 'V') {
    for (int u = 0; u < half; ++u) {
      tau[u] = c1[u] + 1;
      tau[u + half] = c2[u] + 1;
    }
  } else {
    for (int u = 0; u < half; ++u) {
      tau[2 * u] = c1[u];
      tau[2 * u + 1] = c2[u];
    }
  }
  return tau;
}

}  // namespace detail

/// Valid configuration of B_ell -> HV-tree of depth ell.
inline HVTree config_to_hvtree(int ell, const Config& tau) {
  if (!is_valid(build_bitonic_block(ell), tau))
    fail(Error::Kind::invalid_argument, "invalid configuration");
  HVTree t;
  t.rank = ell;
  t.label.assign(std::size_t{1} << ell, '.');
  detail::config_to_hv(tau, 1, t);
  return t;
}

inline Config hvtree_to_config(const HVTree& t) {
  if (!is_hv_tree(t)) fail(Error::Kind::invalid_argument, "tree violates the HV constraint");
  return detail::hv_to_config(t, 1, t.rank);
}

inline DyadicTiling config_to_tiling(int ell, const Config& tau) {
  return hvtree_to_tiling(config_to_hvtree(ell, tau));
}

inline Config tiling_to_config(const DyadicTiling& d) {
  return hvtree_to_config(tiling_to_hvtree(d));
}

// ---------------------------------------------------------------------------
// Edge flips
// ---------------------------------------------------------------------------

/// All segments whose pi/2 rotation about the midpoint yields another valid
/// equal-area dyadic tiling: shared full edges of two congruent rectangles
/// whose union is itself a dyadic rectangle.
inline std::vector<Segment> flippable_edges(const DyadicTiling& d) {
  std::vector<Segment> out;
  for (std::size_t i = 0; i < d.rects.size(); ++i)
    for (std::size_t j = 0; j < d.rects.size(); ++j) {
      const auto &a = d.rects[i], &b = d.rects[j];
      // horizontal shared edge: b directly below a
      if (a.x == b.x && a.w == b.w && a.h == b.h && a.y + a.h == b.y &&
          a.y % (2 * a.h) == 0)
        out.push_back({a.x, b.y, a.x + a.w, b.y});
      // vertical shared edge: b directly right of a
      if (a.y == b.y && a.h == b.h && a.w == b.w && a.x + a.w == b.x &&
          a.x % (2 * a.w) == 0)
        out.push_back({b.x, a.y, b.x, a.y + a.h});
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Flip a shared edge: replace the two bordering rectangles by the
/// perpendicular bisection of their union.
inline DyadicTiling flip_edge(const DyadicTiling& d, const Segment& seg) {
  const auto edges = flippable_edges(d);
  if (std::find(edges.begin(), edges.end(), seg) == edges.end())
    fail(Error::Kind::invalid_argument, "rejected-flip: segment is not flippable");
  DyadicTiling out;
  out.rank = d.rank;
  DyadicRect uni;
  for (const auto& r : d.rects) {
    const bool touches =
        seg.horizontal()
            ? (r.x == seg.x0 && r.x + r.w == seg.x1 && (r.y + r.h == seg.y0 || r.y == seg.y0))
            : (r.y == seg.y0 && r.y + r.h == seg.y1 && (r.x + r.w == seg.x0 || r.x == seg.x0));
    if (!touches) {
      out.rects.push_back(r);
    } else if (seg.horizontal() && r.y + r.h == seg.y0) {
      uni = {r.x, r.y, r.w, 2 * r.h};
    } else if (!seg.horizontal() && r.x + r.w == seg.x0) {
      uni = {r.x, r.y, 2 * r.w, r.h};
    }
  }
  if (seg.horizontal()) {
    out.rects.push_back({uni.x, uni.y, uni.w / 2, uni.h});
    out.rects.push_back({uni.x + uni.w / 2, uni.y, uni.w / 2, uni.h});
  } else {
    out.rects.push_back({uni.x, uni.y, uni.w, uni.h / 2});
    out.rects.push_back({uni.x, uni.y + uni.h / 2, uni.w, uni.h / 2});
  }
  std::sort(out.rects.begin(), out.rects.end());
  return out;
}

// ---------------------------------------------------------------------------
// Dressed segments: the c-segment of every gate slot of B_ell inside the
// tiling of a given configuration.  In t_0 this reduces to the recursive
// left-to-right / top-to-bottom assignment of c-segments to layer-c gates.
// ---------------------------------------------------------------------------

struct GateSlot {
  int layer = 0;  // 1-based
  int slot = 0;   // pair index within the layer

  bool operator<(const GateSlot& o) const {
    return std::tie(layer, slot) < std::tie(o.layer, o.slot);
  }
  bool operator==(const GateSlot& o) const { return layer == o.layer && slot == o.slot; }
};

namespace detail {

inline int bit_reverse(int value, int bits) {
  int out = 0;
  for (int b = 0; b < bits; ++b)
    if (value & (1 << b)) out |= 1 << (bits - 1 - b);
  return out;
}

/// Recursive dressing of tiling(tau).  `qubits` lists the 1-based block
/// qubits, `arch` is the full B_ell used to resolve slot indices, and the
/// block currently spans global layers [lo, hi].
inline void dress(const Architecture& arch, const std::vector<int>& qubits, const Config& tau,
                  int lo, int hi, DyadicRect region, std::map<GateSlot, Segment>& out) {
  const int n = static_cast<int>(qubits.size());
  if (n == 1) return;
  const int half = n / 2;
  Config c1(half), c2(half);
  std::vector<int> q1(half), q2(half);
  if (block_is_v(tau)) {
    // vertical mid-cut: the segment at row k borders the leaf cells of the
    // gate whose qubit index bit-reverses to k (a qubit at relative time 0
    // descends through H-splits, which order leaves LSB-first); children
    // live on the last layers
    const int xm = region.x + region.w / 2, hs = region.h / half;
    int bits = 0;
    while ((1 << bits) < half) ++bits;
    for (int u = 0; u < half; ++u) {
      const int k = bit_reverse(u, bits);
      out[{lo, arch.slot_index(qubits[u], lo)}] =
          Segment{xm, region.y + k * hs, xm, region.y + (k + 1) * hs};
    }
    for (int u = 0; u < half; ++u) {
      c1[u] = tau[u] - 1;
      c2[u] = tau[u + half] - 1;
      q1[u] = qubits[u];
      q2[u] = qubits[u + half];
    }
    dress(arch, q1, c1, lo + 1, hi, {region.x, region.y, region.w / 2, region.h}, out);
    dress(arch, q2, c2, lo + 1, hi, {region.x + region.w / 2, region.y, region.w / 2, region.h},
          out);
  } else {
    // horizontal mid-cut: segment k (left to right) <-> last-layer gate
    // (qubits[2k], qubits[2k+1]); children live on the first layers
    const int ym = region.y + region.h / 2, ws = region.w / half;
    for (int k = 0; k < half; ++k)
      out[{hi, arch.slot_index(qubits[2 * k], hi)}] =
          Segment{region.x + k * ws, ym, region.x + (k + 1) * ws, ym};
    for (int u = 0; u < half; ++u) {
      c1[u] = tau[2 * u];
      c2[u] = tau[2 * u + 1];
      q1[u] = qubits[2 * u];
      q2[u] = qubits[2 * u + 1];
    }
    dress(arch, q1, c1, lo, hi - 1, {region.x, region.y, region.w, region.h / 2}, out);
    dress(arch, q2, c2, lo, hi - 1, {region.x, region.y + region.h / 2, region.w, region.h / 2},
          out);
  }
}

}  // namespace detail

/// Segment of every gate slot inside tiling(tau); a slot's segment is
/// vertical exactly when the gate is applied.
inline std::map<GateSlot, Segment> dressed_segments(int ell, const Config& tau) {
  const Architecture arch = build_bitonic_block(ell);
  if (!is_valid(arch, tau)) fail(Error::Kind::invalid_argument, "invalid configuration");
  std::map<GateSlot, Segment> out;
  std::vector<int> qubits(arch.n);
  std::iota(qubits.begin(), qubits.end(), 1);
  detail::dress(arch, qubits, tau, 1, ell, {0, 0, arch.n, arch.n}, out);
  return out;
}

/// c-segment <-> gate-slot bijection on the all-horizontal tiling t_0.
inline std::map<GateSlot, Segment> segment_gate_map(int ell) {
  return dressed_segments(ell, Config(std::size_t{1} << ell, 0));
}

/// Passive SVG rendering of a tiling, for documentation output.
inline std::string tiling_to_svg(const DyadicTiling& d, int pixels = 512) {
  std::ostringstream svg;
  const double scale = static_cast<double>(pixels) / d.side();
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pixels << "\" height=\""
      << pixels << "\" viewBox=\"0 0 " << pixels << " " << pixels << "\">\n";
  for (const auto& r : d.rects)
    svg << "  <rect x=\"" << r.x * scale << "\" y=\"" << r.y * scale << "\" width=\""
        << r.w * scale << "\" height=\"" << r.h * scale
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace spacetime
