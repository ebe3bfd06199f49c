#include <catch2/catch.hpp>

#include <set>

#include "spacetime/tiling.hpp"

using namespace spacetime;

namespace {

HVTree all_label(int rank, char l) {
  HVTree t;
  t.rank = rank;
  t.label.assign(std::size_t{1} << rank, '.');
  for (int i = 1; i < (1 << rank); ++i) t.label[i] = l;
  return t;
}

DyadicTiling t0(int rank) { return hvtree_to_tiling(all_label(rank, 'H')); }

}  // namespace

TEST_CASE("all-H tree gives the stacked-strip tiling") {
  for (int rank = 1; rank <= 4; ++rank) {
    const DyadicTiling d = t0(rank);
    REQUIRE(is_tiling(d));
    const int side = 1 << rank;
    for (int k = 0; k < side; ++k) CHECK(d.rects[k] == DyadicRect{0, k, side, 1});
  }
}

TEST_CASE("HV constraint rejects an H node with two V children") {
  HVTree t = all_label(2, 'H');
  t.label[2] = t.label[3] = 'V';
  CHECK_FALSE(is_hv_tree(t));
  CHECK_THROWS_AS(hvtree_to_tiling(t), Error);
}

TEST_CASE("tree <-> tiling round trip over all rank-3 configurations") {
  const Architecture b3 = build_bitonic_block(3);
  std::set<DyadicTiling> tilings;
  for (const auto& tau : enumerate_valid(b3)) {
    const HVTree t = config_to_hvtree(3, tau);
    REQUIRE(is_hv_tree(t));
    const DyadicTiling d = hvtree_to_tiling(t);
    REQUIRE(is_tiling(d));
    CHECK(tiling_to_hvtree(d) == t);
    CHECK(hvtree_to_config(t) == tau);
    tilings.insert(d);
  }
  CHECK(tilings.size() == 82);  // bijection cardinality
}

TEST_CASE("tilings are counted by a_ell") {
  for (int ell = 1; ell <= 4; ++ell) {
    const Architecture b = build_bitonic_block(ell);
    std::set<DyadicTiling> tilings;
    for (const auto& tau : enumerate_valid(b)) tilings.insert(config_to_tiling(ell, tau));
    CHECK(CountInt(tilings.size()) == count_bitonic(ell));
  }
}

TEST_CASE("configuration endpoints map to the extreme tilings") {
  for (int ell = 1; ell <= 3; ++ell) {
    const int n = 1 << ell;
    CHECK(config_to_hvtree(ell, Config(n, 0)) == all_label(ell, 'H'));
    CHECK(config_to_tiling(ell, Config(n, 0)) == t0(ell));
    CHECK(config_to_hvtree(ell, Config(n, ell)) == all_label(ell, 'V'));
  }
}

TEST_CASE("rank-2 t_0 has exactly the two strip cuts flippable") {
  const auto edges = flippable_edges(t0(2));
  REQUIRE(edges.size() == 2);
  CHECK(edges[0] == Segment{0, 1, 4, 1});
  CHECK(edges[1] == Segment{0, 3, 4, 3});
}

TEST_CASE("flipping the cut at 1/4 gives two half-squares atop two strips") {
  const DyadicTiling d = flip_edge(t0(2), {0, 1, 4, 1});
  REQUIRE(is_tiling(d));
  const std::vector<DyadicRect> expect = {{0, 0, 2, 2}, {2, 0, 2, 2}, {0, 2, 4, 1}, {0, 3, 4, 1}};
  CHECK(d.rects == expect);
}

TEST_CASE("flips are involutions") {
  for (int ell = 2; ell <= 3; ++ell) {
    const Architecture b = build_bitonic_block(ell);
    for (const auto& tau : enumerate_valid(b)) {
      const DyadicTiling d = config_to_tiling(ell, tau);
      for (const auto& seg : flippable_edges(d)) {
        const DyadicTiling d2 = flip_edge(d, seg);
        REQUIRE(is_tiling(d2));
        // the perpendicular bisector of the union flips straight back
        bool found = false;
        for (const auto& seg2 : flippable_edges(d2))
          if (flip_edge(d2, seg2) == d) found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("rejected flips raise an error") {
  CHECK_THROWS_AS(flip_edge(t0(2), Segment{0, 2, 4, 2}), Error);
}

TEST_CASE("segment-gate map: explicit small cases") {
  const auto m1 = segment_gate_map(1);
  REQUIRE(m1.size() == 1);
  CHECK(m1.at({1, 0}) == Segment{0, 1, 2, 1});

  const auto m2 = segment_gate_map(2);
  REQUIRE(m2.size() == 4);
  CHECK(m2.at({1, 0}) == Segment{0, 1, 4, 1});  // gate (1,3)
  CHECK(m2.at({1, 1}) == Segment{0, 3, 4, 3});  // gate (2,4)
  CHECK(m2.at({2, 0}) == Segment{0, 2, 2, 2});  // gate (1,2)
  CHECK(m2.at({2, 1}) == Segment{2, 2, 4, 2});  // gate (3,4)
}

TEST_CASE("2^{ell-1} c-segments per layer") {
  for (int ell = 1; ell <= 4; ++ell) {
    const auto m = segment_gate_map(ell);
    std::map<int, int> per_layer;
    for (const auto& [slot, seg] : m) {
      per_layer[slot.layer]++;
      CHECK(seg.horizontal());
    }
    for (int c = 1; c <= ell; ++c) CHECK(per_layer[c] == (1 << (ell - 1)));
  }
}

TEST_CASE("commuting square: toggles and flips agree under the bijection") {
  for (int ell = 1; ell <= 3; ++ell) {
    const Architecture b = build_bitonic_block(ell);
    for (const auto& tau : enumerate_valid(b)) {
      const DyadicTiling d = config_to_tiling(ell, tau);
      const auto segs = dressed_segments(ell, tau);
      const auto flips = flippable_edges(d);
      const auto moves = available_moves(b, tau);

      CHECK(flips.size() == moves.size());
      // orientation invariant: segment vertical iff gate applied
      for (const auto& [slot, seg] : segs) {
        const auto& [p, q] = b.layers[slot.layer - 1][slot.slot];
        const bool applied = tau[p - 1] >= slot.layer && tau[q - 1] >= slot.layer;
        CHECK(seg.horizontal() == !applied);
      }
      // a gate is toggleable iff its segment is flippable, and the square
      // commutes: tiling(toggle(tau, g)) = flip(tiling(tau), seg(g))
      std::set<Segment> flip_set(flips.begin(), flips.end());
      std::set<Segment> toggle_segs;
      for (const auto& mv : moves) {
        const Segment seg = segs.at({mv.layer, mv.slot});
        CHECK(flip_set.count(seg) == 1);
        toggle_segs.insert(seg);
        CHECK(config_to_tiling(ell, apply_move(b, tau, mv)) == flip_edge(d, seg));
      }
      CHECK(toggle_segs == flip_set);
    }
  }
}

TEST_CASE("commuting square spot checks at rank 4") {
  const Architecture b = build_bitonic_block(4);
  Rng rng(17);
  for (int iter = 0; iter < 40; ++iter) {
    const Config tau = sample_uniform(b, rng);
    const DyadicTiling d = config_to_tiling(4, tau);
    const auto segs = dressed_segments(4, tau);
    const auto moves = available_moves(b, tau);
    CHECK(flippable_edges(d).size() == moves.size());
    for (const auto& mv : moves)
      CHECK(config_to_tiling(4, apply_move(b, tau, mv)) ==
            flip_edge(d, segs.at({mv.layer, mv.slot})));
  }
}

TEST_CASE("svg emitter produces one rect element per tile") {
  const std::string svg = tiling_to_svg(t0(3));
  std::size_t count = 0, pos = 0;
  while ((pos = svg.find("<rect", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 8);
}
