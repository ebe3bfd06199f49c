#include <catch2/catch.hpp>

#include <map>
#include <set>

#include "spacetime/config.hpp"

using namespace spacetime;

namespace {

/// Brute-force oracle: filter every time vector through is_valid.
std::vector<Config> filter_all(const Architecture& a) {
  const int hi = a.circular ? a.depth() - 1 : a.depth();
  std::vector<Config> out;
  Config cur(a.n, 0);
  for (;;) {
    if (is_valid(a, cur)) out.push_back(cur);
    int k = 0;
    while (k < a.n && cur[k] == hi) cur[k++] = 0;
    if (k == a.n) break;
    ++cur[k];
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("validity on hand-checked B_2 configurations") {
  const Architecture b2 = build_bitonic_block(2);
  CHECK(is_valid(b2, {0, 0, 0, 0}));
  CHECK(is_valid(b2, {1, 0, 1, 0}));
  CHECK_FALSE(is_valid(b2, {2, 2, 0, 0}));
  CHECK_FALSE(is_valid(b2, {1, 0, 0, 0}));
  CHECK_THROWS_AS(is_valid(b2, {0, 0, 0}), Error);
}

TEST_CASE("all-zero is valid on every tested architecture") {
  for (const auto& a : {build_bitonic_block(3), build_product(2, 3), build_circular(3, 2)})
    CHECK(is_valid(a, Config(a.n, 0)));
}

TEST_CASE("BFS enumeration equals the brute-force validity filter") {
  for (const auto& a : {build_bitonic_block(2), build_bitonic_block(3), build_product(2, 2),
                        build_circular(2, 2), build_circular(1, 4), build_circular(2, 3),
                        build_circular(2, 4)}) {
    CHECK(enumerate_valid(a) == filter_all(a));
  }
}

TEST_CASE("counting golden values") {
  CHECK(count_bitonic(1).to_u64() == 2);
  CHECK(count_bitonic(2).to_u64() == 7);
  CHECK(count_bitonic(3).to_u64() == 82);
  CHECK(count_bitonic(4).to_u64() == 11047);
  CHECK(count_first_layer_incomplete(1).to_u64() == 1);
  CHECK(count_first_layer_incomplete(2).to_u64() == 3);
  CHECK(count_first_layer_incomplete(3).to_u64() == 33);
  CHECK(count_product(2, 2).to_u64() == 13);
  CHECK(count_product(3, 1) == count_bitonic(3));
  CHECK(count_product(3, 2).to_u64() == 181);
  CHECK(count_circular(2, 2).to_u64() == 12);
  CHECK(count_circular(1, 5).to_u64() == 5);
  CHECK(count_circular(3, 3).to_u64() == 297);
}

TEST_CASE("enumeration cardinality matches the closed forms") {
  for (int ell = 1; ell <= 4; ++ell)
    CHECK(CountInt(enumerate_valid(build_bitonic_block(ell)).size()) == count_bitonic(ell));
  for (int ell = 1; ell <= 3; ++ell)
    for (int m = 1; m <= 4; ++m) {
      CHECK(CountInt(enumerate_valid(build_product(ell, m)).size()) == count_product(ell, m));
      CHECK(CountInt(enumerate_valid(build_circular(ell, m)).size()) == count_circular(ell, m));
    }
}

TEST_CASE("counting is invariant under qubit relabeling") {
  Rng rng(3);
  const Architecture b3 = build_bitonic_block(3);
  for (int iter = 0; iter < 5; ++iter) {
    Permutation pi(8);
    for (int i = 7; i > 0; --i)
      std::swap(pi.map[i], pi.map[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    CHECK(enumerate_valid(relabel(b3, pi)).size() == 82);
  }
}

TEST_CASE("qubit-at-zero counts match enumeration filters") {
  // linear ell=2: prod_{j<2} a_j = 2
  const Architecture p = build_product(2, 3);
  auto all = enumerate_valid(p);
  for (int q = 0; q < 4; ++q) {
    const auto n0 = std::count_if(all.begin(), all.end(),
                                  [&](const Config& c) { return c[q] == 0; });
    CHECK(CountInt(static_cast<std::uint64_t>(n0)) == count_qubit_at_zero(2, 3, false));
  }
  // circular: identical count for every qubit and every time value
  const Architecture c = build_circular(2, 2);
  auto vc = enumerate_valid(c);
  for (int q = 0; q < 4; ++q)
    for (int t = 0; t < c.depth(); ++t) {
      const auto nt = std::count_if(vc.begin(), vc.end(),
                                    [&](const Config& cfg) { return cfg[q] == t; });
      CHECK(CountInt(static_cast<std::uint64_t>(nt)) == count_qubit_at_zero(2, 2, true));
    }
}

TEST_CASE("width lemma and dichotomy, exhaustive through rank 4") {
  for (int ell = 1; ell <= 4; ++ell) {
    const Architecture b = build_bitonic_block(ell);
    for (const auto& tau : enumerate_valid(b)) {
      CHECK(width(b, tau) < ell);
      const bool layer1_full = std::all_of(tau.begin(), tau.end(), [](int t) { return t >= 1; });
      const bool layerL_empty =
          std::all_of(tau.begin(), tau.end(), [&](int t) { return t <= ell - 1 || t == ell; });
      // layer ell unapplied <=> no qubit has passed it
      const bool last_empty = std::all_of(tau.begin(), tau.end(), [&](int t) { return t < ell; });
      (void)layerL_empty;
      CHECK((layer1_full || last_empty));
    }
  }
}

TEST_CASE("circular configurations fit inside an ell-layer window") {
  const Architecture c = build_circular(3, 4);
  for (const auto& tau : enumerate_valid(c)) CHECK(width(c, tau) < 3);
}

TEST_CASE("moves: empty and full block configurations") {
  const Architecture b2 = build_bitonic_block(2);
  const auto from_empty = available_moves(b2, {0, 0, 0, 0});
  REQUIRE(from_empty.size() == 2);
  for (const auto& mv : from_empty) {
    CHECK(mv.layer == 1);
    CHECK(mv.apply);
  }
  const auto from_full = available_moves(b2, {2, 2, 2, 2});
  REQUIRE(from_full.size() == 2);
  for (const auto& mv : from_full) {
    CHECK(mv.layer == 2);
    CHECK_FALSE(mv.apply);
  }
}

TEST_CASE("every move is its own inverse") {
  const Architecture a = build_circular(2, 2);
  for (const auto& tau : enumerate_valid(a))
    for (const auto& mv : available_moves(a, tau)) {
      Config nxt = apply_move(a, tau, mv);
      CHECK(is_valid(a, nxt));
      Move back{mv.layer, mv.slot, !mv.apply};
      CHECK(apply_move(a, nxt, back) == tau);
    }
}

TEST_CASE("rank/unrank bijection on blocks, products and circulars") {
  std::vector<Architecture> archs = {build_bitonic_block(1), build_bitonic_block(2),
                                     build_bitonic_block(3), build_bitonic_block(4),
                                     build_product(2, 2),    build_product(2, 4),
                                     build_product(3, 2),    build_circular(2, 2),
                                     build_circular(2, 4),   build_circular(3, 4),
                                     build_circular(1, 6)};
  for (const auto& a : archs) {
    const auto all = enumerate_valid(a);
    REQUIRE(CountInt(all.size()) == count_valid(a));
    std::set<std::string> ranks;
    for (const auto& tau : all) {
      const CountInt r = rank(a, tau);
      CHECK(r < count_valid(a));
      CHECK(unrank(a, r) == tau);
      ranks.insert(r.to_decimal());
    }
    CHECK(ranks.size() == all.size());
  }
}

TEST_CASE("B_1 index layout: v-configuration first") {
  const Architecture b1 = build_bitonic_block(1);
  CHECK(unrank(b1, CountInt(0)) == Config{1, 1});
  CHECK(unrank(b1, CountInt(1)) == Config{0, 0});
  CHECK_THROWS_AS(unrank(b1, CountInt(2)), Error);
}

TEST_CASE("ranks of B_4 cover exactly 0..11046") {
  const Architecture b4 = build_bitonic_block(4);
  const auto all = enumerate_valid(b4);
  std::set<std::uint64_t> rs;
  for (const auto& tau : all) rs.insert(rank(b4, tau).to_u64());
  CHECK(rs.size() == 11047);
  CHECK(*rs.begin() == 0);
  CHECK(*rs.rbegin() == 11046);
}

TEST_CASE("uniform sampler: validity and determinism") {
  const Architecture a = build_circular(3, 4);
  Rng r1(99), r2(99);
  for (int i = 0; i < 100; ++i) {
    const Config s1 = sample_uniform(a, r1), s2 = sample_uniform(a, r2);
    CHECK(s1 == s2);
    CHECK(is_valid(a, s1));
  }
}

TEST_CASE("asymptotics: (a_ell phi)^(1/2^ell) is monotone toward 1.8445") {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  double prev = 0.0;
  double last = 0.0;
  for (int ell = 1; ell <= 12; ++ell) {
    const double v =
        std::exp2((count_bitonic(ell).log2() + std::log2(phi)) / std::exp2(ell));
    CHECK(v >= prev - 1e-12);
    prev = v;
    last = v;
  }
  CHECK(std::abs(last - 1.8445) < 0.01);
}

TEST_CASE("count cap raises cap-exceeded") {
  CHECK_THROWS_AS(enumerate_valid(build_bitonic_block(4), 1000), Error);
  try {
    enumerate_valid(build_bitonic_block(4), 1000);
  } catch (const Error& e) {
    CHECK(e.kind == Error::Kind::cap_exceeded);
  }
}

TEST_CASE("circular sampler: qubit-1 time marginal is uniform within 3 sigma") {
  const Architecture a = build_circular(2, 2);
  Rng rng(5150);
  const int samples = 20000;
  std::vector<int> hist(4, 0);
  for (int i = 0; i < samples; ++i) hist[sample_uniform(a, rng)[0]]++;
  const double expect = samples / 4.0;
  const double sigma = std::sqrt(samples * 0.25 * 0.75);
  for (int t = 0; t < 4; ++t) CHECK(std::abs(hist[t] - expect) <= 3 * sigma);
}
