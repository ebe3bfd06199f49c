// Renders a random walk on rank-4 dyadic tilings as SVG frames.

#include <cstdio>
#include <fstream>

#include "spacetime/tiling.hpp"

using namespace spacetime;

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 7;
  Rng rng(seed);
  const int ell = 4;
  const Architecture block = build_bitonic_block(ell);
  Config tau(block.n, 0);
  for (int frame = 0; frame < 6; ++frame) {
    const DyadicTiling d = config_to_tiling(ell, tau);
    const std::string name = "tiling_frame_" + std::to_string(frame) + ".svg";
    std::ofstream(name) << tiling_to_svg(d);
    std::printf("%s: %zu flippable edges\n", name.c_str(), flippable_edges(d).size());
    for (int step = 0; step < 8; ++step) {
      const auto moves = available_moves(block, tau);
      tau = apply_move(block, tau, moves[rng.below(moves.size())]);
    }
  }
  return 0;
}
