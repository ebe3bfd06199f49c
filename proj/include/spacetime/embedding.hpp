#pragma once

#include <vector>

#include "spacetime/hamiltonian.hpp"

namespace spacetime {

/// 0/1 coordinates in R^{ell+1+X} for every physical register, one row per
/// global qubit of the layout.
struct EmbeddingCoords {
  int dimension = 0;
  std::vector<std::vector<int>> coords;  // indexed by global qubit

  /// exact squared Euclidean distance
  long dist2(int a, int b) const {
    long s = 0;
    for (int d = 0; d < dimension; ++d) {
      const long diff = coords[a][d] - coords[b][d];
      s += diff * diff;
    }
    return s;
  }
};

/// emb(S_i) = (h(i), 0, 0^X), emb(F_i) = (h(i), 1, 0^X),
/// emb(C_{i,j}) = (h(i), 0, e_j), with h the hypercube corner labeling that
/// makes interacting qubits differ in exactly one coordinate.
inline EmbeddingCoords hypercube_embedding(const Architecture& arch, const RegisterLayout& lay) {
  int ell = 0;
  while ((1 << ell) < arch.n) ++ell;
  if ((1 << ell) != arch.n)
    fail(Error::Kind::unsupported, "unsupported-architecture: width not a power of two");
  // bitonic structure: every interacting pair differs in exactly one bit
  for (const auto& layer : arch.layers)
    for (const auto& [p, q] : layer) {
      const int diff = (p - 1) ^ (q - 1);
      if (diff == 0 || (diff & (diff - 1)) != 0)
        fail(Error::Kind::unsupported,
             "unsupported-architecture: interaction graph is not the hypercube");
    }
  EmbeddingCoords e;
  e.dimension = ell + 1 + lay.X;
  e.coords.assign(lay.total_qubits(), std::vector<int>(e.dimension, 0));
  auto corner = [&](int i, std::vector<int>& row) {
    for (int b = 0; b < ell; ++b) row[b] = ((i - 1) >> b) & 1;
  };
  for (int i = 1; i <= lay.n; ++i) {
    corner(i, e.coords[lay.data_qubit(i)]);
    corner(i, e.coords[lay.flag_qubit(i)]);
    e.coords[lay.flag_qubit(i)][ell] = 1;
    for (int j = 1; j <= lay.X; ++j) {
      corner(i, e.coords[lay.clock_qubit(i, j)]);
      e.coords[lay.clock_qubit(i, j)][ell + j] = 1;
    }
  }
  return e;
}

/// Smallest pairwise squared distance between distinct registers.
inline long min_pairwise_dist2(const EmbeddingCoords& e) {
  long best = LONG_MAX;
  for (std::size_t a = 0; a < e.coords.size(); ++a)
    for (std::size_t b = a + 1; b < e.coords.size(); ++b)
      best = std::min(best, e.dist2(static_cast<int>(a), static_cast<int>(b)));
  return best;
}

/// Largest squared distance inside any Hamiltonian term's support.
inline long max_term_dist2(const EmbeddingCoords& e, const std::vector<Term>& terms,
                           const RegisterLayout& lay) {
  long worst = 0;
  for (const auto& t : terms) {
    const auto sup = t.support(lay);
    for (std::size_t a = 0; a < sup.size(); ++a)
      for (std::size_t b = a + 1; b < sup.size(); ++b)
        worst = std::max(worst, e.dist2(sup[a], sup[b]));
  }
  return worst;
}

}  // namespace spacetime
