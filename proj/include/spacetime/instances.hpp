#pragma once

#include "spacetime/clifford.hpp"
#include "spacetime/config.hpp"

namespace spacetime {

// Canonical circular circuits on bitonic product architectures with net
// action equal to the identity, as the circular construction assumes.
// Nontrivial content is placed on one block-layer matching and undone on the
// same matching one block later, with identity layers in between.

inline Circuit circular_identity_instance(int ell, int m) {
  return Circuit::identity_on(build_circular(ell, m));
}

/// Random two-qubit Cliffords on the first layer, inverted one block later.
inline Circuit circular_clifford_instance(int ell, int m, std::uint64_t seed) {
  if (m < 2) fail(Error::Kind::invalid_argument, "closing content needs m >= 2");
  Rng rng(seed);
  Circuit c = circular_identity_instance(ell, m);
  const std::size_t slots = c.arch.layers[0].size();
  for (std::size_t s = 0; s < slots; ++s) {
    Gate g = random_two_qubit_clifford(rng);
    c.gates[0][s] = g;
    Gate ginv;
    ginv.label = "U4";
    ginv.u = g.u.adjoint();
    c.gates[ell][s] = ginv;  // same matching, one block later
  }
  return c;
}

/// Content (HS)(x)(HS) on the first layer, undone a block later.  Every data
/// qubit sees the HS Clifford, whose conjugation keeps sigma_X, sigma_Y and
/// sigma_Z detectable through a single gate type.
inline Circuit circular_hs_instance(int ell, int m) {
  if (m < 2) fail(Error::Kind::invalid_argument, "closing content needs m >= 2");
  Circuit c = circular_identity_instance(ell, m);
  const Eigen::Matrix2cd hs = gatelib::one_qubit('H') * gatelib::one_qubit('S');
  Gate g;
  g.label = "U4";
  g.u = gatelib::kron2(hs, hs);
  Gate ginv;
  ginv.label = "U4";
  ginv.u = g.u.adjoint();
  for (std::size_t s = 0; s < c.arch.layers[0].size(); ++s) {
    c.gates[0][s] = g;
    c.gates[ell][s] = ginv;
  }
  return c;
}

/// The identity-equivalent subcircuit J as a circular instance: two bitonic
/// blocks whose last layers hold sigma_X (x) sigma_X on every pair, all other
/// slots identity.
inline Circuit circular_j_instance(int ell) {
  Circuit c = circular_identity_instance(ell, 2);
  const Gate xx = gatelib::make("XX");
  for (std::size_t s = 0; s < c.arch.layers[ell - 1].size(); ++s) {
    c.gates[ell - 1][s] = xx;          // last layer of block 1
    c.gates[2 * ell - 1][s] = xx;      // last layer of block 2
  }
  return c;
}

/// Statevector check that a circular instance multiplies out to the identity.
inline bool is_identity_circuit(const Circuit& c, double tol = 1e-10) {
  const std::int64_t dim = std::int64_t{1} << c.arch.n;
  for (std::int64_t x = 0; x < dim; ++x) {
    Vec in = Vec::Zero(dim);
    in(x) = 1.0;
    const Vec out = apply_circuit(c, in);
    if (std::abs(out(x) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace spacetime
