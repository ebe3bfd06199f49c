#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spacetime/rng.hpp"

namespace spacetime {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kUnitaryTol = 1e-12;

/// Two-qubit gate acting on an ordered pair (p, q): p is the first tensor
/// factor, so basis index = 2*bit_p + bit_q.
struct Gate {
  std::string label;  // "II","HI","IH","SI","IS","CNOT","SWAP" or "U4"
  Eigen::Matrix4cd u;

  bool is_identity() const { return label == "II"; }
};

namespace gatelib {

inline Eigen::Matrix2cd one_qubit(char g) {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  switch (g) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'H': m << s, s, s, -s; break;
    case 'S': m << 1, 0, 0, cplx(0, 1); break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("unknown 1q gate");
  }
  return m;
}

inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return m;
}

inline Gate make(const std::string& label) {
  Gate g;
  g.label = label;
  if (label == "CNOT") {
    g.u.setZero();
    g.u(0, 0) = g.u(1, 1) = g.u(2, 3) = g.u(3, 2) = 1;
  } else if (label == "SWAP") {
    g.u.setZero();
    g.u(0, 0) = g.u(3, 3) = g.u(1, 2) = g.u(2, 1) = 1;
  } else if (label.size() == 2) {
    g.u = kron2(one_qubit(label[0]), one_qubit(label[1]));
  } else {
    throw std::invalid_argument("unknown gate label: " + label);
  }
  return g;
}

inline Gate generic(const Eigen::Matrix4cd& u) {
  if (!((u.adjoint() * u - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-12))
    throw std::invalid_argument("generic gate matrix is not unitary");
  Gate g;
  g.label = "U4";
  g.u = u;
  return g;
}

inline Gate identity() { return make("II"); }

}  // namespace gatelib

/// Dense n-qubit state vector; qubit i (1-based) lives on bit i-1.
class StateVector {
public:
  explicit StateVector(int n) : n_(n), amp_(Vec::Zero(std::int64_t{1} << n)) {
    amp_(0) = 1.0;
  }
  static StateVector from(const Vec& v, int n) {
    StateVector s(n);
    s.amp_ = v;
    return s;
  }

  int num_qubits() const { return n_; }
  Vec& amplitudes() { return amp_; }
  const Vec& amplitudes() const { return amp_; }

  /// Apply a two-qubit gate to 1-based qubits (p, q); p is the first factor.
  void apply(const Gate& g, int p, int q) {
    if (g.is_identity()) return;
    const std::int64_t bp = std::int64_t{1} << (p - 1);
    const std::int64_t bq = std::int64_t{1} << (q - 1);
    const std::int64_t dim = amp_.size();
    for (std::int64_t x = 0; x < dim; ++x) {
      if ((x & bp) || (x & bq)) continue;
      const std::int64_t i00 = x, i01 = x | bq, i10 = x | bp, i11 = x | bp | bq;
      const cplx a = amp_(i00), b = amp_(i01), c = amp_(i10), d = amp_(i11);
      amp_(i00) = g.u(0, 0) * a + g.u(0, 1) * b + g.u(0, 2) * c + g.u(0, 3) * d;
      amp_(i01) = g.u(1, 0) * a + g.u(1, 1) * b + g.u(1, 2) * c + g.u(1, 3) * d;
      amp_(i10) = g.u(2, 0) * a + g.u(2, 1) * b + g.u(2, 2) * c + g.u(2, 3) * d;
      amp_(i11) = g.u(3, 0) * a + g.u(3, 1) * b + g.u(3, 2) * c + g.u(3, 3) * d;
    }
  }

  void randomize(Rng& rng) {
    for (std::int64_t i = 0; i < amp_.size(); ++i)
      amp_(i) = cplx(rng.gaussian(), rng.gaussian());
    amp_.normalize();
  }

private:
  int n_;
  Vec amp_;
};

}  // namespace spacetime
