#pragma once

#include <string>
#include <vector>

#include "spacetime/hamiltonian.hpp"

namespace spacetime {

enum class PauliLetter : unsigned char { I = 0, X = 1, Y = 2, Z = 3 };

/// N-qubit Pauli string with exact phase bookkeeping (phase = i^k).
struct PauliString {
  int phase_power = 0;  // global phase i^phase_power
  std::vector<PauliLetter> letters;

  static PauliString identity(int n) {
    PauliString p;
    p.letters.assign(n, PauliLetter::I);
    return p;
  }

  bool is_identity_letters() const {
    for (auto l : letters)
      if (l != PauliLetter::I) return false;
    return true;
  }

  cplx phase() const {
    static const cplx table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[((phase_power % 4) + 4) % 4];
  }

  std::string to_string() const {
    static const char* ph[4] = {"+", "+i", "-", "-i"};
    std::string s = ph[((phase_power % 4) + 4) % 4];
    for (auto l : letters) s += "IXYZ"[static_cast<int>(l)];
    return s;
  }

  bool operator==(const PauliString& o) const {
    return ((phase_power - o.phase_power) % 4 + 4) % 4 == 0 && letters == o.letters;
  }
};

namespace detail {

/// single-letter product: a * b = i^k c
inline void letter_product(PauliLetter a, PauliLetter b, PauliLetter& c, int& k) {
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  if (ia == 0 || ib == 0) {
    c = static_cast<PauliLetter>(ia | ib);
    k = 0;
    return;
  }
  if (ia == ib) {
    c = PauliLetter::I;
    k = 0;
    return;
  }
  c = static_cast<PauliLetter>(6 - ia - ib);  // remaining letter
  // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i
  const bool forward = (ia == 1 && ib == 2) || (ia == 2 && ib == 3) || (ia == 3 && ib == 1);
  k = forward ? 1 : 3;
}

}  // namespace detail

inline PauliString operator*(const PauliString& a, const PauliString& b) {
  PauliString r;
  r.phase_power = a.phase_power + b.phase_power;
  r.letters.resize(a.letters.size());
  for (std::size_t q = 0; q < a.letters.size(); ++q) {
    int k = 0;
    detail::letter_product(a.letters[q], b.letters[q], r.letters[q], k);
    r.phase_power += k;
  }
  r.phase_power = ((r.phase_power % 4) + 4) % 4;
  return r;
}

/// Apply a Pauli string to a structured state.  Time-register letters act on
/// the compact keys (bit flips and signs); data letters act on the 2^n data
/// vectors.
inline StructuredState apply_pauli(const PauliString& p, const StructuredState& in) {
  const RegisterLayout& lay = in.lay;
  StructuredState out;
  out.lay = lay;
  // split the string
  std::vector<PauliLetter> data_letters(lay.n, PauliLetter::I);
  std::vector<std::pair<int, PauliLetter>> time_letters;  // (compact tb, letter)
  for (int q = 0; q < static_cast<int>(p.letters.size()); ++q) {
    if (p.letters[q] == PauliLetter::I) continue;
    if (q < lay.n) {
      data_letters[q] = p.letters[q];
    } else {
      // invert the global index to a compact time bit
      int tb = -1;
      for (int cand = 0; cand < lay.time_bits(); ++cand)
        if (lay.tb_to_global(cand) == q) {
          tb = cand;
          break;
        }
      time_letters.push_back({tb, p.letters[q]});
    }
  }
  for (const auto& [key, vec] : in.amp) {
    std::uint64_t nkey = key;
    cplx coeff = p.phase();
    for (const auto& [tb, l] : time_letters) {
      const std::uint64_t bit = std::uint64_t{1} << tb;
      const bool b = key & bit;
      switch (l) {
        case PauliLetter::X: nkey ^= bit; break;
        case PauliLetter::Y:
          nkey ^= bit;
          coeff *= b ? cplx(0, -1) : cplx(0, 1);
          break;
        case PauliLetter::Z:
          if (b) coeff = -coeff;
          break;
        default: break;
      }
    }
    Vec v = vec;
    for (int q = 0; q < lay.n; ++q) {
      if (data_letters[q] == PauliLetter::I) continue;
      const std::int64_t bit = std::int64_t{1} << q;
      Vec nv = Vec::Zero(v.size());
      for (std::int64_t x = 0; x < v.size(); ++x) {
        if (v(x) == cplx(0, 0)) continue;
        const bool b = x & bit;
        switch (data_letters[q]) {
          case PauliLetter::X: nv(x ^ bit) += v(x); break;
          case PauliLetter::Y: nv(x ^ bit) += (b ? cplx(0, -1) : cplx(0, 1)) * v(x); break;
          case PauliLetter::Z: nv(x) += b ? -v(x) : v(x); break;
          default: break;
        }
      }
      v = std::move(nv);
    }
    auto [it, fresh] = out.amp.try_emplace(nkey, Vec::Zero(vec.size()));
    it->second += coeff * v;
  }
  return out;
}

}  // namespace spacetime
