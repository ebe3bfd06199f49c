#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "spacetime/clifford.hpp"
#include "spacetime/instances.hpp"
#include "spacetime/pauli.hpp"

namespace spacetime {

/// The four clock qubits {C_{p,j}, C_{q1,j}, C_{q2,j}, C_{p',j}} coupled by
/// the two gate layers that flip clock qubit j (gate times j-1 and 2X+1-j).
/// On rank-2 circular products those layers share a matching and the set
/// degenerates to a pair.
inline std::vector<int> rect(const Circuit& c, const RegisterLayout& lay, int p, int j) {
  if (j < 1 || j > lay.X) fail(Error::Kind::invalid_argument, "clock index out of range");
  const int D = lay.D;
  const int layer1 = ((j - 1) % D) + 1;            // gate time j-1
  const int layer2 = ((2 * lay.X + 1 - j) % D) + 1;  // gate time 2X+1-j
  const int q1 = c.arch.partner(p, layer1);
  const int q2 = c.arch.partner(p, layer2);
  const int pp = c.arch.partner(q1, layer2);
  std::set<int> s = {p, q1, q2, pp};
  return std::vector<int>(s.begin(), s.end());
}

/// Z-type Pauli supported on the given global qubits.
inline PauliString z_string(const RegisterLayout& lay, const std::vector<int>& global_qubits) {
  PauliString p = PauliString::identity(lay.total_qubits());
  for (int q : global_qubits) p.letters[q] = PauliLetter::Z;
  return p;
}

/// Product closure of {I, S_flag} and the S_clock rectangle operators.
inline std::vector<PauliString> stabilizer_set(const Circuit& c, const RegisterLayout& lay) {
  std::vector<PauliString> gens;
  {
    std::vector<int> flags;
    for (int i = 1; i <= lay.n; ++i) flags.push_back(lay.flag_qubit(i));
    gens.push_back(z_string(lay, flags));
  }
  std::set<std::vector<int>> seen_rects;
  for (int p = 1; p <= lay.n; ++p)
    for (int j = 1; j <= lay.X; ++j) {
      std::vector<int> clocks;
      for (int x : rect(c, lay, p, j)) clocks.push_back(lay.clock_qubit(x, j));
      std::sort(clocks.begin(), clocks.end());
      if (seen_rects.insert(clocks).second) gens.push_back(z_string(lay, clocks));
    }
  // abelian Z-type closure: all subset products, deduplicated
  std::set<std::vector<PauliLetter>> seen;
  std::vector<PauliString> closure = {PauliString::identity(lay.total_qubits())};
  seen.insert(closure[0].letters);
  for (const auto& g : gens) {
    const std::size_t sz = closure.size();
    for (std::size_t i = 0; i < sz; ++i) {
      PauliString prod = closure[i] * g;
      if (seen.insert(prod.letters).second) closure.push_back(prod);
    }
  }
  return closure;
}

/// <psi| P^dagger h P |psi> for every term; returns the per-term expectations.
inline std::vector<double> pauli_term_energies(const std::vector<Term>& terms,
                                               const PauliString& p,
                                               const StructuredState& psi) {
  const StructuredState moved = apply_pauli(p, psi);
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back(std::real(expectation({t}, moved)));
  return out;
}

inline double pauli_energy(const std::vector<Term>& terms, const PauliString& p,
                           const StructuredState& psi) {
  double sum = 0.0;
  for (double e : pauli_term_energies(terms, p, psi)) sum += e;
  return sum;
}

/// Syntactic classifier for the weak-detection case analysis.
inline std::string classify_pauli(const Circuit& c, const RegisterLayout& lay,
                                  const PauliString& p) {
  bool clock_x = false, flag_x = false, data_nonid = false, clock_z = false, flag_z = false;
  int flag_x_count = 0;
  for (int q = 0; q < lay.total_qubits(); ++q) {
    const PauliLetter l = p.letters[q];
    if (l == PauliLetter::I) continue;
    const bool is_data = q < lay.n;
    const bool is_flag = q >= lay.n && q < 2 * lay.n;
    const bool xy = l == PauliLetter::X || l == PauliLetter::Y;
    if (is_data) data_nonid = true;
    else if (is_flag) {
      if (xy) {
        flag_x = true;
        ++flag_x_count;
      } else
        flag_z = true;
    } else {
      if (xy) clock_x = true;
      else clock_z = true;
    }
  }
  if (clock_x) return "1";
  if (flag_x) return flag_x_count == lay.n ? "2.1" : "2.2";
  if (data_nonid) return "3.1";
  if (clock_z) {
    // aligned iff Z on C_{p,j} forces Z on C_{q,j} across each rect
    for (int pq = 1; pq <= lay.n; ++pq)
      for (int j = 1; j <= lay.X; ++j) {
        const auto r = rect(c, lay, pq, j);
        bool any = false, all = true;
        for (int x : r) {
          const bool z = p.letters[lay.clock_qubit(x, j)] == PauliLetter::Z;
          any = any || z;
          all = all && z;
        }
        if (any && !all) return "3.2.1.1";
      }
    return "3.2.1.2";
  }
  if (flag_z) return "3.2.2";
  return "identity";
}

struct SweepRow {
  std::string pauli;
  std::string case_id;
  int best_term = -1;
  double expectation = 0.0;
  double threshold = 0.0;
  bool detected = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool all_detected = true;
  double min_expectation = 0.0;
};

/// Energy sweep of Pauli errors against the local terms of the code
/// Hamiltonian on an exact codeword.
inline SweepReport detection_sweep(const Circuit& c, const RegisterLayout& lay,
                                   const std::vector<Term>& terms, const StructuredState& psi,
                                   const std::vector<PauliString>& paulis) {
  SweepReport rep;
  rep.min_expectation = 1e300;
  const double threshold = 1.0 / (static_cast<double>(lay.D) * lay.D);
  for (const auto& p : paulis) {
    const auto energies = pauli_term_energies(terms, p, psi);
    SweepRow row;
    row.pauli = p.to_string();
    row.case_id = classify_pauli(c, lay, p);
    row.threshold = threshold;
    for (std::size_t i = 0; i < energies.size(); ++i)
      if (energies[i] > row.expectation) {
        row.expectation = energies[i];
        row.best_term = static_cast<int>(i);
      }
    row.detected = row.expectation >= threshold - 1e-9;
    rep.all_detected = rep.all_detected && row.detected;
    rep.min_expectation = std::min(rep.min_expectation, row.expectation);
    rep.rows.push_back(row);
  }
  return rep;
}

/// Uniform random Pauli string outside the stabilizer set (letters only,
/// positive phase), deterministic under the rng.
inline PauliString random_nonstabilizer(const RegisterLayout& lay,
                                        const std::vector<PauliString>& stabilizers, Rng& rng) {
  std::set<std::vector<PauliLetter>> stab;
  for (const auto& s : stabilizers) stab.insert(s.letters);
  for (;;) {
    PauliString p = PauliString::identity(lay.total_qubits());
    bool nontrivial = false;
    for (auto& l : p.letters) {
      l = static_cast<PauliLetter>(rng.below(4));
      nontrivial = nontrivial || l != PauliLetter::I;
    }
    if (nontrivial && !stab.count(p.letters)) return p;
  }
}

}  // namespace spacetime
