#pragma once

#include <cstdio>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "spacetime/architecture.hpp"

namespace spacetime {

/// Canonical enumeration of the two-qubit Clifford group modulo global phase
/// (11520 elements), built once by closure over {H, S} x {1, 2} and CNOT.
/// Each element carries a generator word, which doubles as the Clifford
/// decomposition into the {I, H, S, CNOT} gate set.
class CliffordTable {
public:
  static const CliffordTable& instance() {
    static CliffordTable table;
    return table;
  }

  std::size_t size() const { return elements_.size(); }
  const Eigen::Matrix4cd& element(std::size_t idx) const { return elements_[idx]; }
  const std::vector<std::string>& word(std::size_t idx) const { return words_[idx]; }

  /// Index of a unitary in the table (phase-insensitive); fails if the matrix
  /// is not a two-qubit Clifford.
  std::size_t index_of(const Eigen::Matrix4cd& u) const {
    const auto it = index_.find(key(u));
    if (it == index_.end())
      fail(Error::Kind::invalid_argument, "matrix is not a two-qubit Clifford");
    return it->second;
  }

private:
  CliffordTable() {
    const char* gens[] = {"HI", "IH", "SI", "IS", "CNOT"};
    std::deque<std::size_t> frontier;
    auto add = [&](const Eigen::Matrix4cd& u, std::vector<std::string> w) {
      const std::string k = key(u);
      if (index_.count(k)) return false;
      index_[k] = elements_.size();
      elements_.push_back(canonical(u));
      words_.push_back(std::move(w));
      return true;
    };
    add(Eigen::Matrix4cd::Identity(), {});
    frontier.push_back(0);
    while (!frontier.empty()) {
      const std::size_t cur = frontier.front();
      frontier.pop_front();
      for (const char* g : gens) {
        const Eigen::Matrix4cd next = gatelib::make(g).u * elements_[cur];
        std::vector<std::string> w = words_[cur];
        w.push_back(g);
        if (add(next, std::move(w))) frontier.push_back(elements_.size() - 1);
      }
    }
    if (elements_.size() != 11520)
      fail(Error::Kind::numeric, "two-qubit Clifford closure has unexpected size");
  }

  static Eigen::Matrix4cd canonical(const Eigen::Matrix4cd& u) {
    for (int i = 0; i < 16; ++i) {
      const cplx v = u(i / 4, i % 4);
      if (std::abs(v) > 1e-8) return (std::conj(v) / std::abs(v)) * u;
    }
    fail(Error::Kind::numeric, "zero matrix");
  }

  static std::string key(const Eigen::Matrix4cd& u) {
    const Eigen::Matrix4cd c = canonical(u);
    std::string k;
    char buf[32];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f;", c(i, j).real() + 0.0,
                      c(i, j).imag() + 0.0);
        k += buf;
      }
    return k;
  }

  std::vector<Eigen::Matrix4cd> elements_;
  std::vector<std::vector<std::string>> words_;
  std::map<std::string, std::size_t> index_;
};

/// Uniform two-qubit Clifford by index sampling from the canonical table.
inline Gate random_two_qubit_clifford(Rng& rng) {
  const auto& table = CliffordTable::instance();
  const std::size_t idx = rng.below(table.size());
  Gate g;
  g.label = "U4";
  g.u = table.element(idx);
  return g;
}

/// Random depth-D circuit: every layer is a fresh random perfect matching
/// with uniform two-qubit Clifford gates.
inline Circuit random_clifford_circuit(int n, int D, std::uint64_t seed) {
  if (n % 2 != 0) fail(Error::Kind::invalid_argument, "odd qubit count");
  Rng rng(seed);
  Circuit c;
  c.arch.n = n;
  c.arch.circular = false;
  for (int d = 0; d < D; ++d) {
    std::vector<int> qubits(n);
    std::iota(qubits.begin(), qubits.end(), 1);
    for (int i = n - 1; i > 0; --i)
      std::swap(qubits[i], qubits[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<std::pair<Layer::value_type, Gate>> slots;
    for (int i = 0; i < n / 2; ++i) {
      int a = qubits[2 * i], b = qubits[2 * i + 1];
      Gate g = random_two_qubit_clifford(rng);
      if (a > b) {
        std::swap(a, b);
        // swap the tensor factors to keep "first factor = lower wire"
        Eigen::Matrix4cd sw = gatelib::make("SWAP").u;
        g.u = (sw * g.u * sw).eval();
      }
      slots.push_back({{a, b}, g});
    }
    std::sort(slots.begin(), slots.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    Layer layer;
    std::vector<Gate> gates;
    for (auto& [pq, g] : slots) {
      layer.push_back(pq);
      gates.push_back(g);
    }
    c.arch.layers.push_back(std::move(layer));
    c.gates.push_back(std::move(gates));
  }
  return c;
}

/// Rewrite every gate as its {I, H, S, CNOT} word; each original layer
/// expands into as many sub-layers as the longest word in it.
inline Circuit decompose_clifford(const Circuit& c) {
  const auto& table = CliffordTable::instance();
  Circuit out;
  out.arch.n = c.arch.n;
  out.arch.circular = c.arch.circular;
  for (std::size_t d = 0; d < c.arch.layers.size(); ++d) {
    std::vector<std::vector<std::string>> words;
    std::size_t longest = 1;
    for (const auto& g : c.gates[d]) {
      if (g.is_identity())
        words.push_back({});
      else
        words.push_back(table.word(table.index_of(g.u)));
      longest = std::max(longest, words.back().size());
    }
    for (std::size_t step = 0; step < longest; ++step) {
      Layer layer = c.arch.layers[d];
      std::vector<Gate> gates;
      for (std::size_t s = 0; s < layer.size(); ++s)
        gates.push_back(step < words[s].size() ? gatelib::make(words[s][step])
                                               : gatelib::identity());
      out.arch.layers.push_back(layer);
      out.gates.push_back(gates);
    }
  }
  return out;
}

struct NicenessWitness {
  bool nice = false;
  std::vector<int> h_layer;  // per qubit, a layer applying H (x) I on it; 0 if none
  std::vector<int> s_layer;
};

/// A circuit is nice when every qubit receives a plain H (x) I gate and a
/// plain S (x) I gate in some layers.
inline NicenessWitness is_nice(const Circuit& c) {
  const int n = c.arch.n;
  NicenessWitness w;
  w.h_layer.assign(n + 1, 0);
  w.s_layer.assign(n + 1, 0);
  for (std::size_t d = 0; d < c.arch.layers.size(); ++d)
    for (std::size_t s = 0; s < c.arch.layers[d].size(); ++s) {
      const auto& [a, b] = c.arch.layers[d][s];
      const std::string& l = c.gates[d][s].label;
      if (l == "HI" && !w.h_layer[a]) w.h_layer[a] = static_cast<int>(d + 1);
      if (l == "IH" && !w.h_layer[b]) w.h_layer[b] = static_cast<int>(d + 1);
      if (l == "SI" && !w.s_layer[a]) w.s_layer[a] = static_cast<int>(d + 1);
      if (l == "IS" && !w.s_layer[b]) w.s_layer[b] = static_cast<int>(d + 1);
    }
  w.nice = true;
  for (int q = 1; q <= n; ++q)
    if (!w.h_layer[q] || !w.s_layer[q]) w.nice = false;
  return w;
}

}  // namespace spacetime
