#pragma once

#include <string>

#include <json.hpp>

#include "spacetime/detection.hpp"
#include "spacetime/markov.hpp"
#include "spacetime/tiling.hpp"

namespace spacetime {

using Json = nlohmann::json;

// Architecture / circuit schema: {n, depth, circular, layers: [[[p,q,gate]]]}
// with string gate labels; generic matrices ride along as 4x4 row-major
// [re,im] pairs.

inline Json gate_to_json(const Gate& g) {
  if (g.label != "U4") return g.label;
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      rows.push_back(Json::array({g.u(i, j).real(), g.u(i, j).imag()}));
  return Json{{"label", "U4"}, {"matrix", rows}};
}

inline Gate gate_from_json(const Json& j) {
  if (j.is_string()) return gatelib::make(j.get<std::string>());
  Eigen::Matrix4cd u;
  const auto& rows = j.at("matrix");
  for (int i = 0; i < 16; ++i)
    u(i / 4, i % 4) = cplx(rows[i][0].get<double>(), rows[i][1].get<double>());
  return gatelib::generic(u);
}

inline Json circuit_to_json(const Circuit& c) {
  Json layers = Json::array();
  for (std::size_t d = 0; d < c.arch.layers.size(); ++d) {
    Json layer = Json::array();
    for (std::size_t s = 0; s < c.arch.layers[d].size(); ++s) {
      const auto& [p, q] = c.arch.layers[d][s];
      layer.push_back(Json::array({p, q, gate_to_json(c.gates[d][s])}));
    }
    layers.push_back(layer);
  }
  return Json{{"n", c.arch.n},
              {"depth", c.arch.depth()},
              {"circular", c.arch.circular},
              {"layers", layers}};
}

inline Json architecture_to_json(const Architecture& a) {
  return circuit_to_json(Circuit::identity_on(a));
}

inline Circuit circuit_from_json(const Json& j) {
  Circuit c;
  c.arch.n = j.at("n").get<int>();
  c.arch.circular = j.at("circular").get<bool>();
  for (const auto& layer : j.at("layers")) {
    Layer l;
    std::vector<Gate> g;
    for (const auto& slot : layer) {
      l.push_back({slot[0].get<int>(), slot[1].get<int>()});
      g.push_back(gate_from_json(slot[2]));
    }
    c.arch.layers.push_back(std::move(l));
    c.gates.push_back(std::move(g));
  }
  if (static_cast<int>(c.arch.layers.size()) != j.at("depth").get<int>())
    fail(Error::Kind::invalid_argument, "depth field does not match the layer list");
  return c;
}

inline Json config_to_json(const Config& tau) { return Json(tau); }
inline Config config_from_json(const Json& j) { return j.get<Config>(); }

inline Json count_to_json(const CountInt& c) { return c.to_decimal(); }

inline Json tiling_to_json(const DyadicTiling& d) {
  // (a, b, s, t) quadruples of [a 2^-s, (a+1) 2^-s] x [b 2^-t, (b+1) 2^-t]
  Json out = Json::array();
  for (const auto& r : d.rects) {
    int s = d.rank, t = d.rank, w = r.w, h = r.h;
    while (w > 1) {
      w >>= 1;
      --s;
    }
    while (h > 1) {
      h >>= 1;
      --t;
    }
    out.push_back(Json::array({r.x / r.w, r.y / r.h, s, t}));
  }
  return out;
}

inline DyadicTiling tiling_from_json(const Json& j, int rank) {
  DyadicTiling d;
  d.rank = rank;
  for (const auto& quad : j) {
    const int a = quad[0].get<int>(), b = quad[1].get<int>(), s = quad[2].get<int>(),
              t = quad[3].get<int>();
    const int w = 1 << (rank - s), h = 1 << (rank - t);
    d.rects.push_back({a * w, b * h, w, h});
  }
  std::sort(d.rects.begin(), d.rects.end());
  return d;
}

inline Json gap_to_json(std::int64_t states, const GapResult& g) {
  return Json{{"states", states},
              {"gap", g.gap},
              {"lambda2", g.lambda2},
              {"method", g.method},
              {"residual", g.residual}};
}

inline Json term_to_json(const Term& t, const RegisterLayout& lay) {
  Json registers = Json::array();
  for (int q : t.support(lay)) registers.push_back(q);
  Json summands = Json::array();
  for (const auto& s : t.summands) {
    Json bits = Json::array();
    for (const auto& b : s.bits)
      bits.push_back(Json{{"qubit", lay.tb_to_global(b.tb)}, {"ket", b.ket}, {"bra", b.bra}});
    Json matrix = Json::array();
    for (int i = 0; i < s.op.rows(); ++i)
      for (int j = 0; j < s.op.cols(); ++j)
        matrix.push_back(Json::array({s.op(i, j).real(), s.op(i, j).imag()}));
    summands.push_back(Json{{"coeff", Json::array({s.coeff.real(), s.coeff.imag()})},
                            {"bits", bits},
                            {"data_qubits", s.data},
                            {"matrix", matrix}});
  }
  return Json{{"family", t.family}, {"registers", registers}, {"summands", summands}};
}

inline Json sweep_to_json(const SweepReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.rows)
    rows.push_back(Json{{"pauli", r.pauli},
                        {"case", r.case_id},
                        {"best_term", r.best_term},
                        {"expectation", r.expectation},
                        {"threshold", r.threshold},
                        {"detected", r.detected}});
  return Json{{"rows", rows},
              {"all_detected", rep.all_detected},
              {"min_expectation", rep.min_expectation}};
}

inline std::string trajectory_to_csv(const McmcReport& rep) {
  std::string csv = "step,observable\n";
  for (const auto& [step, value] : rep.trace)
    csv += std::to_string(step) + "," + std::to_string(value) + "\n";
  return csv;
}

}  // namespace spacetime
