#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "spacetime/embedding.hpp"
#include "spacetime/serialize.hpp"
#include "spacetime/wfk.hpp"

namespace spacetime::cli {

inline constexpr const char* kVersion = "0.1.0";

/// A fully deterministic experiment: command, parameters, seed and caps.
struct ExperimentSpec {
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::uint64_t cap = kDefaultEnumCap;
  std::string out_dir;          // empty: no files written
  std::string format = "json";  // json | csv where applicable
};

struct RunResult {
  Json result;
  std::string csv;  // sweeps and trajectories
  Json manifest;
  std::vector<std::string> written;  // file names inside out_dir
};

namespace detail {

inline int param_int(const ExperimentSpec& s, const std::string& key, int fallback = INT_MIN) {
  const auto it = s.params.find(key);
  if (it == s.params.end()) {
    if (fallback == INT_MIN)
      fail(Error::Kind::invalid_argument, "missing required parameter --" + key);
    return fallback;
  }
  return std::stoi(it->second);
}

inline double param_double(const ExperimentSpec& s, const std::string& key, double fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : std::stod(it->second);
}

inline std::string param_str(const ExperimentSpec& s, const std::string& key,
                             const std::string& fallback) {
  const auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

inline Config parse_config(const std::string& text) {
  Config tau;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',' || ch == ' ') {
      if (!cur.empty()) tau.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return tau;
}

inline Architecture arch_from(const ExperimentSpec& s) {
  const int ell = param_int(s, "rank");
  const int m = param_int(s, "m", 1);
  const std::string family = param_str(s, "family", "bitonic");
  if (family == "bitonic") return build_bitonic_block(ell);
  if (family == "product") return build_product(ell, m);
  if (family == "circular") return build_circular(ell, m);
  fail(Error::Kind::invalid_argument, "unknown family: " + family);
}

inline Circuit instance_from(const ExperimentSpec& s) {
  const int ell = param_int(s, "rank");
  const int m = param_int(s, "m");
  const std::string kind = param_str(s, "instance", "identity");
  if (kind == "identity") return circular_identity_instance(ell, m);
  if (kind == "clifford") return circular_clifford_instance(ell, m, s.seed);
  if (kind == "hs") return circular_hs_instance(ell, m);
  if (kind == "j") return circular_j_instance(ell);
  fail(Error::Kind::invalid_argument, "unknown instance kind: " + kind);
}

/// write-temp-then-rename, so partial output never lands under the final name
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

inline Json spectrum_json(const std::vector<Term>& terms, const RegisterLayout& lay, int k) {
  const SparseC h = to_sparse(terms, lay);
  Json out;
  if (h.rows() <= 256) {
    const Eigen::VectorXd ev = dense_eigenvalues(Mat(h));
    int kernel = 0;
    double gap = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) < 1e-10) ++kernel;
      else if (gap == 0.0) gap = ev(i);
    }
    out = Json{{"ground_energy", ev(0)}, {"kernel_dim", kernel}, {"gap", gap},
               {"method", "dense"}};
  } else {
    const int want = std::min<int>(static_cast<int>(h.rows()), (1 << k) + 28);
    const LanczosResult low = lanczos_extremal(h, want, true, 1e-10);
    int kernel = 0;
    double gap = 0.0;
    for (double v : low.values) {
      if (v < 1e-10) ++kernel;
      else if (gap == 0.0) gap = v;
    }
    out = Json{{"ground_energy", low.values[0]}, {"kernel_dim", kernel}, {"gap", gap},
               {"method", "lanczos"}, {"residual", low.residual}};
  }
  return out;
}

}  // namespace detail

/// Execute one experiment.  Deterministic given the spec (seed included).
inline RunResult run(const ExperimentSpec& spec) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  RunResult out;
  Rng rng(spec.seed);
  if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);

  if (spec.command == "count") {
    const std::string family = detail::param_str(spec, "family", "bitonic");
    const int ell = detail::param_int(spec, "rank");
    const int m = detail::param_int(spec, "m", 1);
    CountInt value;
    if (family == "bitonic") value = count_bitonic(ell);
    else if (family == "product") value = count_product(ell, m);
    else if (family == "circular") value = count_circular(ell, m);
    else if (family == "first-layer-incomplete") value = count_first_layer_incomplete(ell);
    else if (family == "qubit-at-zero")
      value = count_qubit_at_zero(ell, m, detail::param_str(spec, "mode", "linear") == "circular");
    else fail(Error::Kind::invalid_argument, "unknown family: " + family);
    out.result = Json{{"a", count_to_json(value)}};
  } else if (spec.command == "enumerate") {
    const Architecture a = detail::arch_from(spec);
    const auto all = enumerate_valid(a, spec.cap);
    Json configs = Json::array();
    for (const auto& tau : all) configs.push_back(config_to_json(tau));
    out.result = Json{{"count", all.size()}, {"configs", configs}};
  } else if (spec.command == "rank") {
    const Architecture a = detail::arch_from(spec);
    const Config tau = detail::parse_config(spec.params.at("config"));
    out.result = Json{{"rank", count_to_json(rank(a, tau))}};
  } else if (spec.command == "unrank") {
    const Architecture a = detail::arch_from(spec);
    const CountInt idx = CountInt::from_decimal(spec.params.at("index"));
    out.result = Json{{"config", config_to_json(unrank(a, idx))}};
  } else if (spec.command == "sample") {
    const Architecture a = detail::arch_from(spec);
    const int count = detail::param_int(spec, "count", 1);
    Json samples = Json::array();
    for (int i = 0; i < count; ++i) samples.push_back(config_to_json(sample_uniform(a, rng)));
    out.result = Json{{"samples", samples}};
  } else if (spec.command == "tile") {
    const int ell = detail::param_int(spec, "rank");
    Config tau;
    if (spec.params.count("config")) {
      tau = detail::parse_config(spec.params.at("config"));
    } else {
      tau = unrank(build_bitonic_block(ell),
                   CountInt::from_decimal(detail::param_str(spec, "index", "0")));
    }
    const DyadicTiling d = config_to_tiling(ell, tau);
    const HVTree t = config_to_hvtree(ell, tau);
    std::string labels(t.label.begin() + 1, t.label.end());
    out.result = Json{{"config", config_to_json(tau)},
                      {"tiling", tiling_to_json(d)},
                      {"hv_tree", labels},
                      {"flippable", flippable_edges(d).size()}};
    if (!spec.out_dir.empty()) {
      detail::atomic_write(std::filesystem::path(spec.out_dir) / "tiling.svg",
                           tiling_to_svg(d));
      out.written.push_back("tiling.svg");
    }
  } else if (spec.command == "mcmc") {
    const Architecture a = detail::arch_from(spec);
    const std::uint64_t steps = std::stoull(detail::param_str(spec, "steps", "100000"));
    const McmcReport rep = mcmc_run(a, steps, spec.seed, true, spec.cap);
    out.result = Json{{"steps", rep.steps},
                      {"tv_to_uniform", rep.tv_to_uniform},
                      {"autocorr_time", rep.autocorr_time},
                      {"gap_estimate", rep.gap_estimate}};
    out.csv = trajectory_to_csv(rep);
  } else if (spec.command == "gap") {
    const std::string kind = detail::param_str(spec, "chain", "laplacian");
    ReversibleChain chain;
    if (kind == "edge-flip") {
      const auto variant = detail::param_str(spec, "variant", "lazy") == "lazy"
                               ? FlipVariant::lazy
                               : FlipVariant::resample;
      chain = edge_flip_chain(detail::param_int(spec, "rank"), variant, spec.cap).chain;
    } else if (kind == "toggle") {
      chain = toggle_chain(config_graph(detail::arch_from(spec), spec.cap));
    } else if (kind == "laplacian") {
      chain = chain_from_laplacian(config_graph(detail::arch_from(spec), spec.cap));
    } else if (kind == "weighted-clock") {
      chain = weighted_clock_chain(detail::param_int(spec, "T"), detail::param_int(spec, "n"),
                                   detail::param_double(spec, "eps", 0.5));
    } else {
      fail(Error::Kind::invalid_argument, "unknown chain kind: " + kind);
    }
    out.result = gap_to_json(chain.states(), spectral_gap(chain));
  } else if (spec.command == "decompose-bound") {
    const int ell = detail::param_int(spec, "rank");
    const int m = detail::param_int(spec, "m");
    const ConfigGraph g = config_graph(build_circular(ell, m), spec.cap);
    const ReversibleChain chain = chain_from_laplacian(g);
    const Decomposition dec = block_decomposition(g, ell);
    const double gap = spectral_gap(chain).gap;
    const double agg = spectral_gap(aggregate_chain(chain, dec)).gap;
    double min_restricted = 1e300;
    for (const auto& block : dec.blocks)
      min_restricted = std::min(min_restricted, spectral_gap(restricted_chain(chain, block)).gap);
    out.result = Json{{"states", g.states.size()},
                      {"blocks", dec.blocks.size()},
                      {"theta", dec.theta},
                      {"gap", gap},
                      {"aggregate_gap", agg},
                      {"min_restricted_gap", min_restricted},
                      {"bound", 0.5 * agg * min_restricted},
                      {"holds", gap >= 0.5 * agg * min_restricted - 1e-10}};
  } else if (spec.command == "hamiltonian") {
    const Circuit c = detail::instance_from(spec);
    const RegisterLayout lay(c.arch.n, c.arch.depth());
    const int k = detail::param_int(spec, "k", 1);
    const auto terms = build_code_hamiltonian(c, lay, k);
    out.result = detail::spectrum_json(terms, lay, k);
    out.result["terms"] = terms.size();
    out.result["qubits"] = lay.total_qubits();
    if (detail::param_str(spec, "emit-terms", "no") == "yes") {
      Json tj = Json::array();
      for (const auto& t : terms) tj.push_back(term_to_json(t, lay));
      out.result["term_list"] = tj;
    }
  } else if (spec.command == "detect") {
    const Circuit c = detail::instance_from(spec);
    const RegisterLayout lay(c.arch.n, c.arch.depth());
    const int k = detail::param_int(spec, "k", 1);
    const int count = detail::param_int(spec, "paulis", 100);
    const auto terms = build_code_hamiltonian(c, lay, k);
    Vec input = Vec::Zero(std::int64_t{1} << lay.n);
    input(0) = 1.0;
    const StructuredState psi = history_state(c, lay, input, spec.cap);
    const auto stab = stabilizer_set(c, lay);
    std::vector<PauliString> paulis;
    for (int i = 0; i < count; ++i) paulis.push_back(random_nonstabilizer(lay, stab, rng));
    const SweepReport rep = detection_sweep(c, lay, terms, psi, paulis);
    out.result = sweep_to_json(rep);
    out.result["stabilizers"] = stab.size();
    std::string csv = "pauli,case,best_term,expectation,threshold,detected\n";
    for (const auto& r : rep.rows)
      csv += r.pauli + "," + r.case_id + "," + std::to_string(r.best_term) + "," +
             std::to_string(r.expectation) + "," + std::to_string(r.threshold) + "," +
             (r.detected ? "1" : "0") + "\n";
    out.csv = csv;
  } else if (spec.command == "route") {
    Permutation pi(0);
    pi.map = detail::parse_config(spec.params.at("perm"));
    const Circuit c = route_permutation(pi);
    out.result = Json{{"circuit", circuit_to_json(c)},
                      {"wire_trace", wire_trace(c).map},
                      {"depth", c.arch.depth()}};
  } else if (spec.command == "uniformize") {
    Circuit input;
    if (spec.params.count("circuit-file")) {
      std::ifstream in(spec.params.at("circuit-file"));
      Json j;
      in >> j;
      input = circuit_from_json(j);
    } else {
      input = random_clifford_circuit(detail::param_int(spec, "n"),
                                      detail::param_int(spec, "depth"), spec.seed);
    }
    const bool merge = detail::param_str(spec, "merge", "yes") == "yes";
    const bool restore = detail::param_str(spec, "restore-frame", "yes") == "yes";
    const Circuit u = uniformize(input, merge, restore);
    out.result = Json{{"input_depth", input.arch.depth()},
                      {"output_depth", u.arch.depth()},
                      {"circuit", circuit_to_json(u)}};
  } else if (spec.command == "embed") {
    const Architecture a = detail::arch_from(spec);
    const RegisterLayout lay(a.n, a.depth());
    const EmbeddingCoords e = hypercube_embedding(a, lay);
    const auto terms = build_code_hamiltonian(Circuit::identity_on(a), lay,
                                              detail::param_int(spec, "k", 1));
    Json coords = Json::array();
    for (const auto& row : e.coords) coords.push_back(row);
    out.result = Json{{"dimension", e.dimension},
                      {"coords", coords},
                      {"min_pairwise_dist2", min_pairwise_dist2(e)},
                      {"max_term_dist2", max_term_dist2(e, terms, lay)}};
  } else if (spec.command == "weighted-fk") {
    const int T = detail::param_int(spec, "T");
    const int n = detail::param_int(spec, "n", 2);
    const int k = detail::param_int(spec, "k", n);
    const double eps = detail::param_double(spec, "eps", 0.5);
    std::vector<SequentialGate> gates;
    for (int j = 0; j < T; ++j)
      gates.push_back({1, 2, random_two_qubit_clifford(rng)});
    const WeightedFk w = build_weighted_fk(gates, n, k, eps);
    const Eigen::VectorXd ev = dense_eigenvalues(w.effective);
    int kernel = 0;
    double gap = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) < 1e-10) ++kernel;
      else if (gap == 0.0) gap = ev(i);
    }
    const Vec psi = weighted_history_state(w, 0);
    const std::int64_t dn = std::int64_t{1} << n;
    const ReversibleChain chain = weighted_clock_chain(T, n, eps);
    std::vector<int> prefix;
    double phi = 1e300;
    for (int t = 0; t < T + n; ++t) {
      prefix.push_back(t);
      phi = std::min(phi, conductance(chain, prefix));
    }
    out.result = Json{{"ground_energy", ev(0)},
                      {"kernel_dim", kernel},
                      {"gap", gap},
                      {"endpoint_weight", psi.segment((T + n) * dn, dn).squaredNorm()},
                      {"min_conductance", phi},
                      {"gap_overlap_product", gap * std::min(w.pi(0), w.pi(T + n))}};
  } else {
    fail(Error::Kind::invalid_argument, "unknown command: " + spec.command);
  }

  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - start);
  Json params;
  for (const auto& [key, value] : spec.params) params[key] = value;
  out.manifest = Json{{"command", spec.command}, {"params", params},
                      {"seed", spec.seed},       {"cap", spec.cap},
                      {"format", spec.format},   {"version", kVersion},
                      {"wall_time_ms", elapsed.count()}};

  if (!spec.out_dir.empty()) {
    detail::atomic_write(std::filesystem::path(spec.out_dir) / "result.json",
                         out.result.dump(2) + "\n");
    out.written.push_back("result.json");
    if (!out.csv.empty() && spec.format == "csv") {
      detail::atomic_write(std::filesystem::path(spec.out_dir) / "result.csv", out.csv);
      out.written.push_back("result.csv");
    }
    detail::atomic_write(std::filesystem::path(spec.out_dir) / "manifest.json",
                         out.manifest.dump(2) + "\n");
    out.written.push_back("manifest.json");
  }
  return out;
}

}  // namespace spacetime::cli
