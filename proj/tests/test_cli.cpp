#include <catch2/catch.hpp>

#include <cstdlib>
#include <fstream>

#include "spacetime/cli.hpp"

using namespace spacetime;
using cli::ExperimentSpec;

namespace {

ExperimentSpec make(const std::string& command,
                    std::map<std::string, std::string> params, std::uint64_t seed = 0) {
  ExperimentSpec s;
  s.command = command;
  s.params = std::move(params);
  s.seed = seed;
  return s;
}

}  // namespace

TEST_CASE("count parity with direct library calls") {
  CHECK(cli::run(make("count", {{"family", "bitonic"}, {"rank", "4"}})).result["a"] ==
        "11047");
  CHECK(cli::run(make("count", {{"family", "circular"}, {"rank", "2"}, {"m", "2"}}))
            .result["a"] == count_circular(2, 2).to_decimal());
  CHECK(cli::run(make("count", {{"family", "product"}, {"rank", "3"}, {"m", "2"}}))
            .result["a"] == count_product(3, 2).to_decimal());
}

TEST_CASE("rank, unrank and sample round trips match the library bit for bit") {
  const Architecture a = build_circular(2, 2);
  Rng lib_rng(7);
  auto spec = make("sample", {{"family", "circular"}, {"rank", "2"}, {"m", "2"},
                              {"count", "5"}}, 7);
  const auto result = cli::run(spec);
  for (int i = 0; i < 5; ++i) {
    const Config direct = sample_uniform(a, lib_rng);
    CHECK(result.result["samples"][i].get<Config>() == direct);
  }
  // determinism across runs
  CHECK(cli::run(spec).result == result.result);

  const Config tau = {1, 0, 1, 0};
  const auto ranked =
      cli::run(make("rank", {{"family", "circular"}, {"rank", "2"}, {"m", "2"},
                             {"config", "1,0,1,0"}}));
  CHECK(ranked.result["rank"] == rank(a, tau).to_decimal());
  const auto back = cli::run(make(
      "unrank", {{"family", "circular"}, {"rank", "2"}, {"m", "2"},
                 {"index", ranked.result["rank"].get<std::string>()}}));
  CHECK(back.result["config"].get<Config>() == tau);
}

TEST_CASE("gap command equals the library gap bit for bit") {
  const auto viaCli =
      cli::run(make("gap", {{"chain", "edge-flip"}, {"rank", "2"}, {"variant", "lazy"}}));
  const GapResult direct = spectral_gap(edge_flip_chain(2, FlipVariant::lazy).chain);
  CHECK(viaCli.result["gap"].get<double>() == direct.gap);
  CHECK(viaCli.result["lambda2"].get<double>() == direct.lambda2);
  CHECK(viaCli.result["gap"].get<double>() > 0.0);
}

TEST_CASE("hamiltonian command reports the n=2 spectrum") {
  const auto r = cli::run(make(
      "hamiltonian", {{"instance", "identity"}, {"rank", "1"}, {"m", "4"}, {"k", "1"}}));
  CHECK(std::abs(r.result["ground_energy"].get<double>()) < 1e-10);
  CHECK(r.result["kernel_dim"] == 2);
}

TEST_CASE("tile command emits the tiling, tree and svg") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "spacetime_cli_test";
  fs::remove_all(dir);
  ExperimentSpec s = make("tile", {{"rank", "2"}, {"config", "0,0,0,0"}});
  s.out_dir = dir.string();
  const auto r = cli::run(s);
  CHECK(r.result["hv_tree"] == "HHH");
  CHECK(r.result["flippable"] == 2);
  CHECK(fs::exists(dir / "tiling.svg"));
  CHECK(fs::exists(dir / "result.json"));
  CHECK(fs::exists(dir / "manifest.json"));
  // manifest makes the run regenerable: command, params, seed, version
  std::ifstream in(dir / "manifest.json");
  Json manifest;
  in >> manifest;
  CHECK(manifest["command"] == "tile");
  CHECK(manifest["params"]["rank"] == "2");
  CHECK(manifest.contains("wall_time_ms"));
  fs::remove_all(dir);
}

TEST_CASE("route and embed parity") {
  const auto r = cli::run(make("route", {{"perm", "4,3,2,1"}}));
  CHECK(r.result["wire_trace"].get<std::vector<int>>() == std::vector<int>{4, 3, 2, 1});
  const auto e = cli::run(make("embed", {{"family", "circular"}, {"rank", "2"}, {"m", "2"}}));
  CHECK(e.result["min_pairwise_dist2"].get<long>() >= 1);
  CHECK(e.result["max_term_dist2"].get<long>() <= 3);
}

TEST_CASE("weighted-fk command reports the chain bottleneck") {
  const auto r = cli::run(make(
      "weighted-fk", {{"T", "3"}, {"n", "2"}, {"k", "2"}, {"eps", "0.25"}}, 5));
  CHECK(std::abs(r.result["ground_energy"].get<double>()) < 1e-10);
  CHECK(r.result["kernel_dim"] == 4);
  CHECK(r.result["endpoint_weight"].get<double>() == Approx(0.75).margin(1e-10));
  CHECK(r.result["min_conductance"].get<double>() == Approx(1.0 / 20).margin(1e-14));
}

TEST_CASE("unknown commands and bad parameters are validation errors") {
  CHECK_THROWS_AS(cli::run(make("frobnicate", {})), Error);
  CHECK_THROWS_AS(cli::run(make("count", {{"family", "nope"}, {"rank", "2"}})), Error);
  try {
    ExperimentSpec s = make("enumerate", {{"family", "bitonic"}, {"rank", "4"}});
    s.cap = 100;
    cli::run(s);
    FAIL("expected cap-exceeded");
  } catch (const Error& e) {
    CHECK(e.kind == Error::Kind::cap_exceeded);
  }
}

#ifdef CLI_BINARY
TEST_CASE("binary smoke test: exit codes and output") {
  const std::string bin = CLI_BINARY;
  CHECK(std::system((bin + " count --param rank=3 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((bin + " count -p family=nope -p rank=2 2>/dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system(
            (bin + " enumerate -p family=bitonic -p rank=4 --cap 100 2>/dev/null").c_str())) == 3);
}
#endif

TEST_CASE("tiling serialization round trips through (a,b,s,t) quadruples") {
  for (const auto& tau : enumerate_valid(build_bitonic_block(3))) {
    const DyadicTiling d = config_to_tiling(3, tau);
    CHECK(tiling_from_json(tiling_to_json(d), 3) == d);
  }
}

TEST_CASE("circuit serialization round trips, generic matrices included") {
  const Circuit c = circular_clifford_instance(2, 2, 31);
  const Circuit back = circuit_from_json(circuit_to_json(c));
  CHECK(back.arch == c.arch);
  for (std::size_t d = 0; d < c.gates.size(); ++d)
    for (std::size_t s = 0; s < c.gates[d].size(); ++s)
      CHECK((back.gates[d][s].u - c.gates[d][s].u).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mcmc command emits a CSV trajectory") {
  auto spec = make("mcmc", {{"family", "bitonic"}, {"rank", "2"}, {"steps", "5000"}}, 4);
  spec.format = "csv";
  const auto r = cli::run(spec);
  CHECK(r.csv.rfind("step,observable\n", 0) == 0);
  CHECK(std::count(r.csv.begin(), r.csv.end(), '\n') > 100);
  CHECK(r.result["tv_to_uniform"].get<double>() >= 0.0);
}
