#include <benchmark/benchmark.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "crux/climber_sim.hpp"
#include "crux/format.hpp"
#include "crux/grading.hpp"
#include "crux/planner.hpp"

namespace {

namespace fs = std::filesystem;

std::string read(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

crux::Document load(const std::string& name) {
  return *crux::parse_document(read(fs::path(CRUX_FIXTURE_DIR) / name)).document;
}

std::vector<crux::GradedRoute> corpus() {
  std::vector<crux::GradedRoute> out;
  for (const auto& e : fs::directory_iterator(fs::path(CRUX_FIXTURE_DIR) / "corpus")) {
    if (e.path().extension() != ".crux") continue;
    auto doc = *crux::parse_document(read(e.path())).document;
    for (auto& r : doc.routes) {
      r.grade_locked = true;
      out.push_back({r, doc.wall});
    }
  }
  return out;
}

void BM_Parse(benchmark::State& state) {
  const auto text = read(fs::path(CRUX_FIXTURE_DIR) / "corpus" / "c11a_01.crux");
  for (auto _ : state) benchmark::DoNotOptimize(crux::parse_document(text));
}
BENCHMARK(BM_Parse);

void BM_PlanBeta(benchmark::State& state) {
  const auto doc = load("corpus/c11a_01.crux");
  crux::ClimberProfile c;
  c.ability = 0.8;
  for (auto _ : state) benchmark::DoNotOptimize(crux::plan_beta(doc.routes[0], doc.wall, c));
}
BENCHMARK(BM_PlanBeta);

void BM_PlanBetaWithFeet(benchmark::State& state) {
  const auto doc = load("mantle.crux");
  crux::ClimberProfile c;
  c.exposure = {0.05, 0.05, 0.05, 0.05, 0.7, 0.05, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(crux::plan_beta(doc.routes[0], doc.wall, c));
}
BENCHMARK(BM_PlanBetaWithFeet);

void BM_GradeRoute(benchmark::State& state) {
  crux::PopulationSpec spec;
  spec.size = static_cast<int>(state.range(0));
  spec.ability_mean = 0.8;
  spec.ability_std = 0.6;
  crux::GradingOptions options;
  options.seed = 11;
  const crux::Grader grader(crux::group_by_grade(corpus(), true),
                            crux::sample_population(spec, 7), options);
  const auto doc = load("trap.crux");
  for (auto _ : state) benchmark::DoNotOptimize(grader.assign(doc.routes[0], doc.wall));
}
BENCHMARK(BM_GradeRoute)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
