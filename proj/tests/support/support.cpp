#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "crux/climber_sim.hpp"

namespace crux::test {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load(const std::string& name) {
  auto parsed = parse_document(read_text(fixture(name)));
  if (!parsed.ok()) throw std::runtime_error(name + ": " + parsed.errors.front().message);
  return std::move(*parsed.document);
}

std::vector<std::filesystem::path> all_fixture_documents() {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(CRUX_FIXTURE_DIR)) {
    if (entry.is_regular_file() && entry.path().extension() == ".crux") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GradedRoute> corpus_routes() {
  const auto dir = fixture("corpus");
  const auto meta = nlohmann::json::parse(read_text(dir / "meta.json"));
  std::vector<GradedRoute> out;
  for (const auto& path : all_fixture_documents()) {
    if (path.parent_path() != dir) continue;
    auto parsed = parse_document(read_text(path));
    if (!parsed.ok()) throw std::runtime_error(path.string() + " does not parse");
    for (auto route : parsed.document->routes) {
      if (meta["routes"].contains(route.name)) {
        const auto& m = meta["routes"][route.name];
        route.exposure_count = m.value("exposure_count", std::int64_t{0});
        route.grade_locked = m.value("grade_locked", false);
      }
      out.push_back({std::move(route), parsed.document->wall});
    }
  }
  return out;
}

std::vector<ClimberProfile> reference_population(int size) {
  PopulationSpec spec;
  spec.size = size;
  spec.ability_mean = 0.8;
  spec.ability_std = 0.6;
  return sample_population(spec, 7);
}

RandomCase random_case(Rng& rng, int max_holds) {
  RandomCase c;
  c.wall.width = 3.0;
  c.wall.height = 4.5;
  const double split = rng.uniform(1.5, 3.0);
  c.wall.panels.push_back({0.0, split, 90.0});
  c.wall.panels.push_back({split, 4.5, rng.bernoulli(0.5) ? rng.uniform(90.0, 135.0) : 90.0});

  const int n = 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_holds - 2)));
  double y = rng.uniform(0.8, 1.2);
  for (int i = 0; i < n; ++i) {
    Hold h;
    h.id = "h" + std::to_string(i);
    h.x = rng.uniform(0.9, 2.1);
    h.y = y;
    y += rng.uniform(0.15, 0.45);
    h.type = static_cast<HoldType>(rng.below(7));
    h.difficulty = std::round(rng.uniform(0.0, 0.8) * 1000.0) / 1000.0;
    if (h.type == HoldType::kFoothold) {
      h.roles = {false, true};
    } else {
      h.roles = {true, rng.bernoulli(0.6)};
    }
    c.wall.holds.push_back(h);
  }
  // Start and finish must take hands.
  for (int i : {0, n - 1}) {
    if (c.wall.holds[static_cast<std::size_t>(i)].type == HoldType::kFoothold) {
      c.wall.holds[static_cast<std::size_t>(i)].type = HoldType::kJug;
      c.wall.holds[static_cast<std::size_t>(i)].roles = {true, true};
    }
  }
  c.route.name = "random";
  for (const auto& h : c.wall.holds) c.route.hold_ids.push_back(h.id);
  c.route.start_hold_ids = {"h0"};
  c.route.finish_hold_id = "h" + std::to_string(n - 1);

  c.climber.ability = rng.uniform(0.0, 1.5);
  c.climber.height = rng.uniform(1.55, 1.95);
  c.climber.arm_span = c.climber.height * rng.uniform(0.97, 1.05);
  c.climber.fear_sensitivity = rng.bernoulli(0.5) ? rng.uniform(0.0, 1.0) : 0.0;
  if (rng.bernoulli(0.5)) {
    double total = 0.0;
    for (auto& e : c.climber.exposure) {
      e = rng.uniform(0.01, 1.0);
      total += e;
    }
    for (auto& e : c.climber.exposure) e /= total;
  }
  return c;
}

}  // namespace crux::test
