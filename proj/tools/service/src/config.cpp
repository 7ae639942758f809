#include "crux/service/config.hpp"

#include <cstdlib>
#include <stdexcept>

#include "crux/service/json_io.hpp"
#include "crux/style.hpp"

namespace crux::service {

namespace {

template <typename T>
void read(const nlohmann::json& object, const char* key, T& out) {
  if (!object.contains(key)) return;
  try {
    out = object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string(key) + ": wrong type");
  }
}

}  // namespace

GradingOptions grading_from_json(const nlohmann::json& object, GradingOptions base) {
  if (object.contains("tnorm")) {
    const auto& v = object.at("tnorm");
    const auto kind = v.is_string() ? parse_tnorm(v.get<std::string>()) : std::nullopt;
    if (!kind) throw std::invalid_argument("tnorm: expected product, minimum or lukasiewicz");
    base.tnorm = *kind;
  }
  read(object, "threshold", base.threshold);
  read(object, "seed", base.seed);
  read(object, "min_qualifiers", base.min_qualifiers);
  if (!(base.threshold > 0.0 && base.threshold < 1.0)) {
    throw std::invalid_argument("threshold: must lie in (0,1)");
  }
  return base;
}

GenerationConfig generation_from_json(const nlohmann::json& object, GenerationConfig base) {
  if (!object.is_object()) throw std::invalid_argument("generation config: expected an object");
  if (object.contains("target_grade")) {
    const auto& v = object.at("target_grade");
    const auto grade = v.is_string() ? GradeLabel::parse(v.get<std::string>()) : std::nullopt;
    if (!grade) throw std::invalid_argument("target_grade: not a grade label");
    base.target_grade = *grade;
  }
  if (object.contains("target_style") && !object.at("target_style").is_null()) {
    const auto style = style_from_json(object.at("target_style"));
    if (!style) throw std::invalid_argument("target_style: expected {move_type: weight}");
    base.target_style = *style;
  }
  read(object, "max_iterations", base.max_iterations);
  read(object, "initial_temperature", base.initial_temperature);
  read(object, "cooling_rate", base.cooling_rate);
  read(object, "w_grade", base.w_grade);
  read(object, "w_reward", base.w_reward);
  read(object, "w_necessity", base.w_necessity);
  read(object, "seed", base.seed);
  read(object, "hold_budget", base.hold_budget);
  read(object, "loop_population", base.loop_population);
  read(object, "final_population", base.final_population);
  read(object, "route_name", base.route_name);
  return base;
}

ServiceConfig config_from_json(const nlohmann::json& object, ServiceConfig base) {
  if (!object.is_object()) throw std::invalid_argument("config: expected an object");
  if (object.contains("population")) {
    base.population = population_from_json(object.at("population"), base.population);
  }
  read(object, "population_seed", base.population_seed);
  if (object.contains("grading")) base.grading = grading_from_json(object.at("grading"), base.grading);
  read(object, "lock_threshold", base.lock_threshold);
  if (object.contains("generation")) {
    base.generation = generation_from_json(object.at("generation"), base.generation);
  }
  read(object, "port", base.port);
  read(object, "corpus", base.corpus_path);
  read(object, "ui_dir", base.ui_dir);
  read(object, "max_jobs", base.max_jobs);
  if (base.max_jobs < 1) throw std::invalid_argument("max_jobs: must be at least 1");
  if (base.lock_threshold < 1) throw std::invalid_argument("lock_threshold: must be at least 1");
  return base;
}

ServiceConfig load_config(const std::optional<std::string>& path) {
  ServiceConfig config;
  if (path) {
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(read_file(*path));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::invalid_argument(*path + ": " + e.what());
    }
    config = config_from_json(object, config);
  }
  if (const char* env = std::getenv("CRUX_CORPUS"); env != nullptr && *env != '\0') {
    config.corpus_path = env;
  }
  return config;
}

}  // namespace crux::service
