#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "crux/climber_sim.hpp"
#include "crux/generator.hpp"
#include "crux/grading.hpp"

namespace crux::service {

struct ServiceConfig {
  PopulationSpec population{2000, 0.8, 0.6, 1.75, 0.0, 0.0, 0.0};
  std::uint64_t population_seed = 7;
  GradingOptions grading = [] {
    GradingOptions g;
    g.seed = 11;
    return g;
  }();
  std::int64_t lock_threshold = kDefaultLockThreshold;
  GenerationConfig generation;
  int port = 8977;
  std::string corpus_path = "corpus";
  std::string ui_dir;  // static bundle; empty = not served
  int max_jobs = 2;
};

/// Fields missing from `object` keep their defaults. Throws
/// std::invalid_argument on a wrongly typed field.
ServiceConfig config_from_json(const nlohmann::json& object, ServiceConfig base = {});

/// Reads a JSON config file (when given) and then applies CRUX_CORPUS.
ServiceConfig load_config(const std::optional<std::string>& path);

/// Applies the request-level overrides shared by grade and generate:
/// tnorm, threshold, seed.
GradingOptions grading_from_json(const nlohmann::json& object, GradingOptions base);

GenerationConfig generation_from_json(const nlohmann::json& object, GenerationConfig base);

}  // namespace crux::service
