#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/body.hpp"
#include "crux/grading.hpp"
#include "crux/rng.hpp"
#include "crux/style.hpp"

namespace crux {

struct GenerationConfig {
  GradeLabel target_grade{10, 'a'};
  std::optional<StyleVector> target_style;
  int max_iterations = 2000;
  double initial_temperature = 1.0;
  double cooling_rate = 0.995;
  double w_grade = 1.0;
  double w_reward = 0.5;
  double w_necessity = 0.5;
  std::uint64_t seed = 0;
  int hold_budget = 12;
  // Climbers used for grading inside the loop and for the final re-grade;
  // both are prefixes of the population handed to generate_route.
  int loop_population = 200;
  int final_population = 2000;
  GradingOptions grading;
  RewardWeights reward;
  std::string route_name = "generated";
};

/// Throws Error(kInvalidArgument) for an out-of-range field.
void validate_config(const GenerationConfig& config);

struct GenerationReport {
  int iterations = 0;
  int accepted = 0;
  double best_objective = 0.0;
  std::vector<double> objective_trace;  // best-so-far after each iteration
  GradeLabel achieved_grade{10, 'a'};   // final re-grade
  GradeLabel loop_grade{10, 'a'};       // grade seen inside the loop
  double achieved_reward = 0.0;
  double necessitation_margin = 0.0;
  std::uint64_t seed = 0;
  bool canceled = false;
};

nlohmann::json report_to_json(const GenerationReport& report);

/// Stand-in for "a typical climber": population means, exposure averaged.
ClimberProfile representative_climber(const std::vector<ClimberProfile>& population);

/// Returned when no alternative beta exists.
inline constexpr double kMarginSentinel = 1e9;

/// Moves whose removal from the move-type sequence lowers the reward most,
/// at most three; ties go to the earlier move. Indices ascending.
std::vector<std::size_t> key_moves(const Beta& beta, const std::optional<StyleVector>& target,
                                   const RewardWeights& weights = {});

/// Minimum over key moves of (cost of the best beta that avoids the move's
/// (limb, hold) pair) - beta.total_cost.
double necessitation_margin(const Route& route, const Wall& wall, const Beta& beta,
                            const ClimberProfile& climber,
                            const std::optional<StyleVector>& target = std::nullopt,
                            const RewardWeights& weights = {}, const ModelParams& model = {});

inline constexpr double kUnreachablePenalty = 1e6;

struct ObjectiveTerms {
  double value = kUnreachablePenalty;
  bool reachable = false;
  std::optional<GradeLabel> grade;
  double reward = 0.0;
  double margin = 0.0;
  Beta beta;
};

ObjectiveTerms evaluate_objective(const Route& route, const Wall& wall,
                                  const GenerationConfig& config, const Grader& grader,
                                  const ClimberProfile& climber);

double objective(const Route& route, const Wall& wall, const GenerationConfig& config,
                 const Grader& grader, const ClimberProfile& climber);

struct Candidate {
  Route route;
  Wall wall;
};

/// One random edit: move, retype, add or remove a hold. Invalid edits are
/// retried 16 times before the input comes back unchanged.
Candidate neighbor(const Route& route, const Wall& wall, const Beta* beta, int hold_budget,
                   Rng& rng);

struct GenerationProgress {
  int iteration = 0;
  int max_iterations = 0;
  double best_objective = 0.0;
};

struct GenerationHooks {
  std::function<void(const GenerationProgress&)> on_progress;
  const std::atomic<bool>* cancel = nullptr;
};

struct GenerationResult {
  Route route;
  Wall wall;
  Beta beta;
  GenerationReport report;
};

/// Simulated annealing over hold edits. Deterministic in (inputs, seed).
/// Throws Error(kNoValidStart) when no reachable random route turns up in
/// 1,000 attempts.
GenerationResult generate_route(const Wall& wall, const std::optional<Route>& seed_route,
                                const GenerationConfig& config,
                                const std::vector<GradeSet>& corpus,
                                const std::vector<ClimberProfile>& population,
                                const GenerationHooks& hooks = {});

}  // namespace crux
