#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/body.hpp"
#include "crux/model.hpp"

namespace crux {

// Thresholds of the move taxonomy, in meters or as fractions of reach.
inline constexpr double kDynoArmSpanFraction = 0.85;
inline constexpr double kMantleProximity = 0.3;
inline constexpr double kHighStepReachFraction = 0.6;

/// First matching rule wins: match, cross, dyno, mantle (heel beside a hand's
/// ledge, or the press off a heeled ledge), high step, foot swap, reach.
MoveType classify_move(const Move& move, const BodyState& from, const Wall& wall,
                       const ClimberProfile& climber = {});

struct StyleVector {
  std::array<double, kMoveTypeCount> weights = ClimberProfile::uniform_exposure();

  double operator[](MoveType type) const { return weights[static_cast<std::size_t>(type)]; }

  friend bool operator==(const StyleVector&, const StyleVector&) = default;
};

/// Normalized histogram of move types; an empty beta is uniform.
StyleVector style_vector(const Beta& beta);
StyleVector style_vector(const std::vector<MoveType>& types);

nlohmann::json style_to_json(const StyleVector& style);
/// Accepts {move_type: weight}; missing types are 0. Weights are renormalized.
std::optional<StyleVector> style_from_json(const nlohmann::json& object);

struct RewardWeights {
  double diversity = 0.4;
  double match = 0.3;
  double novelty = 0.2;
  double repetition = 0.1;
};

double normalized_entropy(const StyleVector& style);

/// Levenshtein distance over move-type sequences divided by the longer length.
double normalized_edit_distance(const std::vector<MoveType>& a, const std::vector<MoveType>& b);

std::size_t max_run_length(const std::vector<MoveType>& types);

std::vector<MoveType> move_types(const Beta& beta);

/// Diversity + target match + novelty against prior betas - repetition.
/// With no prior betas the sequence counts as fully novel.
double reward(const Beta& beta, const std::optional<StyleVector>& target_style,
              const std::vector<Beta>& prior_betas, const RewardWeights& weights = {});
double reward(const std::vector<MoveType>& types, const std::optional<StyleVector>& target_style,
              const std::vector<std::vector<MoveType>>& prior_sequences,
              const RewardWeights& weights = {});

struct LorenzState {
  double x = 1.0;
  double y = 1.0;
  double z = 1.0;
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;

  friend bool operator==(const LorenzState&, const LorenzState&) = default;
};

inline constexpr double kLorenzMaxDt = 0.02;

/// Classic RK4 integration. Returns steps + 1 states, the initial one first.
/// Throws Error(kDtTooLarge) for dt > 0.02 and Error(kInvalidArgument) for
/// dt <= 0 or steps < 1.
std::vector<LorenzState> lorenz_trajectory(const LorenzState& initial, double dt, int steps);

struct VariedRoute {
  Route route;
  Wall wall;

  friend bool operator==(const VariedRoute&, const VariedRoute&) = default;
};

inline constexpr double kMaxVariationMeters = 0.5;

/// Lorenz-driven perturbation of the destination holds of `beta`'s moves.
/// Each hold moves at most intensity * 0.5 m and stays on the wall; the z
/// coordinate decides whether a hold's type flips to its nearest-difficulty
/// neighbour. Intensity 0 returns the inputs unchanged.
VariedRoute vary_route(const Route& route, const Wall& wall, const Beta& beta, double intensity,
                       std::uint64_t seed);

}  // namespace crux
