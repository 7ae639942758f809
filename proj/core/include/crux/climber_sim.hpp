#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crux/body.hpp"
#include "crux/model.hpp"
#include "crux/rng.hpp"

namespace crux {

struct PopulationSpec {
  int size = 1;
  double ability_mean = 0.0;
  double ability_std = 0.0;
  double height_mean = 1.75;
  double height_std = 0.0;
  double fear_mean = 0.0;
  double exposure_skew = 0.0;  // 0 = uniform exposure over move types
};

struct AscentResult {
  bool success = false;
  std::optional<int> fall_move_index;
};

/// phi * max(0, angle - 90)/90 * (comY / wall height), evaluated at the
/// center-of-mass height of `state`.
double fear_penalty(const Move& move, const BodyState& state, const Wall& wall,
                    const ClimberProfile& climber);

/// Logistic success model. Always strictly inside (0,1).
double move_success_probability(const Move& move, const BodyState& state, const Wall& wall,
                                const ClimberProfile& climber, double exposure_weight,
                                const ModelParams& model = {});

/// Success probability of the climber's own least-resistance beta; 0 if the
/// route is unreachable for them.
double route_success_probability(const Route& route, const Wall& wall,
                                 const ClimberProfile& climber, const ModelParams& model = {});

/// Deterministic in (spec, seed). Throws Error(kInvalidArgument) on a bad spec.
std::vector<ClimberProfile> sample_population(const PopulationSpec& spec, std::uint64_t seed);

/// Walks the planned beta, one Bernoulli draw per move.
AscentResult simulate_ascent(const Route& route, const Wall& wall, const ClimberProfile& climber,
                             Rng& rng, const ModelParams& model = {});

/// Ascent against known per-move probabilities; consumes one draw per move
/// attempted, exactly like simulate_ascent.
AscentResult simulate_moves(const std::vector<double>& move_probabilities, Rng& rng);

}  // namespace crux
