#include "crux/climber_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crux/error.hpp"
#include "crux/planner.hpp"
#include "model_core.hpp"

namespace crux {

namespace {

// Shortest climber the reach model accepts; heights are normal draws and
// need a floor to stay physical.
constexpr double kMinHeight = 1.0;

double state_com_y(const BodyState& state, const Wall& wall) {
  std::array<detail::Spot, 4> spots{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!state.holds[i]) continue;
    if (const Hold* h = wall.find(*state.holds[i])) spots[i] = {true, h->x, h->y, 0};
  }
  return detail::com_y(spots);
}

}  // namespace

double Rng::normal(double mean, double stddev) {
  const double u1 = 1.0 - uniform();  // (0,1]
  const double u2 = uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

double fear_penalty(const Move& /*move*/, const BodyState& state, const Wall& wall,
                    const ClimberProfile& climber) {
  const double center = state_com_y(state, wall);
  return detail::fear_term(climber.fear_sensitivity, wall.panel_angle(center), center,
                           wall.height);
}

double move_success_probability(const Move& move, const BodyState& state, const Wall& wall,
                                const ClimberProfile& climber, double exposure_weight,
                                const ModelParams& model) {
  const Hold* to = move.to ? wall.find(*move.to) : nullptr;
  const double d_eff = detail::effective_difficulty(to ? to->difficulty : 0.0, move.distance,
                                                    climber.arm_span, exposure_weight,
                                                    climber.exposure_of(move.move_type));
  const double fear = fear_penalty(move, state, wall, climber);
  return detail::logistic(detail::success_logit(model.kappa, climber.ability, d_eff, fear));
}

double route_success_probability(const Route& route, const Wall& wall,
                                 const ClimberProfile& climber, const ModelParams& model) {
  try {
    const Beta beta = plan_beta(route, wall, climber, model.lambda_effort, {model, {}});
    return beta_success_probability(beta, wall, climber, model);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnreachable) return 0.0;
    throw;
  }
}

std::vector<ClimberProfile> sample_population(const PopulationSpec& spec, std::uint64_t seed) {
  if (spec.size < 1 || !(spec.ability_std >= 0.0) || !(spec.height_std >= 0.0) ||
      !(spec.fear_mean >= 0.0) || !(spec.exposure_skew >= 0.0 && spec.exposure_skew <= 1.0) ||
      !std::isfinite(spec.ability_mean) || !std::isfinite(spec.height_mean) ||
      spec.height_mean < kMinHeight) {
    throw Error(ErrorCode::kInvalidArgument, "invalid population spec");
  }
  std::vector<ClimberProfile> out;
  out.reserve(static_cast<std::size_t>(spec.size));
  for (int i = 0; i < spec.size; ++i) {
    // One stream per climber: a population is a prefix of any larger one
    // drawn with the same seed.
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    ClimberProfile c;
    c.ability = spec.ability_std > 0.0 ? rng.normal(spec.ability_mean, spec.ability_std)
                                       : spec.ability_mean;
    c.height = spec.height_std > 0.0 ? rng.normal(spec.height_mean, spec.height_std)
                                     : spec.height_mean;
    c.height = std::max(c.height, kMinHeight);
    c.arm_span = c.height;
    c.fear_sensitivity = spec.fear_mean;
    if (spec.exposure_skew > 0.0) {
      const auto hot = rng.below(kMoveTypeCount);
      for (std::size_t t = 0; t < kMoveTypeCount; ++t) {
        c.exposure[t] = (1.0 - spec.exposure_skew) / static_cast<double>(kMoveTypeCount) +
                        (t == hot ? spec.exposure_skew : 0.0);
      }
    }
    out.push_back(c);
  }
  return out;
}

AscentResult simulate_moves(const std::vector<double>& move_probabilities, Rng& rng) {
  for (std::size_t i = 0; i < move_probabilities.size(); ++i) {
    if (!rng.bernoulli(move_probabilities[i])) return {false, static_cast<int>(i)};
  }
  return {true, std::nullopt};
}

AscentResult simulate_ascent(const Route& route, const Wall& wall, const ClimberProfile& climber,
                             Rng& rng, const ModelParams& model) {
  Beta beta;
  try {
    beta = plan_beta(route, wall, climber, model.lambda_effort, {model, {}});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kUnreachable) return {false, 0};
    throw;
  }
  std::vector<double> probs;
  probs.reserve(beta.moves.size());
  for (std::size_t i = 0; i < beta.moves.size(); ++i) {
    probs.push_back(move_success_probability(beta.moves[i], beta.states[i], wall, climber,
                                             model.exposure_weight, model));
  }
  return simulate_moves(probs, rng);
}

}  // namespace crux
