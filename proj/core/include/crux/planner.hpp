#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crux/body.hpp"
#include "crux/model.hpp"

namespace crux {

/// A (limb, destination) pair the planner may not use. A nullopt destination
/// forbids moving that limb to FREE.
struct ForbiddenMove {
  Limb limb;
  LimbHold to;

  friend bool operator==(const ForbiddenMove&, const ForbiddenMove&) = default;
};

struct PlanOptions {
  ModelParams model;
  std::vector<ForbiddenMove> forbidden;
};

/// Hands on the start hold(s), feet on foot-capable route holds strictly
/// below the lower hand or FREE. Sorted by canonical state key.
/// Throws Error(kEmpty) if no start state passes the reach checks.
std::vector<BodyState> start_states(const Route& route, const Wall& wall,
                                    const ClimberProfile& climber);

/// All single-limb relocations to route holds (feet may also go FREE) that
/// yield valid states. Once both hands are on the finish hold, hands stay.
std::vector<std::pair<Move, BodyState>> successors(const BodyState& state, const Route& route,
                                                   const Wall& wall,
                                                   const ClimberProfile& climber);

/// -ln(success probability) + lambda * distance / arm span.
double move_cost(const Move& move, const BodyState& from, const Wall& wall,
                 const ClimberProfile& climber, double lambda_effort,
                 const ModelParams& model = {});

double move_cost_from_probability(double success_probability, double distance,
                                  double hand_hand_reach, double lambda_effort);

/// Minimum-cost beta (A* with a consistent heuristic over four-limb states).
/// Ties go to fewer moves, then lower canonical state key.
/// Throws Error(kUnreachable) when no start state leads to the finish.
Beta plan_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
               double lambda_effort = 0.1, const PlanOptions& options = {});

/// Duh-style baseline: repeatedly take the cheapest successor that raises the
/// highest hand or completes the finish. Throws Error(kStuck).
Beta greedy_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
                 double lambda_effort = 0.1, const ModelParams& model = {});

inline constexpr std::size_t kBruteForceMaxHolds = 8;
inline constexpr int kBruteForceMaxMoves = 12;

/// Exhaustive minimum over every legal move sequence of at most `max_moves`
/// moves, built only from start_states/successors/move_cost. Test oracle.
/// Throws Error(kLimitExceeded) past the guards, Error(kUnreachable) if nothing
/// finishes within the bound.
Beta brute_force_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
                      double lambda_effort, int max_moves, const PlanOptions& options = {});

/// Product of per-move success probabilities.
double beta_success_probability(const Beta& beta, const Wall& wall,
                                const ClimberProfile& climber, const ModelParams& model = {});

/// Replays a beta and checks every state and transition against the model.
bool is_feasible_beta(const Beta& beta, const Route& route, const Wall& wall,
                      const ClimberProfile& climber);

}  // namespace crux
