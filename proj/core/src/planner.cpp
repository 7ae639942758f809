#include "crux/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "crux/climber_sim.hpp"
#include "crux/error.hpp"
#include "crux/style.hpp"
#include "model_core.hpp"
#include "planner_core.hpp"

namespace crux {

namespace {

constexpr std::array<std::string_view, 4> kLimbNames = {"LH", "RH", "LF", "RF"};

// Canonical key of a state relative to a route: hold positions in id order,
// FREE after every hold.
using StateKey = std::array<int, 4>;

struct RouteIndex {
  std::vector<std::string> ids;  // sorted

  explicit RouteIndex(const Route& route) : ids(route.hold_ids) {
    std::sort(ids.begin(), ids.end());
  }

  int slot(const LimbHold& h) const {
    if (!h) return std::numeric_limits<int>::max();
    auto it = std::lower_bound(ids.begin(), ids.end(), *h);
    return static_cast<int>(it - ids.begin());
  }

  StateKey key(const BodyState& s) const {
    return {slot(s.holds[0]), slot(s.holds[1]), slot(s.holds[2]), slot(s.holds[3])};
  }
};

detail::Spot spot_of(const LimbHold& id, const Wall& wall) {
  if (!id) return {};
  const Hold* h = wall.find(*id);
  if (h == nullptr) return {};
  return {true, h->x, h->y, static_cast<int>(h - wall.holds.data())};
}

std::array<detail::Spot, 4> spots_of(const BodyState& s, const Wall& wall) {
  return {spot_of(s.holds[0], wall), spot_of(s.holds[1], wall), spot_of(s.holds[2], wall),
          spot_of(s.holds[3], wall)};
}

double hold_distance(const LimbHold& a, const LimbHold& b, const Wall& wall) {
  if (!a || !b) return 0.0;
  const Hold* ha = wall.find(*a);
  const Hold* hb = wall.find(*b);
  if (ha == nullptr || hb == nullptr) return 0.0;
  return std::hypot(ha->x - hb->x, ha->y - hb->y);
}

bool terminal(const BodyState& s, const Route& route) {
  return s.at(Limb::kLeftHand) == route.finish_hold_id &&
         s.at(Limb::kRightHand) == route.finish_hold_id;
}

bool forbidden(const std::vector<ForbiddenMove>& list, Limb limb, const LimbHold& to) {
  return std::find(list.begin(), list.end(), ForbiddenMove{limb, to}) != list.end();
}

void require_valid(const Route& route, const Wall& wall) {
  const auto report = validate_route(route, wall);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidArgument,
                "route " + route.name + " is invalid: " + report.issues.front().code);
  }
}

}  // namespace

std::string_view to_string(Limb limb) { return kLimbNames[static_cast<std::size_t>(limb)]; }

std::optional<Limb> parse_limb(std::string_view text) {
  for (std::size_t i = 0; i < kLimbNames.size(); ++i) {
    if (kLimbNames[i] == text) return static_cast<Limb>(i);
  }
  return std::nullopt;
}

double BodyState::com_y(const Wall& wall) const { return detail::com_y(spots_of(*this, wall)); }

bool is_valid_state(const BodyState& state, const Wall& wall, const ClimberProfile& climber) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!state.holds[i]) continue;
    const Hold* h = wall.find(*state.holds[i]);
    if (h == nullptr) return false;
    if (i < 2 ? !h->roles.hand : !h->roles.foot) return false;
  }
  const auto reach = reach_limit(climber);
  return detail::spots_valid(spots_of(state, wall), reach.hand_hand, reach.hand_foot);
}

std::vector<BodyState> start_states(const Route& route, const Wall& wall,
                                    const ClimberProfile& climber) {
  require_valid(route, wall);
  std::vector<const Hold*> hand_starts;
  for (const auto& id : route.start_hold_ids) {
    const Hold* h = wall.find(id);
    if (h->roles.hand) hand_starts.push_back(h);
  }
  const Hold* left = hand_starts.front();
  const Hold* right = left;
  if (hand_starts.size() == 2) {
    right = hand_starts[1];
    if (right->x < left->x || (right->x == left->x && right->id < left->id)) {
      std::swap(left, right);
    }
  }
  const double lowest_hand = std::min(left->y, right->y);
  std::vector<LimbHold> feet;
  for (const auto& id : route.hold_ids) {
    const Hold* h = wall.find(id);
    if (h->roles.foot && h->y < lowest_hand) feet.emplace_back(id);
  }
  feet.emplace_back(std::nullopt);

  const RouteIndex index(route);
  std::map<StateKey, BodyState> unique;
  for (const auto& lf : feet) {
    for (const auto& rf : feet) {
      BodyState s;
      s.at(Limb::kLeftHand) = left->id;
      s.at(Limb::kRightHand) = right->id;
      s.at(Limb::kLeftFoot) = lf;
      s.at(Limb::kRightFoot) = rf;
      if (is_valid_state(s, wall, climber)) unique.emplace(index.key(s), s);
    }
  }
  if (unique.empty()) {
    throw Error(ErrorCode::kEmpty, "route " + route.name + " has no feasible start state");
  }
  std::vector<BodyState> out;
  for (auto& [key, s] : unique) out.push_back(std::move(s));
  return out;
}

std::vector<std::pair<Move, BodyState>> successors(const BodyState& state, const Route& route,
                                                   const Wall& wall,
                                                   const ClimberProfile& climber) {
  const RouteIndex index(route);
  const bool done = terminal(state, route);
  std::vector<std::pair<Move, BodyState>> out;
  for (Limb limb : kAllLimbs) {
    if (is_hand(limb) && done) continue;
    std::vector<LimbHold> targets(index.ids.begin(), index.ids.end());
    if (!is_hand(limb)) targets.emplace_back(std::nullopt);
    for (const auto& to : targets) {
      if (to == state.at(limb)) continue;
      if (to) {
        const Hold* h = wall.find(*to);
        if (h == nullptr || (is_hand(limb) ? !h->roles.hand : !h->roles.foot)) continue;
      }
      BodyState next = state;
      next.at(limb) = to;
      if (!is_valid_state(next, wall, climber)) continue;
      Move move;
      move.limb = limb;
      move.from = state.at(limb);
      move.to = to;
      move.distance = hold_distance(move.from, to, wall);
      move.move_type = classify_move(move, state, wall, climber);
      out.emplace_back(std::move(move), std::move(next));
    }
  }
  return out;
}

double move_cost_from_probability(double success_probability, double distance,
                                  double hand_hand_reach, double lambda_effort) {
  return -std::log(success_probability) + lambda_effort * distance / hand_hand_reach;
}

double move_cost(const Move& move, const BodyState& from, const Wall& wall,
                 const ClimberProfile& climber, double lambda_effort, const ModelParams& model) {
  const double fear = fear_penalty(move, from, wall, climber);
  const Hold* to = move.to ? wall.find(*move.to) : nullptr;
  const double d_eff = detail::effective_difficulty(
      to ? to->difficulty : 0.0, move.distance, climber.arm_span, model.exposure_weight,
      climber.exposure_of(move.move_type));
  const double logit = detail::success_logit(model.kappa, climber.ability, d_eff, fear);
  return detail::neg_log_success(logit) +
         lambda_effort * move.distance / reach_limit(climber).hand_hand;
}

Beta plan_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
               double lambda_effort, const PlanOptions& options) {
  const detail::RouteView view(route, wall);
  detail::ClimberModel model(climber, options.model, lambda_effort);
  model.hands_only = !detail::feet_can_help(view, model);
  const detail::ForbiddenTable table(view, options.forbidden);
  const auto result = detail::plan(view, model, table);
  if (!result) {
    throw Error(ErrorCode::kUnreachable, "route " + route.name + " cannot be finished");
  }
  return detail::to_beta(view, *result);
}

Beta greedy_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
                 double lambda_effort, const ModelParams& params) {
  const detail::RouteView view(route, wall);
  detail::ClimberModel model(climber, params, lambda_effort);
  model.hands_only = !detail::feet_can_help(view, model);
  const auto starts = detail::search_starts(view, model);
  if (starts.empty()) {
    throw Error(ErrorCode::kStuck, "route " + route.name + " has no start state");
  }
  auto top_hand = [&](const detail::Packed& s) {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 2; ++i) {
      if (s[i] != detail::kFree) top = std::max(top, view.hold(s[i]).y);
    }
    return top;
  };

  detail::LocalPlan plan;
  detail::Packed current = starts.front();
  plan.states.push_back(current);
  const detail::ForbiddenTable none;
  while (!detail::is_terminal(view, current)) {
    std::optional<detail::LocalMove> best;
    detail::Packed best_state{};
    const double height = top_hand(current);
    detail::for_each_successor(
        view, model, current, none, [&](Limb limb, std::uint8_t to, const detail::Packed& next) {
          if (!(top_hand(next) > height) && !detail::is_terminal(view, next)) return;
          const auto move = detail::make_move(view, model, current, limb, to);
          if (!best || move.cost < best->cost) {
            best = move;
            best_state = next;
          }
        });
    if (!best) {
      throw Error(ErrorCode::kStuck, "greedy search stuck on route " + route.name + " after " +
                                         std::to_string(plan.moves.size()) + " moves");
    }
    plan.cost += best->cost;
    plan.moves.push_back(*best);
    plan.states.push_back(best_state);
    current = best_state;
  }
  return detail::to_beta(view, plan);
}

Beta brute_force_beta(const Route& route, const Wall& wall, const ClimberProfile& climber,
                      double lambda_effort, int max_moves, const PlanOptions& options) {
  if (route.hold_ids.size() > kBruteForceMaxHolds || max_moves > kBruteForceMaxMoves ||
      max_moves < 0) {
    throw Error(ErrorCode::kLimitExceeded, "brute force limited to 8 holds and 12 moves");
  }
  const RouteIndex index(route);

  // Layer k holds, for every state reachable in exactly k moves, the
  // cheapest such sequence. Minimizing over k <= max_moves is the same as
  // enumerating every sequence, with dominated prefixes merged.
  struct Cell {
    double cost = 0.0;
    BodyState state;
    std::optional<StateKey> pred;
    Move move;
  };
  std::vector<std::map<StateKey, Cell>> layers(1);
  for (auto& s : start_states(route, wall, climber)) {
    layers[0][index.key(s)] = Cell{0.0, s, std::nullopt, {}};
  }

  struct Best {
    double cost;
    int moves;
    StateKey key;
  };
  std::optional<Best> best;
  auto consider = [&](int k, const StateKey& key, const Cell& cell) {
    if (!terminal(cell.state, route)) return;
    if (!best || cell.cost < best->cost || (cell.cost == best->cost && k < best->moves)) {
      best = Best{cell.cost, k, key};
    }
  };
  for (const auto& [key, cell] : layers[0]) consider(0, key, cell);

  for (int k = 1; k <= max_moves; ++k) {
    std::map<StateKey, Cell> next;
    for (const auto& [key, cell] : layers[k - 1]) {
      for (auto& [move, succ] : successors(cell.state, route, wall, climber)) {
        if (forbidden(options.forbidden, move.limb, move.to)) continue;
        const double cost =
            cell.cost + move_cost(move, cell.state, wall, climber, lambda_effort, options.model);
        const StateKey succ_key = index.key(succ);
        auto it = next.find(succ_key);
        if (it == next.end()) {
          next.emplace(succ_key, Cell{cost, std::move(succ), key, std::move(move)});
        } else if (cost < it->second.cost ||
                   (cost == it->second.cost && it->second.pred && key < *it->second.pred)) {
          it->second = Cell{cost, std::move(succ), key, std::move(move)};
        }
      }
    }
    for (const auto& [key, cell] : next) consider(k, key, cell);
    layers.push_back(std::move(next));
  }
  if (!best) {
    throw Error(ErrorCode::kUnreachable,
                "no finish within " + std::to_string(max_moves) + " moves on " + route.name);
  }

  Beta beta;
  beta.total_cost = best->cost;
  StateKey key = best->key;
  for (int k = best->moves; k >= 0; --k) {
    const Cell& cell = layers[static_cast<std::size_t>(k)].at(key);
    beta.states.push_back(cell.state);
    if (k > 0) {
      beta.moves.push_back(cell.move);
      key = *cell.pred;
    }
  }
  std::reverse(beta.states.begin(), beta.states.end());
  std::reverse(beta.moves.begin(), beta.moves.end());
  return beta;
}

double beta_success_probability(const Beta& beta, const Wall& wall,
                                const ClimberProfile& climber, const ModelParams& model) {
  double product = 1.0;
  for (std::size_t i = 0; i < beta.moves.size(); ++i) {
    product *= move_success_probability(beta.moves[i], beta.states[i], wall, climber,
                                        model.exposure_weight, model);
  }
  return product;
}

bool is_feasible_beta(const Beta& beta, const Route& route, const Wall& wall,
                      const ClimberProfile& climber) {
  if (beta.states.empty() || beta.moves.size() + 1 != beta.states.size()) return false;
  const auto starts = start_states(route, wall, climber);
  if (std::find(starts.begin(), starts.end(), beta.states.front()) == starts.end()) return false;
  if (!terminal(beta.states.back(), route)) return false;
  for (const auto& s : beta.states) {
    if (!is_valid_state(s, wall, climber)) return false;
    for (const auto& h : s.holds) {
      if (h && !route.uses(*h)) return false;
    }
  }
  for (std::size_t i = 0; i < beta.moves.size(); ++i) {
    const BodyState& a = beta.states[i];
    const BodyState& b = beta.states[i + 1];
    int changed = 0;
    for (Limb limb : kAllLimbs) changed += a.at(limb) != b.at(limb) ? 1 : 0;
    const Move& m = beta.moves[i];
    if (changed != 1 || a.at(m.limb) != m.from || b.at(m.limb) != m.to) return false;
  }
  return true;
}

}  // namespace crux
