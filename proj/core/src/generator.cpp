#include "crux/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "crux/error.hpp"
#include "crux/planner.hpp"
#include "model_core.hpp"

namespace crux {

namespace {

constexpr double kMaxMoveMeters = 0.4;
constexpr double kAddRadius = 0.8;
constexpr int kEditRetries = 16;
constexpr int kStartAttempts = 1000;

constexpr std::array<HoldType, 6> kHandTypes = {HoldType::kJug,   HoldType::kCrimp,
                                                HoldType::kSloper, HoldType::kPinch,
                                                HoldType::kPocket, HoldType::kVolume};

Hold* find_mut(Wall& wall, std::string_view id) {
  for (auto& h : wall.holds) {
    if (h.id == id) return &h;
  }
  return nullptr;
}

bool is_anchor(const Route& route, std::string_view id) {
  return id == route.finish_hold_id ||
         std::find(route.start_hold_ids.begin(), route.start_hold_ids.end(), id) !=
             route.start_hold_ids.end();
}

std::string fresh_id(const Wall& wall) {
  for (int n = 1;; ++n) {
    std::string id = "g" + std::string(n < 10 ? "0" : "") + std::to_string(n);
    if (wall.find(id) == nullptr) return id;
  }
}

Hold make_hold(std::string id, double x, double y, HoldType type) {
  Hold h;
  h.id = std::move(id);
  h.x = x;
  h.y = y;
  h.type = type;
  h.difficulty = nominal_difficulty(type);
  h.roles = {true, true};
  return h;
}

bool valid(const Route& route, const Wall& wall) {
  return validate_wall(wall).ok() && validate_route(route, wall).ok();
}

std::pair<double, double> disc(Rng& rng, double radius) {
  const double r = radius * std::sqrt(rng.uniform());
  const double a = 2.0 * std::numbers::pi * rng.uniform();
  return {r * std::cos(a), r * std::sin(a)};
}

double softplus(double x) { return detail::softplus(x); }

}  // namespace

void validate_config(const GenerationConfig& c) {
  const bool ok = c.max_iterations >= 0 && c.initial_temperature >= 0.0 &&
                  std::isfinite(c.initial_temperature) && c.cooling_rate > 0.0 &&
                  c.cooling_rate < 1.0 && c.w_grade >= 0.0 && c.w_reward >= 0.0 &&
                  c.w_necessity >= 0.0 && c.hold_budget >= 2 && c.loop_population >= 1 &&
                  c.final_population >= 0 && c.grading.threshold > 0.0 &&
                  c.grading.threshold < 1.0 && !c.route_name.empty();
  if (!ok) throw Error(ErrorCode::kInvalidArgument, "invalid generation config");
}

nlohmann::json report_to_json(const GenerationReport& r) {
  return {{"iterations", r.iterations},
          {"accepted", r.accepted},
          {"best_objective", r.best_objective},
          {"objective_trace", r.objective_trace},
          {"achieved_grade", r.achieved_grade.to_string()},
          {"loop_grade", r.loop_grade.to_string()},
          {"achieved_reward", r.achieved_reward},
          {"necessitation_margin", r.necessitation_margin},
          {"seed", r.seed},
          {"canceled", r.canceled}};
}

ClimberProfile representative_climber(const std::vector<ClimberProfile>& population) {
  ClimberProfile c;
  if (population.empty()) return c;
  const double n = static_cast<double>(population.size());
  c.ability = c.height = c.arm_span = c.fear_sensitivity = 0.0;
  c.exposure.fill(0.0);
  for (const auto& p : population) {
    c.ability += p.ability / n;
    c.height += p.height / n;
    c.arm_span += p.arm_span / n;
    c.fear_sensitivity += p.fear_sensitivity / n;
    for (std::size_t t = 0; t < kMoveTypeCount; ++t) c.exposure[t] += p.exposure[t] / n;
  }
  // Uniform populations must give exactly uniform exposure back.
  if (std::all_of(population.begin(), population.end(), [&](const ClimberProfile& p) {
        return p.exposure == population.front().exposure;
      })) {
    c.exposure = population.front().exposure;
  }
  return c;
}

std::vector<std::size_t> key_moves(const Beta& beta, const std::optional<StyleVector>& target,
                                   const RewardWeights& weights) {
  const auto types = move_types(beta);
  const double full = reward(types, target, {}, weights);
  std::vector<std::pair<double, std::size_t>> contribution;
  for (std::size_t i = 0; i < types.size(); ++i) {
    auto rest = types;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    contribution.emplace_back(full - reward(rest, target, {}, weights), i);
  }
  std::stable_sort(contribution.begin(), contribution.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < std::min<std::size_t>(3, contribution.size()); ++k) {
    out.push_back(contribution[k].second);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double necessitation_margin(const Route& route, const Wall& wall, const Beta& beta,
                            const ClimberProfile& climber,
                            const std::optional<StyleVector>& target,
                            const RewardWeights& weights, const ModelParams& model) {
  double margin = kMarginSentinel;
  for (std::size_t i : key_moves(beta, target, weights)) {
    const Move& m = beta.moves[i];
    PlanOptions options{model, {{m.limb, m.to}}};
    try {
      const Beta alt = plan_beta(route, wall, climber, model.lambda_effort, options);
      margin = std::min(margin, alt.total_cost - beta.total_cost);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnreachable) throw;
    }
  }
  return margin;
}

ObjectiveTerms evaluate_objective(const Route& route, const Wall& wall,
                                  const GenerationConfig& config, const Grader& grader,
                                  const ClimberProfile& climber) {
  ObjectiveTerms t;
  const ModelParams& model = config.grading.model;
  try {
    t.beta = plan_beta(route, wall, climber, model.lambda_effort, {model, {}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnreachable) throw;
    return t;
  }
  t.reachable = true;
  t.reward = reward(t.beta, config.target_style, {}, config.reward);
  t.margin = config.w_necessity > 0.0
                 ? necessitation_margin(route, wall, t.beta, climber, config.target_style,
                                        config.reward, model)
                 : kMarginSentinel;
  double grade_term = 0.0;
  if (config.w_grade > 0.0) {
    t.grade = grader.assign(grader.outcomes(route, wall)).grade;
    grade_term = static_cast<double>(grade_step_distance(*t.grade, config.target_grade));
  }
  t.value = config.w_grade * grade_term + config.w_reward * (1.0 - t.reward) +
            config.w_necessity * softplus(-t.margin);
  return t;
}

double objective(const Route& route, const Wall& wall, const GenerationConfig& config,
                 const Grader& grader, const ClimberProfile& climber) {
  return evaluate_objective(route, wall, config, grader, climber).value;
}

Candidate neighbor(const Route& route, const Wall& wall, const Beta* beta, int hold_budget,
                   Rng& rng) {
  std::vector<std::string> movable;
  for (const auto& id : route.hold_ids) {
    if (!is_anchor(route, id)) movable.push_back(id);
  }
  enum Edit { kMove, kRetype, kAdd, kRemove };
  std::vector<Edit> edits;
  if (!movable.empty()) edits.push_back(kMove);
  edits.push_back(kRetype);
  if (static_cast<int>(route.hold_ids.size()) < hold_budget) edits.push_back(kAdd);
  if (!movable.empty()) edits.push_back(kRemove);

  for (int attempt = 0; attempt < kEditRetries; ++attempt) {
    Candidate c{route, wall};
    switch (edits[rng.below(edits.size())]) {
      case kMove: {
        Hold* h = find_mut(c.wall, movable[rng.below(movable.size())]);
        const auto [dx, dy] = disc(rng, kMaxMoveMeters);
        h->x = std::clamp(h->x + dx, 0.0, c.wall.width);
        h->y = std::clamp(h->y + dy, 0.0, c.wall.height);
        break;
      }
      case kRetype: {
        Hold* h = find_mut(c.wall, route.hold_ids[rng.below(route.hold_ids.size())]);
        const HoldType next = kHandTypes[rng.below(kHandTypes.size())];
        if (next == h->type || !h->roles.hand) continue;
        h->type = next;
        h->difficulty = nominal_difficulty(next);
        break;
      }
      case kAdd: {
        // Anchor the new hold on a hold the current beta passes through.
        std::vector<std::string> corridor;
        if (beta != nullptr) {
          for (const auto& m : beta->moves) {
            if (m.to) corridor.push_back(*m.to);
          }
        }
        if (corridor.empty()) corridor = route.hold_ids;
        const Hold* anchor = c.wall.find(corridor[rng.below(corridor.size())]);
        const auto [dx, dy] = disc(rng, kAddRadius);
        const HoldType type = kHandTypes[rng.below(kHandTypes.size())];
        Hold h = make_hold(fresh_id(c.wall), std::clamp(anchor->x + dx, 0.0, c.wall.width),
                           std::clamp(anchor->y + dy, 0.0, c.wall.height), type);
        c.route.hold_ids.push_back(h.id);
        std::sort(c.route.hold_ids.begin(), c.route.hold_ids.end());
        c.wall.holds.push_back(std::move(h));
        std::sort(c.wall.holds.begin(), c.wall.holds.end(),
                  [](const Hold& a, const Hold& b) { return a.id < b.id; });
        break;
      }
      case kRemove: {
        const std::string id = movable[rng.below(movable.size())];
        std::erase(c.route.hold_ids, id);
        std::erase_if(c.wall.holds, [&](const Hold& h) { return h.id == id; });
        break;
      }
    }
    if (valid(c.route, c.wall)) return c;
  }
  return {route, wall};
}

namespace {

// Random holds strung from a low start to a high finish with jitter.
std::optional<Candidate> random_route(const Wall& base, const GenerationConfig& config,
                                      const ClimberProfile& climber, Rng& rng) {
  const double w = base.width;
  const double h = base.height;
  Candidate c{{}, base};
  c.route.name = config.route_name;
  const int n = config.hold_budget;
  const double sx = rng.uniform(0.3 * w, 0.7 * w);
  const double sy = std::min(rng.uniform(0.9, 1.5), 0.5 * h);
  const double fx = rng.uniform(0.2 * w, 0.8 * w);
  const double fy = std::max(rng.uniform(h - 1.0, h - 0.4), sy);
  for (int j = 0; j < n; ++j) {
    double x;
    double y;
    if (j == 0) {
      x = sx;
      y = sy;
    } else if (j == n - 1) {
      x = fx;
      y = fy;
    } else {
      const double f = static_cast<double>(j) / static_cast<double>(n - 1);
      x = std::clamp(sx + f * (fx - sx) + rng.uniform(-0.4, 0.4), 0.0, w);
      y = std::clamp(sy + f * (fy - sy) + rng.uniform(-0.15, 0.15), 0.0, h);
    }
    const HoldType type = (j == 0 || j == n - 1) ? HoldType::kJug
                                                 : kHandTypes[rng.below(kHandTypes.size())];
    Hold hold = make_hold(fresh_id(c.wall), x, y, type);
    if (j == 0) c.route.start_hold_ids = {hold.id};
    if (j == n - 1) c.route.finish_hold_id = hold.id;
    c.route.hold_ids.push_back(hold.id);
    c.wall.holds.push_back(std::move(hold));
  }
  std::sort(c.route.hold_ids.begin(), c.route.hold_ids.end());
  std::sort(c.wall.holds.begin(), c.wall.holds.end(),
            [](const Hold& a, const Hold& b) { return a.id < b.id; });
  if (!valid(c.route, c.wall)) return std::nullopt;
  try {
    plan_beta(c.route, c.wall, climber, config.grading.model.lambda_effort,
              {config.grading.model, {}});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnreachable) throw;
    return std::nullopt;
  }
  return c;
}

std::vector<ClimberProfile> prefix(const std::vector<ClimberProfile>& population, int n) {
  const auto count = std::min<std::size_t>(population.size(), static_cast<std::size_t>(n));
  return {population.begin(), population.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace

GenerationResult generate_route(const Wall& wall, const std::optional<Route>& seed_route,
                                const GenerationConfig& config,
                                const std::vector<GradeSet>& corpus,
                                const std::vector<ClimberProfile>& population,
                                const GenerationHooks& hooks) {
  validate_config(config);
  if (!validate_wall(wall).ok()) throw Error(ErrorCode::kInvalidArgument, "invalid wall");
  if (population.empty()) throw Error(ErrorCode::kInvalidArgument, "population is empty");
  const Grader loop_grader(corpus, prefix(population, config.loop_population), config.grading);
  const ClimberProfile climber = representative_climber(population);
  Rng rng(config.seed);

  Candidate current;
  if (seed_route) {
    if (!validate_route(*seed_route, wall).ok()) {
      throw Error(ErrorCode::kInvalidArgument, "seed route is invalid");
    }
    current = {*seed_route, wall};
  } else {
    std::optional<Candidate> start;
    for (int attempt = 0; attempt < kStartAttempts && !start; ++attempt) {
      start = random_route(wall, config, climber, rng);
    }
    if (!start) {
      throw Error(ErrorCode::kNoValidStart, "no reachable starting route in 1000 attempts");
    }
    current = std::move(*start);
  }

  ObjectiveTerms current_terms =
      evaluate_objective(current.route, current.wall, config, loop_grader, climber);
  Candidate best = current;
  ObjectiveTerms best_terms = current_terms;

  GenerationReport report;
  report.seed = config.seed;
  double temperature = config.initial_temperature;
  for (int it = 0; it < config.max_iterations; ++it) {
    if (hooks.cancel != nullptr && hooks.cancel->load()) {
      report.canceled = true;
      break;
    }
    Candidate next = neighbor(current.route, current.wall,
                              current_terms.reachable ? &current_terms.beta : nullptr,
                              config.hold_budget, rng);
    ObjectiveTerms next_terms =
        evaluate_objective(next.route, next.wall, config, loop_grader, climber);
    const double delta = next_terms.value - current_terms.value;
    // Draw every iteration so the stream does not depend on the outcome.
    const double u = rng.uniform();
    const bool accept =
        delta <= 0.0 || (temperature > 0.0 && u < std::exp(-delta / temperature));
    if (accept) {
      current = std::move(next);
      current_terms = std::move(next_terms);
      ++report.accepted;
      if (current_terms.value < best_terms.value) {
        best = current;
        best_terms = current_terms;
      }
    }
    temperature *= config.cooling_rate;
    ++report.iterations;
    report.objective_trace.push_back(best_terms.value);
    if (hooks.on_progress) {
      hooks.on_progress({report.iterations, config.max_iterations, best_terms.value});
    }
  }

  report.best_objective = best_terms.value;
  report.achieved_reward = best_terms.reward;
  report.necessitation_margin = best_terms.reachable ? best_terms.margin : 0.0;
  report.loop_grade = best_terms.grade.value_or(
      loop_grader.assign(loop_grader.outcomes(best.route, best.wall)).grade);
  report.achieved_grade = report.loop_grade;
  if (config.final_population > 0) {
    const Grader final_grader(corpus, prefix(population, config.final_population),
                              config.grading);
    report.achieved_grade = final_grader.assign(final_grader.outcomes(best.route, best.wall)).grade;
  }
  return {std::move(best.route), std::move(best.wall), std::move(best_terms.beta),
          std::move(report)};
}

}  // namespace crux
