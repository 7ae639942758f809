#include "crux/grading.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "crux/error.hpp"
#include "crux/rng.hpp"
#include "model_core.hpp"
#include "planner_core.hpp"

namespace crux {

namespace {

constexpr std::array<std::string_view, 3> kTNormNames = {"product", "minimum", "lukasiewicz"};

void require_unit(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::kDomain, "t-norm arguments must lie in [0,1]");
  }
}

void require_threshold(double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in (0,1)");
  }
}

std::vector<const RouteOutcomes*> pointers(const std::vector<RouteOutcomes>& outcomes) {
  std::vector<const RouteOutcomes*> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) out.push_back(&o);
  return out;
}

MembershipScore score(const GradeLabel& label, const RouteOutcomes& route,
                      const std::vector<const RouteOutcomes*>& set,
                      const GradingOptions& options) {
  const Estimate given_set = estimate_route_given_set(route, set, options.threshold);
  const Estimate given_route = estimate_set_given_route(route, set, options.threshold);
  MembershipScore s{label, 0.0, 0.0, 0.0, 0, 0, {}};
  s.p_route_given_set = given_set.value;
  s.p_set_given_route = given_route.value;
  s.conjunction = tnorm(options.tnorm, s.p_route_given_set, s.p_set_given_route);
  s.qualifiers = given_set.qualifiers;
  s.ascenders = given_route.qualifiers;
  if (s.qualifiers == 0 || s.ascenders == 0) {
    s.flags.emplace_back(kFlagNoQualifiers);
  } else if (s.qualifiers < options.min_qualifiers || s.ascenders < options.min_qualifiers) {
    s.flags.emplace_back(kFlagLowConfidence);
  }
  return s;
}

GradeAssignment pick(std::vector<MembershipScore> scores) {
  // Scores are in ascending grade order, so keeping the first maximum is the
  // lower-grade tie-break.
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i].conjunction > scores[best].conjunction) best = i;
  }
  GradeAssignment out{scores[best].label, {}};
  out.scores = std::move(scores);
  return out;
}

}  // namespace

std::string_view to_string(TNormKind kind) { return kTNormNames[static_cast<std::size_t>(kind)]; }

std::optional<TNormKind> parse_tnorm(std::string_view text) {
  for (std::size_t i = 0; i < kTNormNames.size(); ++i) {
    if (kTNormNames[i] == text) return static_cast<TNormKind>(i);
  }
  return std::nullopt;
}

double tnorm(TNormKind kind, double a, double b) {
  require_unit(a);
  require_unit(b);
  switch (kind) {
    case TNormKind::kProduct: return a * b;
    case TNormKind::kMinimum: return std::min(a, b);
    case TNormKind::kLukasiewicz: return std::max(0.0, a + b - 1.0);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown t-norm");
}

std::vector<GradeSet> group_by_grade(const std::vector<GradedRoute>& routes, bool locked_only) {
  std::map<GradeLabel, std::vector<GradedRoute>> by_grade;
  for (const auto& r : routes) {
    if (!r.route.assigned_grade || (locked_only && !r.route.grade_locked)) continue;
    by_grade[*r.route.assigned_grade].push_back(r);
  }
  std::vector<GradeSet> out;
  for (auto& [label, members] : by_grade) {
    std::sort(members.begin(), members.end(), [](const GradedRoute& a, const GradedRoute& b) {
      return a.route.name < b.route.name;
    });
    out.push_back({label, std::move(members)});
  }
  return out;
}

RouteOutcomes route_outcomes(const Route& route, const Wall& wall,
                             const std::vector<ClimberProfile>& population,
                             const GradingOptions& options) {
  const detail::RouteView view(route, wall);
  const std::uint64_t stream = fnv1a(route.name);
  RouteOutcomes out;
  out.probability.resize(population.size(), 0.0);
  out.ascended.resize(population.size(), 0);
  std::vector<double> probs;
  for (std::size_t i = 0; i < population.size(); ++i) {
    detail::ClimberModel model(population[i], options.model, options.model.lambda_effort);
    model.hands_only = !detail::feet_can_help(view, model);
    const auto plan = detail::plan(view, model);
    // Unreachable: probability 0 and a fall on the first move, no draw.
    if (!plan) continue;
    probs.clear();
    double product = 1.0;
    for (const auto& m : plan->moves) {
      probs.push_back(detail::logistic(m.logit));
      product *= probs.back();
    }
    out.probability[i] = product;
    Rng rng(derive_seed(options.seed, i, stream));
    out.ascended[i] = simulate_moves(probs, rng).success ? 1 : 0;
  }
  return out;
}

Estimate estimate_route_given_set(const RouteOutcomes& route,
                                  const std::vector<const RouteOutcomes*>& set,
                                  double threshold) {
  Estimate e;
  if (set.empty()) return e;
  double sum = 0.0;
  for (std::size_t i = 0; i < route.probability.size(); ++i) {
    int climbed = 0;
    for (const auto* s : set) climbed += s->ascended[i];
    if (static_cast<double>(climbed) >= threshold * static_cast<double>(set.size())) {
      sum += route.probability[i];
      ++e.qualifiers;
    }
  }
  if (e.qualifiers > 0) e.value = sum / e.qualifiers;
  return e;
}

Estimate estimate_set_given_route(const RouteOutcomes& route,
                                  const std::vector<const RouteOutcomes*>& set,
                                  double threshold) {
  Estimate e;
  if (set.empty()) return e;
  double sum = 0.0;
  for (std::size_t i = 0; i < route.ascended.size(); ++i) {
    if (!route.ascended[i]) continue;
    int high = 0;
    for (const auto* s : set) high += s->probability[i] >= threshold ? 1 : 0;
    sum += static_cast<double>(high) / static_cast<double>(set.size());
    ++e.qualifiers;
  }
  if (e.qualifiers > 0) e.value = sum / e.qualifiers;
  return e;
}

namespace {

std::vector<RouteOutcomes> set_outcomes(const GradeSet& set,
                                        const std::vector<ClimberProfile>& population,
                                        const GradingOptions& options) {
  if (set.routes.empty()) {
    throw Error(ErrorCode::kEmptySet, "grade set " + set.label.to_string() + " has no routes");
  }
  std::vector<RouteOutcomes> out;
  for (const auto& m : set.routes) out.push_back(route_outcomes(m.route, m.wall, population, options));
  return out;
}

}  // namespace

Estimate p_route_given_set(const Route& route, const Wall& wall, const GradeSet& set,
                           const std::vector<ClimberProfile>& population,
                           const GradingOptions& options) {
  require_threshold(options.threshold);
  const auto members = set_outcomes(set, population, options);
  const auto target = route_outcomes(route, wall, population, options);
  return estimate_route_given_set(target, pointers(members), options.threshold);
}

Estimate p_set_given_route(const Route& route, const Wall& wall, const GradeSet& set,
                           const std::vector<ClimberProfile>& population,
                           const GradingOptions& options) {
  require_threshold(options.threshold);
  const auto members = set_outcomes(set, population, options);
  const auto target = route_outcomes(route, wall, population, options);
  return estimate_set_given_route(target, pointers(members), options.threshold);
}

Grader::Grader(std::vector<GradeSet> corpus, std::vector<ClimberProfile> population,
               GradingOptions options)
    : population_(std::move(population)), options_(options) {
  require_threshold(options_.threshold);
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "grading corpus is empty");
  if (population_.empty()) throw Error(ErrorCode::kInvalidArgument, "population is empty");
  // Merge sets sharing a label so the result does not depend on corpus order.
  std::map<GradeLabel, std::vector<GradedRoute>> merged;
  for (auto& set : corpus) {
    if (set.routes.empty()) {
      throw Error(ErrorCode::kEmptySet, "grade set " + set.label.to_string() + " has no routes");
    }
    for (auto& m : set.routes) {
      if (m.route.assigned_grade && *m.route.assigned_grade != set.label) {
        throw Error(ErrorCode::kInvalidArgument,
                    "route " + m.route.name + " is not graded " + set.label.to_string());
      }
      merged[set.label].push_back(std::move(m));
    }
  }
  for (auto& [label, members] : merged) {
    std::stable_sort(members.begin(), members.end(),
                     [](const GradedRoute& a, const GradedRoute& b) {
                       return a.route.name < b.route.name;
                     });
    corpus_.push_back({label, std::move(members)});
  }
  for (const auto& set : corpus_) outcomes_.push_back(set_outcomes(set, population_, options_));
}

RouteOutcomes Grader::outcomes(const Route& route, const Wall& wall) const {
  return route_outcomes(route, wall, population_, options_);
}

GradeAssignment Grader::assign(const Route& route, const Wall& wall) const {
  if (route.grade_locked) {
    throw Error(ErrorCode::kLocked, "route " + route.name + " has a locked grade");
  }
  return assign(outcomes(route, wall));
}

GradeAssignment Grader::assign(const RouteOutcomes& route) const {
  std::vector<MembershipScore> scores;
  scores.reserve(corpus_.size());
  for (std::size_t s = 0; s < corpus_.size(); ++s) {
    scores.push_back(score(corpus_[s].label, route, pointers(outcomes_[s]), options_));
  }
  return pick(std::move(scores));
}

Grader Grader::without(std::string_view route_name) const {
  Grader out;
  out.population_ = population_;
  out.options_ = options_;
  for (std::size_t s = 0; s < corpus_.size(); ++s) {
    GradeSet set{corpus_[s].label, {}};
    std::vector<RouteOutcomes> kept;
    for (std::size_t i = 0; i < corpus_[s].routes.size(); ++i) {
      if (corpus_[s].routes[i].route.name == route_name) continue;
      set.routes.push_back(corpus_[s].routes[i]);
      kept.push_back(outcomes_[s][i]);
    }
    if (set.routes.empty()) continue;
    out.corpus_.push_back(std::move(set));
    out.outcomes_.push_back(std::move(kept));
  }
  if (out.corpus_.empty()) throw Error(ErrorCode::kEmptyCorpus, "grading corpus is empty");
  return out;
}

GradeAssignment assign_grade(const Route& route, const Wall& wall,
                             const std::vector<GradeSet>& corpus,
                             const std::vector<ClimberProfile>& population,
                             const GradingOptions& options) {
  if (route.grade_locked) {
    throw Error(ErrorCode::kLocked, "route " + route.name + " has a locked grade");
  }
  return Grader(corpus, population, options).assign(route, wall);
}

Route record_ascent_and_maybe_lock(Route route, std::int64_t exposure_increment,
                                   std::int64_t lock_threshold) {
  if (exposure_increment < 1) {
    throw Error(ErrorCode::kInvalidArgument, "exposure increment must be at least 1");
  }
  route.exposure_count += exposure_increment;
  if (route.exposure_count >= lock_threshold) route.grade_locked = true;
  return route;
}

nlohmann::json scores_to_json(const std::vector<MembershipScore>& scores) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : scores) {
    out.push_back({{"grade", s.label.to_string()},
                   {"p_route_given_set", s.p_route_given_set},
                   {"p_set_given_route", s.p_set_given_route},
                   {"conjunction", s.conjunction},
                   {"qualifiers", s.qualifiers},
                   {"ascenders", s.ascenders},
                   {"flags", s.flags}});
  }
  return out;
}

}  // namespace crux
