#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/body.hpp"
#include "crux/climber_sim.hpp"
#include "crux/grade.hpp"
#include "crux/model.hpp"

namespace crux {

enum class TNormKind : std::uint8_t { kProduct, kMinimum, kLukasiewicz };

std::string_view to_string(TNormKind kind);
std::optional<TNormKind> parse_tnorm(std::string_view text);

/// Throws Error(kDomain) unless both arguments lie in [0,1].
double tnorm(TNormKind kind, double a, double b);

struct GradedRoute {
  Route route;
  Wall wall;
};

struct GradeSet {
  GradeLabel label;
  std::vector<GradedRoute> routes;
};

/// Groups routes by assigned grade, ascending. Ungraded routes are skipped,
/// and so are unlocked ones when `locked_only`.
std::vector<GradeSet> group_by_grade(const std::vector<GradedRoute>& routes, bool locked_only);

struct GradingOptions {
  TNormKind tnorm = TNormKind::kProduct;
  double threshold = 0.5;  // what counts as a "high" probability
  std::uint64_t seed = 0;
  int min_qualifiers = 30;
  ModelParams model;
};

inline constexpr std::string_view kFlagNoQualifiers = "NO_QUALIFIERS";
inline constexpr std::string_view kFlagLowConfidence = "LOW_CONFIDENCE";

/// Per-climber view of one route: the success probability of the climber's
/// own beta and the outcome of one seeded ascent.
struct RouteOutcomes {
  std::vector<double> probability;
  std::vector<std::uint8_t> ascended;
};

/// The ascent of climber i draws from stream (seed, i, hash of route name), so
/// outcomes do not depend on which other routes are evaluated.
RouteOutcomes route_outcomes(const Route& route, const Wall& wall,
                             const std::vector<ClimberProfile>& population,
                             const GradingOptions& options);

struct Estimate {
  double value = 0.0;
  int qualifiers = 0;  // climbers the mean runs over
};

/// Mean probability on the route among climbers who ascended at least
/// `threshold` of the set. Zero qualifiers gives value 0.
Estimate estimate_route_given_set(const RouteOutcomes& route,
                                  const std::vector<const RouteOutcomes*>& set,
                                  double threshold);

/// Among climbers who ascended the route, the mean fraction of set routes on
/// which their probability is at least `threshold`.
Estimate estimate_set_given_route(const RouteOutcomes& route,
                                  const std::vector<const RouteOutcomes*>& set,
                                  double threshold);

/// Throws Error(kEmptySet) for an empty set.
Estimate p_route_given_set(const Route& route, const Wall& wall, const GradeSet& set,
                           const std::vector<ClimberProfile>& population,
                           const GradingOptions& options);
Estimate p_set_given_route(const Route& route, const Wall& wall, const GradeSet& set,
                           const std::vector<ClimberProfile>& population,
                           const GradingOptions& options);

struct MembershipScore {
  GradeLabel label;
  double p_route_given_set = 0.0;
  double p_set_given_route = 0.0;
  double conjunction = 0.0;
  int qualifiers = 0;  // climbers who ascended enough of the set
  int ascenders = 0;   // climbers who ascended the route
  std::vector<std::string> flags;
};

struct GradeAssignment {
  GradeLabel grade;
  std::vector<MembershipScore> scores;  // ascending grade
};

/// A corpus with its per-climber outcomes computed once, for grading many
/// routes against the same population.
class Grader {
 public:
  /// Throws Error(kEmptyCorpus) without sets, Error(kEmptySet) for a set
  /// without routes, Error(kInvalidArgument) for a bad threshold, an empty
  /// population or a member whose grade disagrees with its set.
  Grader(std::vector<GradeSet> corpus, std::vector<ClimberProfile> population,
         GradingOptions options);

  /// Throws Error(kLocked) for a locked route.
  GradeAssignment assign(const Route& route, const Wall& wall) const;
  GradeAssignment assign(const RouteOutcomes& outcomes) const;

  RouteOutcomes outcomes(const Route& route, const Wall& wall) const;

  /// Copy without the named route; sets left empty are dropped.
  Grader without(std::string_view route_name) const;

  const std::vector<GradeSet>& corpus() const { return corpus_; }
  const std::vector<ClimberProfile>& population() const { return population_; }
  const GradingOptions& options() const { return options_; }
  /// Outcomes of corpus()[set].routes[i].
  const RouteOutcomes& member_outcomes(std::size_t set, std::size_t i) const {
    return outcomes_[set][i];
  }

 private:
  Grader() = default;

  std::vector<GradeSet> corpus_;
  std::vector<ClimberProfile> population_;
  GradingOptions options_;
  std::vector<std::vector<RouteOutcomes>> outcomes_;
};

GradeAssignment assign_grade(const Route& route, const Wall& wall,
                             const std::vector<GradeSet>& corpus,
                             const std::vector<ClimberProfile>& population,
                             const GradingOptions& options);

inline constexpr std::int64_t kDefaultLockThreshold = 50;

/// Adds exposure and locks the grade once the count reaches the threshold.
/// Throws Error(kInvalidArgument) for an increment below 1.
Route record_ascent_and_maybe_lock(Route route, std::int64_t exposure_increment,
                                   std::int64_t lock_threshold = kDefaultLockThreshold);

/// [{grade, p_route_given_set, p_set_given_route, conjunction, qualifiers,
///   ascenders, flags}]
nlohmann::json scores_to_json(const std::vector<MembershipScore>& scores);

}  // namespace crux
