#include <doctest.h>

#include <array>
#include <cmath>
#include <functional>

#include "crux/climber_sim.hpp"
#include "crux/error.hpp"
#include "crux/grading.hpp"
#include "support.hpp"

using namespace crux;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

GradeLabel g(const char* text) { return *GradeLabel::parse(text); }

std::vector<GradeSet> small_corpus() {
  const auto all = test::corpus_routes();
  std::vector<GradedRoute> picked;
  for (const auto& r : all) {
    if (r.route.name.ends_with("_01") || r.route.name.ends_with("_02") ||
        r.route.name.ends_with("_03")) {
      picked.push_back(r);
    }
  }
  return group_by_grade(picked, true);
}

}  // namespace

TEST_SUITE("grading") {
  TEST_CASE("t-norm axioms on a grid") {
    const std::array kinds = {TNormKind::kProduct, TNormKind::kMinimum, TNormKind::kLukasiewicz};
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    for (auto k : kinds) {
      for (double a : grid) {
        CHECK(tnorm(k, a, 1.0) == doctest::Approx(a).epsilon(1e-15));
        CHECK(tnorm(k, a, 0.0) == 0.0);
        for (double b : grid) {
          CHECK(tnorm(k, a, b) == tnorm(k, b, a));
          CHECK(tnorm(k, a, b) <= std::min(a, b) + 1e-15);
          for (double c : grid) {
            CHECK(tnorm(k, tnorm(k, a, b), c) ==
                  doctest::Approx(tnorm(k, a, tnorm(k, b, c))).epsilon(1e-12));
            if (b <= c) CHECK(tnorm(k, a, b) <= tnorm(k, a, c) + 1e-15);
          }
        }
      }
    }
    CHECK(tnorm(TNormKind::kProduct, 0.6, 0.5) == doctest::Approx(0.3));
    CHECK(tnorm(TNormKind::kMinimum, 0.6, 0.5) == 0.5);
    CHECK(tnorm(TNormKind::kLukasiewicz, 0.6, 0.5) == doctest::Approx(0.1));
    CHECK(code_of([] { tnorm(TNormKind::kProduct, 1.1, 0.5); }) == ErrorCode::kDomain);
    CHECK(code_of([] { tnorm(TNormKind::kMinimum, 0.5, -0.01); }) == ErrorCode::kDomain);
    CHECK(parse_tnorm("lukasiewicz") == TNormKind::kLukasiewicz);
    CHECK(!parse_tnorm("hamacher"));
  }

  TEST_CASE("estimators on hand-computed outcomes") {
    const RouteOutcomes route{{0.9, 0.2, 0.6, 0.4}, {1, 0, 1, 1}};
    const RouteOutcomes a{{0.8, 0.1, 0.3, 0.7}, {1, 0, 1, 0}};
    const RouteOutcomes b{{0.6, 0.9, 0.2, 0.5}, {1, 1, 0, 1}};
    const std::vector<const RouteOutcomes*> set = {&a, &b};
    // Every climber ascended at least half of the set.
    const auto rs = estimate_route_given_set(route, set, 0.5);
    CHECK(rs.qualifiers == 4);
    CHECK(rs.value == doctest::Approx((0.9 + 0.2 + 0.6 + 0.4) / 4));
    // Ascenders 0, 2, 3 hold high probability on 2, 0 and 2 of the two routes.
    const auto sr = estimate_set_given_route(route, set, 0.5);
    CHECK(sr.qualifiers == 3);
    CHECK(sr.value == doctest::Approx(2.0 / 3));
    // Stricter threshold: only climber 0 ascended both.
    const auto strict = estimate_route_given_set(route, set, 0.75);
    CHECK(strict.qualifiers == 1);
    CHECK(strict.value == doctest::Approx(0.9));
    const auto high = estimate_set_given_route(route, set, 0.75);
    CHECK(high.value == doctest::Approx((0.5 + 0.0 + 0.0) / 3));
    const RouteOutcomes nobody{{0.1, 0.1, 0.1, 0.1}, {0, 0, 0, 0}};
    const auto none = estimate_set_given_route(nobody, set, 0.5);
    CHECK(none.qualifiers == 0);
    CHECK(none.value == 0.0);
  }

  TEST_CASE("grouping by grade") {
    auto routes = test::corpus_routes();
    CHECK(routes.size() == 30);
    const auto sets = group_by_grade(routes, true);
    REQUIRE(sets.size() == 3);
    CHECK(sets[0].label == g("5.8"));
    CHECK(sets[1].label == g("5.10a"));
    CHECK(sets[2].label == g("5.11a"));
    for (const auto& s : sets) CHECK(s.routes.size() == 10);
    routes[0].route.grade_locked = false;
    CHECK(group_by_grade(routes, true)[0].routes.size() == 9);
    CHECK(group_by_grade(routes, false)[0].routes.size() == 10);
    routes[1].route.assigned_grade.reset();
    CHECK(group_by_grade(routes, false)[0].routes.size() == 9);
  }

  TEST_CASE("outcomes are deterministic and independent of neighbours") {
    const auto doc = test::load("ladder.crux");
    const auto pop = test::reference_population(300);
    GradingOptions opt;
    opt.seed = 11;
    const auto a = route_outcomes(doc.routes[0], doc.wall, pop, opt);
    CHECK(a.probability == route_outcomes(doc.routes[0], doc.wall, pop, opt).probability);
    CHECK(a.ascended == route_outcomes(doc.routes[0], doc.wall, pop, opt).ascended);
    for (std::size_t i = 0; i < pop.size(); ++i) {
      CHECK(a.probability[i] ==
            doctest::Approx(route_success_probability(doc.routes[0], doc.wall, pop[i])).epsilon(1e-12));
    }
    // A prefix of the population sees the same draws.
    const std::vector<ClimberProfile> half(pop.begin(), pop.begin() + 150);
    const auto b = route_outcomes(doc.routes[0], doc.wall, half, opt);
    CHECK(std::equal(b.ascended.begin(), b.ascended.end(), a.ascended.begin()));
  }

  TEST_CASE("leave-one-out grading lands near the held-out grade") {
    const Grader grader(group_by_grade(test::corpus_routes(), true), test::reference_population(600),
                        GradingOptions{.seed = 11});
    int near = 0;
    int total = 0;
    for (const auto& set : grader.corpus()) {
      for (const auto& m : set.routes) {
        Route r = m.route;
        r.grade_locked = false;
        const auto result = grader.without(r.name).assign(r, m.wall);
        ++total;
        if (grade_step_distance(result.grade, set.label) <= 1) ++near;
        REQUIRE(result.scores.size() == 3);
        for (const auto& s : result.scores) {
          CHECK(s.conjunction == doctest::Approx(s.p_route_given_set * s.p_set_given_route));
          CHECK(s.conjunction >= 0.0);
          CHECK(s.conjunction <= 1.0);
        }
      }
    }
    MESSAGE("within one step: ", near, "/", total);
    CHECK(near * 10 >= total * 9);
  }

  TEST_CASE("grader equals the one-shot assignment") {
    const auto corpus = small_corpus();
    const auto pop = test::reference_population(200);
    const GradingOptions opt{.seed = 3};
    auto r = corpus[1].routes[0].route;
    r.name = "fresh";
    r.grade_locked = false;
    const auto a = Grader(corpus, pop, opt).assign(r, corpus[1].routes[0].wall);
    const auto b = assign_grade(r, corpus[1].routes[0].wall, corpus, pop, opt);
    CHECK(a.grade == b.grade);
    CHECK(scores_to_json(a.scores) == scores_to_json(b.scores));
    const auto j = scores_to_json(a.scores);
    CHECK(j[0]["grade"] == "5.8");
    CHECK(j[0].contains("conjunction"));
    CHECK(j[0]["flags"].is_array());
  }

  TEST_CASE("ties go to the lower grade") {
    const auto corpus = small_corpus();
    // Nobody in this population ascends anything: every conjunction is 0.
    PopulationSpec weak;
    weak.size = 50;
    weak.ability_mean = -6.0;
    const Grader grader(corpus, sample_population(weak, 1), GradingOptions{});
    Route r = corpus[2].routes[0].route;
    r.name = "tie";
    r.grade_locked = false;
    const auto result = grader.assign(r, corpus[2].routes[0].wall);
    CHECK(result.grade == g("5.8"));
    for (const auto& s : result.scores) {
      CHECK(s.conjunction == 0.0);
      REQUIRE(!s.flags.empty());
      CHECK(s.flags[0] == kFlagNoQualifiers);
    }
  }

  TEST_CASE("few qualifiers are flagged") {
    const auto corpus = small_corpus();
    GradingOptions opt;
    opt.min_qualifiers = 1000;
    const Grader grader(corpus, test::reference_population(100), opt);
    Route r = corpus[0].routes[0].route;
    r.name = "low";
    r.grade_locked = false;
    const auto result = grader.assign(r, corpus[0].routes[0].wall);
    CHECK(result.scores[0].flags == std::vector<std::string>{std::string(kFlagLowConfidence)});
  }

  TEST_CASE("error codes") {
    const auto corpus = small_corpus();
    const auto pop = test::reference_population(20);
    CHECK(code_of([&] { Grader({}, pop, {}); }) == ErrorCode::kEmptyCorpus);
    CHECK(code_of([&] { Grader({GradeSet{g("5.9"), {}}}, pop, {}); }) == ErrorCode::kEmptySet);
    CHECK(code_of([&] { Grader(corpus, {}, {}); }) == ErrorCode::kInvalidArgument);
    CHECK(code_of([&] { Grader(corpus, pop, GradingOptions{.threshold = 1.0}); }) ==
          ErrorCode::kInvalidArgument);
    CHECK(code_of([&] {
            p_route_given_set(corpus[0].routes[0].route, corpus[0].routes[0].wall,
                              GradeSet{g("5.9"), {}}, pop, {});
          }) == ErrorCode::kEmptySet);
    // A member graded differently from its set.
    auto wrong = corpus;
    wrong[0].routes[0].route.assigned_grade = g("5.12a");
    CHECK(code_of([&] { Grader(wrong, pop, {}); }) == ErrorCode::kInvalidArgument);
    const Grader grader(corpus, pop, {});
    CHECK(code_of([&] { grader.assign(corpus[0].routes[0].route, corpus[0].routes[0].wall); }) ==
          ErrorCode::kLocked);
    CHECK(code_of([&] {
            assign_grade(corpus[0].routes[0].route, corpus[0].routes[0].wall, corpus, pop, {});
          }) == ErrorCode::kLocked);
  }

  TEST_CASE("pairwise estimates match the grader's scores") {
    const auto corpus = small_corpus();
    const auto pop = test::reference_population(150);
    const GradingOptions opt{.seed = 5};
    Route r = corpus[1].routes[1].route;
    r.name = "pair";
    r.grade_locked = false;
    const auto& w = corpus[1].routes[1].wall;
    const auto result = Grader(corpus, pop, opt).assign(r, w);
    for (std::size_t s = 0; s < corpus.size(); ++s) {
      CHECK(result.scores[s].p_route_given_set ==
            doctest::Approx(p_route_given_set(r, w, corpus[s], pop, opt).value));
      CHECK(result.scores[s].p_set_given_route ==
            doctest::Approx(p_set_given_route(r, w, corpus[s], pop, opt).value));
    }
  }

  TEST_CASE("ascents lock the grade at the threshold") {
    Route r;
    r.name = "x";
    r = record_ascent_and_maybe_lock(r, 49);
    CHECK(r.exposure_count == 49);
    CHECK(!r.grade_locked);
    r = record_ascent_and_maybe_lock(r, 1);
    CHECK(r.exposure_count == 50);
    CHECK(r.grade_locked);
    r = record_ascent_and_maybe_lock(r, 3);
    CHECK(r.grade_locked);
    CHECK(record_ascent_and_maybe_lock(Route{}, 2, 2).grade_locked);
    CHECK(code_of([] { record_ascent_and_maybe_lock(Route{}, 0); }) == ErrorCode::kInvalidArgument);
  }
}
