#include <doctest.h>

#include <array>
#include <cmath>

#include "crux/error.hpp"
#include "crux/planner.hpp"
#include "crux/style.hpp"
#include "support.hpp"

using namespace crux;

namespace {

Wall grid_wall() {
  Wall w{3.0, 4.5, {{0.0, 4.5, 90.0}}, {}};
  auto add = [&](const std::string& id, double x, double y, Roles roles) {
    w.holds.push_back({id, x, y, HoldType::kJug, 0.2, roles, 0.0});
  };
  add("L", 1.2, 2.0, {true, true});
  add("R", 1.8, 2.0, {true, true});
  add("far", 1.5, 2.0 + 0.9 * 1.75, {true, false});
  add("up", 1.0, 2.4, {true, false});
  add("x", 2.2, 2.3, {true, false});
  add("f1", 1.4, 0.6, {false, true});
  add("f2", 1.6, 0.6, {false, true});
  add("hi", 1.5, 1.6, {false, true});
  return w;
}

MoveType type_of(Limb limb, const LimbHold& to, const BodyState& from, const Wall& w) {
  const ClimberProfile c;
  Move m{limb, from.at(limb), to, 0.0, MoveType::kReach};
  const Hold* a = from.at(limb) ? w.find(*from.at(limb)) : nullptr;
  const Hold* b = to ? w.find(*to) : nullptr;
  if (a != nullptr && b != nullptr) m.distance = std::hypot(a->x - b->x, a->y - b->y);
  return classify_move(m, from, w, c);
}

}  // namespace

TEST_SUITE("style") {
  TEST_CASE("classification rules") {
    const Wall w = grid_wall();
    const BodyState s{{"L", "R", "f1", "f2"}};
    CHECK(type_of(Limb::kLeftHand, "R", s, w) == MoveType::kMatch);
    CHECK(type_of(Limb::kLeftHand, "x", s, w) == MoveType::kCross);
    CHECK(type_of(Limb::kRightHand, "up", s, w) == MoveType::kCross);
    CHECK(type_of(Limb::kRightHand, "far", BodyState{{"L", "L", "f1", std::nullopt}}, w) ==
          MoveType::kDyno);
    CHECK(type_of(Limb::kLeftHand, "up", s, w) == MoveType::kReach);
    CHECK(type_of(Limb::kLeftFoot, "hi", s, w) == MoveType::kHighStep);
    CHECK(type_of(Limb::kLeftFoot, "f2", s, w) == MoveType::kFootSwap);
    CHECK(type_of(Limb::kLeftFoot, std::nullopt, s, w) == MoveType::kReach);
  }

  TEST_CASE("heel on the ledge then press above is a mantle") {
    const auto doc = test::load("mantle.crux");
    const BodyState before{{"L", "S", std::nullopt, std::nullopt}};
    CHECK(type_of(Limb::kRightFoot, "L", before, doc.wall) == MoveType::kMantle);
    const BodyState heeled{{"L", "S", std::nullopt, "L"}};
    CHECK(type_of(Limb::kLeftHand, "F", heeled, doc.wall) == MoveType::kMantle);
    // The same hand move without the heel is a plain reach.
    CHECK(type_of(Limb::kLeftHand, "F", before, doc.wall) == MoveType::kReach);
  }

  TEST_CASE("a mantle-practised climber plans a mantle on the ledge fixture") {
    const auto doc = test::load("mantle.crux");
    ClimberProfile c;
    c.exposure = {0.05, 0.05, 0.05, 0.05, 0.7, 0.05, 0.05};
    const Beta b = plan_beta(doc.routes[0], doc.wall, c);
    CHECK(style_vector(b)[MoveType::kMantle] > 0.0);
    ClimberProfile plain;
    CHECK(style_vector(plan_beta(doc.routes[0], doc.wall, plain))[MoveType::kMantle] == 0.0);
  }

  TEST_CASE("style vectors are histograms on the simplex") {
    using T = MoveType;
    CHECK(style_vector(std::vector<T>{T::kReach, T::kReach, T::kReach, T::kReach})[T::kReach] == 1.0);
    const auto half = style_vector(std::vector<T>{T::kReach, T::kMatch, T::kReach, T::kMatch});
    CHECK(half[T::kReach] == 0.5);
    CHECK(half[T::kMatch] == 0.5);
    CHECK(style_vector(std::vector<T>{}) == StyleVector{});
    for (double w : StyleVector{}.weights) CHECK(w == doctest::Approx(1.0 / 7));
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
      std::vector<T> types(1 + rng.below(20));
      for (auto& t : types) t = static_cast<T>(rng.below(7));
      double sum = 0.0;
      for (double w : style_vector(types).weights) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("style JSON round-trips and renormalizes") {
    const auto s = style_vector(std::vector<MoveType>{MoveType::kDyno, MoveType::kReach});
    CHECK(style_from_json(style_to_json(s)) == s);
    const auto scaled = style_from_json(nlohmann::json{{"mantle", 3.0}, {"reach", 1.0}});
    REQUIRE(scaled);
    CHECK((*scaled)[MoveType::kMantle] == 0.75);
    CHECK(!style_from_json(nlohmann::json{{"heel", 1.0}}));
    CHECK(!style_from_json(nlohmann::json{{"reach", -1.0}}));
    CHECK(!style_from_json(nlohmann::json::object()));
  }

  TEST_CASE("edit distance and runs") {
    using T = MoveType;
    // kitten -> sitting is 3 edits over 7.
    const std::vector<T> kitten = {T::kCross, T::kDyno, T::kMantle, T::kMantle, T::kMatch, T::kHighStep};
    const std::vector<T> sitting = {T::kFootSwap, T::kDyno, T::kMantle, T::kMantle, T::kDyno, T::kHighStep, T::kReach};
    CHECK(normalized_edit_distance(kitten, sitting) == doctest::Approx(3.0 / 7));
    CHECK(normalized_edit_distance(kitten, kitten) == 0.0);
    CHECK(normalized_edit_distance({}, {}) == 0.0);
    CHECK(normalized_edit_distance({}, kitten) == 1.0);
    CHECK(max_run_length(kitten) == 2);
    CHECK(max_run_length({}) == 0);
  }

  TEST_CASE("reward examples") {
    using T = MoveType;
    const std::vector<T> all = {T::kReach, T::kCross, T::kMatch, T::kHighStep,
                                T::kMantle, T::kDyno, T::kFootSwap};
    CHECK(reward(all, style_vector(all), {}) == doctest::Approx(0.4 + 0.3 + 0.2 - 0.1 / 7));
    CHECK(reward(all, std::nullopt, {all}) == doctest::Approx(0.4 - 0.1 / 7));
    const std::vector<T> same = {T::kReach, T::kReach, T::kReach};
    // No priors counts as fully novel.
    CHECK(reward(same, std::nullopt, {}) == doctest::Approx(0.2 - 0.1));
    CHECK(reward(same, std::nullopt, {same}) == doctest::Approx(-0.1));
    const StyleVector opposite = style_vector(std::vector<T>{T::kDyno});
    CHECK(reward(same, opposite, {}) == doctest::Approx(0.1));
  }

  TEST_CASE("reward depends only on move types") {
    const auto doc = test::load("ladder.crux");
    const Beta b = plan_beta(doc.routes[0], doc.wall, ClimberProfile{});
    Beta renamed = b;
    for (auto& m : renamed.moves) {
      if (m.to) *m.to = "z" + *m.to;
      if (m.from) *m.from = "z" + *m.from;
    }
    CHECK(reward(renamed, std::nullopt, {}) == reward(b, std::nullopt, {}));
  }

  TEST_CASE("Lorenz: z axis is invariant") {
    LorenzState s;
    s.x = 0.0;
    s.y = 0.0;
    s.z = 20.0;
    const auto t = lorenz_trajectory(s, 0.01, 1000);
    for (const auto& p : t) {
      CHECK(p.x == 0.0);
      CHECK(p.y == 0.0);
    }
    CHECK(t.back().z < 1e-3);
    CHECK(t.back().z > 0.0);
  }

  TEST_CASE("Lorenz: guards") {
    CHECK_THROWS_AS(lorenz_trajectory({}, 0.03, 10), Error);
    try {
      lorenz_trajectory({}, 0.021, 10);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDtTooLarge);
    }
    CHECK_THROWS_AS(lorenz_trajectory({}, 0.0, 10), Error);
    CHECK_THROWS_AS(lorenz_trajectory({}, 0.01, 0), Error);
    CHECK(lorenz_trajectory({}, 0.02, 3).size() == 4);
  }

  TEST_CASE("Lorenz: one step equals a hand-written RK4 step") {
    const LorenzState s{1.0, 2.0, 3.0};
    const double h = 0.01;
    auto f = [](double x, double y, double z) {
      return std::array<double, 3>{10.0 * (y - x), x * (28.0 - z) - y, x * y - 8.0 / 3.0 * z};
    };
    const auto k1 = f(1, 2, 3);
    const auto k2 = f(1 + h / 2 * k1[0], 2 + h / 2 * k1[1], 3 + h / 2 * k1[2]);
    const auto k3 = f(1 + h / 2 * k2[0], 2 + h / 2 * k2[1], 3 + h / 2 * k2[2]);
    const auto k4 = f(1 + h * k3[0], 2 + h * k3[1], 3 + h * k3[2]);
    const auto t = lorenz_trajectory(s, h, 1);
    CHECK(t[1].x == doctest::Approx(1 + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])).epsilon(1e-14));
    CHECK(t[1].y == doctest::Approx(2 + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])).epsilon(1e-14));
    CHECK(t[1].z == doctest::Approx(3 + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])).epsilon(1e-14));
  }

  TEST_CASE("variation: zero intensity is the identity") {
    const auto doc = test::load("ladder.crux");
    const Beta b = plan_beta(doc.routes[0], doc.wall, ClimberProfile{});
    const auto v = vary_route(doc.routes[0], doc.wall, b, 0.0, 123);
    CHECK(v.route == doc.routes[0]);
    CHECK(v.wall == doc.wall);
    CHECK_THROWS_AS(vary_route(doc.routes[0], doc.wall, b, 1.5, 1), Error);
    CHECK_THROWS_AS(vary_route(doc.routes[0], doc.wall, b, -0.1, 1), Error);
  }

  TEST_CASE("variation: bounded, valid and deterministic") {
    const auto doc = test::load("ladder.crux");
    const Beta b = plan_beta(doc.routes[0], doc.wall, ClimberProfile{});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto v = vary_route(doc.routes[0], doc.wall, b, 0.5, seed);
      CHECK(v == vary_route(doc.routes[0], doc.wall, b, 0.5, seed));
      CHECK(validate_wall(v.wall).ok());
      CHECK(validate_route(v.route, v.wall).ok());
      for (std::size_t i = 0; i < v.wall.holds.size(); ++i) {
        const auto& a = doc.wall.holds[i];
        const auto& h = v.wall.holds[i];
        CHECK(h.id == a.id);
        CHECK(std::hypot(h.x - a.x, h.y - a.y) <= 0.25 + 1e-12);
      }
    }
  }
}
