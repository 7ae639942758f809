#include <doctest.h>

#include "crux/error.hpp"
#include "crux/grade.hpp"

using namespace crux;

namespace {

// Written out by hand rather than generated, so the scale is checked against
// an independent listing.
const char* const kLabels[] = {
    "5.1",   "5.2",   "5.3",   "5.4",   "5.5",   "5.6",   "5.7",   "5.8",   "5.9",
    "5.10a", "5.10b", "5.10c", "5.10d", "5.11a", "5.11b", "5.11c", "5.11d", "5.12a",
    "5.12b", "5.12c", "5.12d", "5.13a", "5.13b", "5.13c", "5.13d", "5.14a", "5.14b",
    "5.14c", "5.14d", "5.15a", "5.15b", "5.15c", "5.15d"};

}  // namespace

TEST_SUITE("grade") {
  TEST_CASE("scale lists the 33 labels easiest first") {
    const auto& scale = grade_scale();
    REQUIRE(scale.size() == 33);
    for (std::size_t i = 0; i < scale.size(); ++i) {
      CHECK(scale[i].to_string() == kLabels[i]);
      CHECK(scale[i].index() == i);
      CHECK(GradeLabel::from_index(i) == scale[i]);
      CHECK(GradeLabel::parse(kLabels[i]) == scale[i]);
    }
  }

  TEST_CASE("comparison agrees with scale position on every pair") {
    const auto& scale = grade_scale();
    for (std::size_t i = 0; i < scale.size(); ++i) {
      for (std::size_t j = 0; j < scale.size(); ++j) {
        const Ordering want = i < j ? Ordering::kLess : i == j ? Ordering::kEqual : Ordering::kGreater;
        CHECK(compare_grades(scale[i], scale[j]) == want);
        CHECK((scale[i] < scale[j]) == (i < j));
        CHECK(grade_step_distance(scale[i], scale[j]) == (i > j ? i - j : j - i));
      }
    }
  }

  TEST_CASE("letter subdivisions order within and across numbers") {
    const auto a = *GradeLabel::parse("5.12a");
    const auto b = *GradeLabel::parse("5.12b");
    const auto c = *GradeLabel::parse("5.13a");
    CHECK(a < b);
    CHECK(b < c);
    CHECK(*GradeLabel::parse("5.9") < *GradeLabel::parse("5.10a"));
  }

  TEST_CASE("malformed labels do not parse") {
    for (const char* bad : {"", "5", "5.0", "5.16", "5.10", "5.9a", "5.10e", "6.1", "5.1a",
                            " 5.8", "5.8 ", "5.10A", "5.010a", "x"}) {
      CHECK_MESSAGE(!GradeLabel::parse(bad), bad);
    }
  }

  TEST_CASE("construction rejects labels off the scale") {
    CHECK_THROWS_AS(GradeLabel(10), Error);
    CHECK_THROWS_AS(GradeLabel(9, 'a'), Error);
    CHECK_THROWS_AS(GradeLabel(16, 'a'), Error);
    CHECK_THROWS_AS(GradeLabel(0), Error);
    CHECK_THROWS_AS(GradeLabel(12, 'e'), Error);
    CHECK_THROWS_AS(GradeLabel::from_index(33), Error);
  }
}
