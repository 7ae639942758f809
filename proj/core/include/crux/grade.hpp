#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crux {

/// One Yosemite decimal grade of class-5 terrain, 5.1 through 5.15d.
///
/// Grades 5.10 and up always carry a letter subdivision (a-d); 5.1 to 5.9
/// never do. Construction enforces this, so every GradeLabel value is valid.
class GradeLabel {
 public:
  static constexpr int kMinNumber = 1;
  static constexpr int kMaxNumber = 15;
  static constexpr int kFirstLettered = 10;
  static constexpr std::size_t kScaleSize = 9 + 6 * 4;

  /// Throws crux::Error(kInvalidArgument) for out-of-scale combinations.
  GradeLabel(int number, std::optional<char> letter = std::nullopt);

  /// Parses "5.10a", "5.9", ... ; nullopt on anything else.
  static std::optional<GradeLabel> parse(std::string_view text);

  /// Position in the ascending scale, 0 for 5.1.
  static GradeLabel from_index(std::size_t index);

  int number() const noexcept { return number_; }
  std::optional<char> letter() const noexcept { return letter_; }
  std::size_t index() const noexcept;

  std::string to_string() const;

  friend bool operator==(const GradeLabel&, const GradeLabel&) = default;
  friend std::strong_ordering operator<=>(const GradeLabel& a,
                                          const GradeLabel& b) noexcept {
    return a.index() <=> b.index();
  }

 private:
  int number_;
  std::optional<char> letter_;
};

enum class Ordering { kLess, kEqual, kGreater };

Ordering compare_grades(const GradeLabel& a, const GradeLabel& b);

/// All 33 labels, easiest first.
const std::vector<GradeLabel>& grade_scale();

std::size_t grade_step_distance(const GradeLabel& a, const GradeLabel& b);

}  // namespace crux
