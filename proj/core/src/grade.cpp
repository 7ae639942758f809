#include "crux/grade.hpp"

#include <charconv>

#include "crux/error.hpp"

namespace crux {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kEmpty: return "EMPTY";
    case ErrorCode::kUnreachable: return "UNREACHABLE";
    case ErrorCode::kStuck: return "STUCK";
    case ErrorCode::kLimitExceeded: return "LIMIT_EXCEEDED";
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kEmptySet: return "EMPTY_SET";
    case ErrorCode::kEmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::kLocked: return "LOCKED";
    case ErrorCode::kDtTooLarge: return "DT_TOO_LARGE";
    case ErrorCode::kNoValidStart: return "NO_VALID_START";
    case ErrorCode::kParse: return "PARSE";
  }
  return "UNKNOWN";
}

GradeLabel::GradeLabel(int number, std::optional<char> letter)
    : number_(number), letter_(letter) {
  const bool number_ok = number >= kMinNumber && number <= kMaxNumber;
  const bool needs_letter = number >= kFirstLettered;
  const bool letter_ok =
      needs_letter ? (letter && *letter >= 'a' && *letter <= 'd') : !letter;
  if (!number_ok || !letter_ok) {
    throw Error(ErrorCode::kInvalidArgument,
                "invalid grade 5." + std::to_string(number) +
                    (letter ? std::string(1, *letter) : std::string()));
  }
}

std::optional<GradeLabel> GradeLabel::parse(std::string_view text) {
  if (text.size() < 3 || text.substr(0, 2) != "5.") return std::nullopt;
  text.remove_prefix(2);
  int number = 0;
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, number);
  if (ec != std::errc() || ptr == begin) return std::nullopt;
  // Reject leading zeros such as "5.09".
  if (*begin == '0') return std::nullopt;
  std::optional<char> letter;
  if (ptr != end) {
    if (end - ptr != 1) return std::nullopt;
    letter = *ptr;
  }
  const bool needs_letter = number >= kFirstLettered;
  if (number < kMinNumber || number > kMaxNumber) return std::nullopt;
  if (needs_letter != letter.has_value()) return std::nullopt;
  if (letter && (*letter < 'a' || *letter > 'd')) return std::nullopt;
  return GradeLabel(number, letter);
}

std::size_t GradeLabel::index() const noexcept {
  if (number_ < kFirstLettered) return static_cast<std::size_t>(number_ - 1);
  return 9 + static_cast<std::size_t>(number_ - kFirstLettered) * 4 +
         static_cast<std::size_t>(*letter_ - 'a');
}

GradeLabel GradeLabel::from_index(std::size_t index) {
  if (index >= kScaleSize) {
    throw Error(ErrorCode::kInvalidArgument,
                "grade index out of range: " + std::to_string(index));
  }
  if (index < 9) return GradeLabel(static_cast<int>(index) + 1);
  const std::size_t rest = index - 9;
  return GradeLabel(kFirstLettered + static_cast<int>(rest / 4),
                    static_cast<char>('a' + rest % 4));
}

std::string GradeLabel::to_string() const {
  std::string out = "5." + std::to_string(number_);
  if (letter_) out.push_back(*letter_);
  return out;
}

Ordering compare_grades(const GradeLabel& a, const GradeLabel& b) {
  if (a.number() != b.number()) {
    return a.number() < b.number() ? Ordering::kLess : Ordering::kGreater;
  }
  const char la = a.letter().value_or('\0');
  const char lb = b.letter().value_or('\0');
  if (la == lb) return Ordering::kEqual;
  return la < lb ? Ordering::kLess : Ordering::kGreater;
}

const std::vector<GradeLabel>& grade_scale() {
  static const std::vector<GradeLabel> scale = [] {
    std::vector<GradeLabel> labels;
    labels.reserve(GradeLabel::kScaleSize);
    for (int n = GradeLabel::kMinNumber; n < GradeLabel::kFirstLettered; ++n) {
      labels.emplace_back(n);
    }
    for (int n = GradeLabel::kFirstLettered; n <= GradeLabel::kMaxNumber; ++n) {
      for (char l = 'a'; l <= 'd'; ++l) labels.emplace_back(n, l);
    }
    return labels;
  }();
  return scale;
}

std::size_t grade_step_distance(const GradeLabel& a, const GradeLabel& b) {
  const auto ia = a.index();
  const auto ib = b.index();
  return ia > ib ? ia - ib : ib - ia;
}

}  // namespace crux
