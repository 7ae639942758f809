#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crux/grade.hpp"

namespace crux {

enum class MoveType : std::uint8_t {
  kReach,
  kCross,
  kMatch,
  kHighStep,
  kMantle,
  kDyno,
  kFootSwap,
};

inline constexpr std::size_t kMoveTypeCount = 7;
inline constexpr std::array<MoveType, kMoveTypeCount> kAllMoveTypes = {
    MoveType::kReach,  MoveType::kCross, MoveType::kMatch,   MoveType::kHighStep,
    MoveType::kMantle, MoveType::kDyno,  MoveType::kFootSwap};

std::string_view to_string(MoveType type);
std::optional<MoveType> parse_move_type(std::string_view text);

enum class HoldType : std::uint8_t {
  kJug,
  kCrimp,
  kSloper,
  kPinch,
  kPocket,
  kFoothold,
  kVolume,
};

inline constexpr std::array<HoldType, 7> kAllHoldTypes = {
    HoldType::kJug,    HoldType::kCrimp,    HoldType::kSloper, HoldType::kPinch,
    HoldType::kPocket, HoldType::kFoothold, HoldType::kVolume};

std::string_view to_string(HoldType type);
std::optional<HoldType> parse_hold_type(std::string_view text);

// Typical difficulty of a hold of this type; used when an edit changes a
// hold's type and its difficulty has to move with it.
double nominal_difficulty(HoldType type);

struct Roles {
  bool hand = false;
  bool foot = false;

  bool empty() const { return !hand && !foot; }
  friend bool operator==(const Roles&, const Roles&) = default;
};

std::string to_string(Roles roles);
std::optional<Roles> parse_roles(std::string_view text);

struct Hold {
  std::string id;
  double x = 0.0;  // meters, unrolled wall plane
  double y = 0.0;
  HoldType type = HoldType::kJug;
  double difficulty = 0.0;  // [0,1], 0 = easiest usable
  Roles roles{true, false};
  double orientation_deg = 0.0;

  friend bool operator==(const Hold&, const Hold&) = default;
};

struct Panel {
  double y0 = 0.0;
  double y1 = 0.0;
  double angle_deg = 90.0;  // 90 = vertical, > 90 = overhung

  friend bool operator==(const Panel&, const Panel&) = default;
};

struct Wall {
  double width = 0.0;
  double height = 0.0;
  std::vector<Panel> panels;
  std::vector<Hold> holds;

  const Hold* find(std::string_view id) const;
  /// Angle of the panel covering height y; heights outside the wall clamp to
  /// the first or last panel.
  double panel_angle(double y) const;

  friend bool operator==(const Wall&, const Wall&) = default;
};

struct Route {
  std::string name;
  std::vector<std::string> hold_ids;
  std::vector<std::string> start_hold_ids;  // one or two
  std::string finish_hold_id;
  std::optional<GradeLabel> assigned_grade;
  bool grade_locked = false;
  std::int64_t exposure_count = 0;
  std::vector<MoveType> style_tags;

  bool uses(std::string_view hold_id) const;

  friend bool operator==(const Route&, const Route&) = default;
};

struct ClimberProfile {
  double ability = 0.0;  // unitless, larger is stronger
  double height = 1.75;
  double arm_span = 1.75;
  double fear_sensitivity = 0.0;
  std::array<double, kMoveTypeCount> exposure = uniform_exposure();

  static constexpr std::array<double, kMoveTypeCount> uniform_exposure() {
    std::array<double, kMoveTypeCount> e{};
    for (auto& v : e) v = 1.0 / static_cast<double>(kMoveTypeCount);
    return e;
  }

  double exposure_of(MoveType type) const {
    return exposure[static_cast<std::size_t>(type)];
  }

  friend bool operator==(const ClimberProfile&, const ClimberProfile&) = default;
};

struct ValidationIssue {
  std::string code;
  std::string message;
  std::optional<std::string> hold_id;

  friend bool operator==(const ValidationIssue&, const ValidationIssue&) = default;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
};

ValidationReport validate_wall(const Wall& wall);
ValidationReport validate_route(const Route& route, const Wall& wall);
ValidationReport validate_climber(const ClimberProfile& climber);

struct ReachLimit {
  double hand_hand = 0.0;
  double hand_foot = 0.0;
};

inline constexpr double kHandFootReachPerHeight = 1.2;

ReachLimit reach_limit(const ClimberProfile& climber);

}  // namespace crux
