#include "crux/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crux {

namespace {

constexpr std::array<std::string_view, kMoveTypeCount> kMoveTypeNames = {
    "reach", "cross", "match", "high_step", "mantle", "dyno", "foot_swap"};

constexpr std::array<std::string_view, 7> kHoldTypeNames = {
    "jug", "crimp", "sloper", "pinch", "pocket", "foothold", "volume"};

constexpr double kPanelTolerance = 1e-9;

void add(ValidationReport& report, std::string code, std::string message,
         std::optional<std::string> hold_id = std::nullopt) {
  report.issues.push_back({std::move(code), std::move(message), std::move(hold_id)});
}

}  // namespace

std::string_view to_string(MoveType type) {
  return kMoveTypeNames[static_cast<std::size_t>(type)];
}

std::optional<MoveType> parse_move_type(std::string_view text) {
  for (std::size_t i = 0; i < kMoveTypeNames.size(); ++i) {
    if (kMoveTypeNames[i] == text) return static_cast<MoveType>(i);
  }
  return std::nullopt;
}

std::string_view to_string(HoldType type) {
  return kHoldTypeNames[static_cast<std::size_t>(type)];
}

std::optional<HoldType> parse_hold_type(std::string_view text) {
  for (std::size_t i = 0; i < kHoldTypeNames.size(); ++i) {
    if (kHoldTypeNames[i] == text) return static_cast<HoldType>(i);
  }
  return std::nullopt;
}

double nominal_difficulty(HoldType type) {
  switch (type) {
    case HoldType::kJug: return 0.10;
    case HoldType::kVolume: return 0.20;
    case HoldType::kFoothold: return 0.30;
    case HoldType::kPocket: return 0.45;
    case HoldType::kPinch: return 0.50;
    case HoldType::kSloper: return 0.60;
    case HoldType::kCrimp: return 0.70;
  }
  return 0.5;
}

std::string to_string(Roles roles) {
  if (roles.hand && roles.foot) return "hand|foot";
  if (roles.hand) return "hand";
  if (roles.foot) return "foot";
  return "";
}

std::optional<Roles> parse_roles(std::string_view text) {
  if (text == "hand") return Roles{true, false};
  if (text == "foot") return Roles{false, true};
  if (text == "hand|foot") return Roles{true, true};
  return std::nullopt;
}

const Hold* Wall::find(std::string_view id) const {
  for (const auto& hold : holds) {
    if (hold.id == id) return &hold;
  }
  return nullptr;
}

double Wall::panel_angle(double y) const {
  if (panels.empty()) return 90.0;
  for (const auto& panel : panels) {
    if (y >= panel.y0 && y < panel.y1) return panel.angle_deg;
  }
  return y < panels.front().y0 ? panels.front().angle_deg : panels.back().angle_deg;
}

bool Route::uses(std::string_view hold_id) const {
  return std::find(hold_ids.begin(), hold_ids.end(), hold_id) != hold_ids.end();
}

ValidationReport validate_wall(const Wall& wall) {
  ValidationReport report;
  if (!(wall.width > 0.0) || !(wall.height > 0.0) || !std::isfinite(wall.width) ||
      !std::isfinite(wall.height)) {
    add(report, "WALL_SIZE", "wall width and height must be positive");
  }
  if (wall.panels.empty()) {
    add(report, "PANEL_COVERAGE", "wall has no panels");
  } else {
    std::vector<Panel> sorted = wall.panels;
    std::sort(sorted.begin(), sorted.end(),
              [](const Panel& a, const Panel& b) { return a.y0 < b.y0; });
    double expected = 0.0;
    for (const auto& panel : sorted) {
      if (!(panel.angle_deg >= 60.0 && panel.angle_deg <= 180.0)) {
        add(report, "PANEL_ANGLE", "panel angle must lie in [60,180]");
      }
      if (!(panel.y1 > panel.y0) || std::abs(panel.y0 - expected) > kPanelTolerance) {
        add(report, "PANEL_COVERAGE", "panels must partition [0,height] in order");
      }
      expected = panel.y1;
    }
    if (std::abs(expected - wall.height) > kPanelTolerance) {
      add(report, "PANEL_COVERAGE", "panels must end at the wall height");
    }
  }
  std::set<std::string> seen;
  for (const auto& hold : wall.holds) {
    if (!seen.insert(hold.id).second) {
      add(report, "DUPLICATE_HOLD_ID", "hold id appears twice", hold.id);
    }
    if (!(hold.x >= 0.0 && hold.x <= wall.width && hold.y >= 0.0 &&
          hold.y <= wall.height)) {
      add(report, "HOLD_OUT_OF_BOUNDS", "hold lies outside the wall", hold.id);
    }
    if (!(hold.difficulty >= 0.0 && hold.difficulty <= 1.0)) {
      add(report, "HOLD_DIFFICULTY", "difficulty must lie in [0,1]", hold.id);
    }
    if (!(hold.orientation_deg >= 0.0 && hold.orientation_deg < 360.0)) {
      add(report, "HOLD_ORIENTATION", "orientation must lie in [0,360)", hold.id);
    }
    if (hold.roles.empty()) {
      add(report, "HOLD_ROLES", "hold must allow at least one limb role", hold.id);
    }
    if (hold.type == HoldType::kFoothold && !(hold.roles == Roles{false, true})) {
      add(report, "FOOTHOLD_ROLES", "footholds are foot-only", hold.id);
    }
  }
  return report;
}

ValidationReport validate_route(const Route& route, const Wall& wall) {
  ValidationReport report;
  if (route.hold_ids.empty()) {
    add(report, "EMPTY_ROUTE", "route uses no holds");
  }
  std::set<std::string_view> seen;
  for (const auto& id : route.hold_ids) {
    if (!seen.insert(id).second) {
      add(report, "DUPLICATE_HOLD", "hold listed twice in route", id);
    }
    if (wall.find(id) == nullptr) {
      add(report, "UNKNOWN_HOLD", "route references a hold not on the wall", id);
    }
  }
  if (route.start_hold_ids.empty() || route.start_hold_ids.size() > 2) {
    add(report, "START_COUNT", "route needs one or two start holds");
  }
  bool any_start_hand = false;
  for (const auto& id : route.start_hold_ids) {
    if (!route.uses(id)) {
      add(report, "START_NOT_IN_ROUTE", "start hold is not part of the route", id);
    }
    if (const Hold* hold = wall.find(id); hold != nullptr && hold->roles.hand) {
      any_start_hand = true;
    }
  }
  if (!route.start_hold_ids.empty() && !any_start_hand) {
    add(report, "START_NOT_HANDHOLD", "no start hold can be held by a hand",
        route.start_hold_ids.front());
  }
  if (!route.uses(route.finish_hold_id)) {
    add(report, "FINISH_NOT_IN_ROUTE", "finish hold is not part of the route",
        route.finish_hold_id);
  }
  if (const Hold* finish = wall.find(route.finish_hold_id);
      finish != nullptr && !finish->roles.hand) {
    add(report, "FINISH_NOT_HANDHOLD", "finish hold cannot be held by a hand",
        route.finish_hold_id);
  }
  if (route.exposure_count < 0) {
    add(report, "EXPOSURE_NEGATIVE", "exposure count must be nonnegative");
  }
  return report;
}

ValidationReport validate_climber(const ClimberProfile& climber) {
  ValidationReport report;
  if (!(climber.height > 0.0) || !(climber.arm_span > 0.0)) {
    add(report, "CLIMBER_SIZE", "height and arm span must be positive");
  }
  if (!(climber.fear_sensitivity >= 0.0)) {
    add(report, "CLIMBER_FEAR", "fear sensitivity must be nonnegative");
  }
  double total = 0.0;
  for (double e : climber.exposure) {
    if (!(e >= 0.0 && e <= 1.0)) {
      add(report, "CLIMBER_EXPOSURE", "exposure weights must lie in [0,1]");
      break;
    }
    total += e;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    add(report, "CLIMBER_EXPOSURE", "exposure weights must sum to 1");
  }
  return report;
}

ReachLimit reach_limit(const ClimberProfile& climber) {
  return {climber.arm_span, kHandFootReachPerHeight * climber.height};
}

}  // namespace crux
