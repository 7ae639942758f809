#pragma once

// Indexed planning over one route. Holds are renumbered 0..n-1 in id order
// and a body state packs into four bytes (LH, RH, LF, RF) with 0xFF = FREE,
// so the packed integer order is the canonical state-key order.

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "crux/body.hpp"
#include "crux/planner.hpp"
#include "crux/model.hpp"
#include "model_core.hpp"

namespace crux::detail {

inline constexpr std::uint8_t kFree = 0xFF;
inline constexpr std::size_t kMaxRouteHolds = 254;

using Packed = std::array<std::uint8_t, 4>;

inline std::uint32_t pack_key(const Packed& s) {
  return (std::uint32_t{s[0]} << 24) | (std::uint32_t{s[1]} << 16) |
         (std::uint32_t{s[2]} << 8) | std::uint32_t{s[3]};
}

inline Packed unpack_key(std::uint32_t key) {
  return {static_cast<std::uint8_t>(key >> 24), static_cast<std::uint8_t>(key >> 16),
          static_cast<std::uint8_t>(key >> 8), static_cast<std::uint8_t>(key)};
}

struct LocalHold {
  const Hold* hold = nullptr;
  double x = 0.0;
  double y = 0.0;
  double difficulty = 0.0;
  bool hand = false;
  bool foot = false;
};

/// Route holds resolved against the wall. Throws Error(kInvalidArgument) if
/// the route does not validate.
class RouteView {
 public:
  RouteView(const Route& route, const Wall& wall);

  const Wall& wall() const { return *wall_; }
  std::size_t size() const { return holds_.size(); }
  const LocalHold& hold(std::uint8_t i) const { return holds_[i]; }
  std::uint8_t finish() const { return finish_; }
  const std::vector<std::uint8_t>& starts() const { return starts_; }

  double distance(std::uint8_t a, std::uint8_t b) const {
    if (a == kFree || b == kFree) return 0.0;
    return dist_[static_cast<std::size_t>(a) * holds_.size() + b];
  }

  std::optional<std::uint8_t> index_of(std::string_view id) const;
  Spot spot(std::uint8_t i) const;
  std::array<Spot, 4> spots(const Packed& s) const;
  double com_y(const Packed& s) const;

  Packed pack(const BodyState& state) const;
  BodyState unpack(const Packed& s) const;

 private:
  const Wall* wall_;
  std::vector<LocalHold> holds_;
  std::vector<double> dist_;
  std::vector<std::uint8_t> starts_;
  std::uint8_t finish_ = 0;
};

/// Climber quantities used on every edge.
struct ClimberModel {
  ClimberModel(const ClimberProfile& climber, const ModelParams& params, double lambda_effort);

  const ClimberProfile* climber;
  double ability;
  double arm_span;
  double hand_hand;
  double hand_foot;
  double fear_sensitivity;
  double kappa;
  double lambda;
  double exposure_weight;
  // Feet stay FREE and only hands move; see feet_can_help.
  bool hands_only = false;
};

/// False when no foot placement can lower the cost of any beta: fear is
/// identically zero on this wall and a mantle is never cheaper than a reach.
/// Foot moves then only add cost, so dropping them keeps the optimum.
bool feet_can_help(const RouteView& view, const ClimberModel& model);

struct LocalMove {
  Limb limb = Limb::kLeftHand;
  std::uint8_t from = kFree;
  std::uint8_t to = kFree;
  double distance = 0.0;
  MoveType type = MoveType::kReach;
  double logit = 0.0;
  double cost = 0.0;
};

bool state_valid(const RouteView& view, const ClimberModel& model, const Packed& s);

bool is_terminal(const RouteView& view, const Packed& s);

LocalMove make_move(const RouteView& view, const ClimberModel& model, const Packed& from,
                    Limb limb, std::uint8_t to);

/// Forbidden (limb, destination) table, destination kFree at slot n.
class ForbiddenTable {
 public:
  ForbiddenTable() = default;
  ForbiddenTable(const RouteView& view, const std::vector<ForbiddenMove>& forbidden);

  bool blocked(Limb limb, std::uint8_t to) const {
    if (bits_.empty()) return false;
    const std::size_t slot = to == kFree ? n_ : to;
    return bits_[static_cast<std::size_t>(limb) * (n_ + 1) + slot];
  }

 private:
  std::size_t n_ = 0;
  std::vector<bool> bits_;
};

std::vector<Packed> start_states(const RouteView& view, const ClimberModel& model);

/// Start states the search uses: all of them, or the feet-FREE one when
/// model.hands_only.
std::vector<Packed> search_starts(const RouteView& view, const ClimberModel& model);

template <typename Visit>
void for_each_successor(const RouteView& view, const ClimberModel& model, const Packed& s,
                        const ForbiddenTable& forbidden, Visit&& visit) {
  const bool terminal = is_terminal(view, s);
  const auto n = static_cast<std::uint8_t>(view.size());
  for (Limb limb : kAllLimbs) {
    const auto li = static_cast<std::size_t>(limb);
    const bool hand = is_hand(limb);
    if (hand && terminal) continue;
    if (!hand && model.hands_only) continue;
    for (std::uint16_t raw = 0; raw <= n; ++raw) {
      const std::uint8_t to = raw == n ? kFree : static_cast<std::uint8_t>(raw);
      if (to == s[li]) continue;
      if (to == kFree) {
        if (hand) continue;
      } else {
        const LocalHold& h = view.hold(to);
        if (hand ? !h.hand : !h.foot) continue;
      }
      if (forbidden.blocked(limb, to)) continue;
      Packed next = s;
      next[li] = to;
      if (!state_valid(view, model, next)) continue;
      visit(limb, to, next);
    }
  }
}

struct LocalPlan {
  std::vector<Packed> states;
  std::vector<LocalMove> moves;
  double cost = 0.0;
  std::size_t expanded = 0;
};

/// A* search; nullopt when the finish is unreachable.
std::optional<LocalPlan> plan(const RouteView& view, const ClimberModel& model,
                              const ForbiddenTable& forbidden = {});

Beta to_beta(const RouteView& view, const LocalPlan& plan);

}  // namespace crux::detail
