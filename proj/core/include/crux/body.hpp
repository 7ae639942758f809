#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crux/model.hpp"

namespace crux {

enum class Limb : std::uint8_t { kLeftHand, kRightHand, kLeftFoot, kRightFoot };

inline constexpr std::array<Limb, 4> kAllLimbs = {Limb::kLeftHand, Limb::kRightHand,
                                                  Limb::kLeftFoot, Limb::kRightFoot};

std::string_view to_string(Limb limb);
std::optional<Limb> parse_limb(std::string_view text);

inline constexpr bool is_hand(Limb limb) {
  return limb == Limb::kLeftHand || limb == Limb::kRightHand;
}

/// Hold id a limb rests on; nullopt means FREE (dangling or smearing).
using LimbHold = std::optional<std::string>;

struct BodyState {
  std::array<LimbHold, 4> holds;  // indexed by Limb

  const LimbHold& at(Limb limb) const { return holds[static_cast<std::size_t>(limb)]; }
  LimbHold& at(Limb limb) { return holds[static_cast<std::size_t>(limb)]; }

  /// Mean height of the holds under non-FREE limbs.
  double com_y(const Wall& wall) const;

  friend bool operator==(const BodyState&, const BodyState&) = default;
};

struct Move {
  Limb limb = Limb::kLeftHand;
  LimbHold from;
  LimbHold to;
  double distance = 0.0;
  MoveType move_type = MoveType::kReach;

  friend bool operator==(const Move&, const Move&) = default;
};

struct Beta {
  std::vector<BodyState> states;
  std::vector<Move> moves;  // moves[i] takes states[i] to states[i+1]
  double total_cost = 0.0;

  friend bool operator==(const Beta&, const Beta&) = default;
};

/// Knobs of the success/cost model shared by planning and simulation.
struct ModelParams {
  double lambda_effort = 0.1;
  double exposure_weight = 0.25;
  double kappa = 4.0;
};

/// BodyState invariants: hold roles per limb, at least two placed limbs with
/// a hand among them, reach limits, and no foot above both hands.
bool is_valid_state(const BodyState& state, const Wall& wall, const ClimberProfile& climber);

}  // namespace crux
