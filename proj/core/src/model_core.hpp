#pragma once

// Numeric kernels behind the public success/cost/classification API. The
// planner's indexed fast path and the string-keyed public functions both call
// these so the two stay numerically identical.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "crux/body.hpp"
#include "crux/model.hpp"

namespace crux::detail {

inline constexpr double kReachTolerance = 1e-9;

inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

inline double logistic(double logit) {
  const double p = 1.0 / (1.0 + std::exp(-logit));
  // Keep the open interval (0,1) even when exp under/overflows.
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

/// -ln(logistic(logit)), accurate in both tails.
inline double neg_log_success(double logit) { return softplus(-logit); }

inline double fear_term(double fear_sensitivity, double panel_angle, double com_y,
                        double wall_height) {
  if (fear_sensitivity == 0.0 || wall_height <= 0.0) return 0.0;
  const double overhang = std::max(0.0, panel_angle - 90.0) / 90.0;
  return fear_sensitivity * overhang * (com_y / wall_height);
}

inline double effective_difficulty(double hold_difficulty, double distance, double arm_span,
                                   double exposure_weight, double exposure_of_type) {
  const double exposure_deficit =
      exposure_weight * (1.0 - static_cast<double>(kMoveTypeCount) * exposure_of_type);
  return std::max(hold_difficulty,
                  hold_difficulty + 0.5 * (distance / arm_span) + exposure_deficit);
}

inline double success_logit(double kappa, double ability, double effective_difficulty,
                            double fear) {
  return kappa * (ability - effective_difficulty - fear);
}

/// Limb position for classification; `key` identifies the hold so that
/// "same hold" tests do not depend on coordinates.
struct Spot {
  bool placed = false;
  double x = 0.0;
  double y = 0.0;
  int key = -1;
};

inline double spot_distance(const Spot& a, const Spot& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double com_y(const std::array<Spot, 4>& spots) {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : spots) {
    if (s.placed) {
      sum += s.y;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

inline MoveType classify(Limb limb, const std::array<Spot, 4>& from, const Spot& to,
                         double distance, double arm_span, double hand_foot) {
  const auto idx = [](Limb l) { return static_cast<std::size_t>(l); };
  const Spot& lh = from[idx(Limb::kLeftHand)];
  const Spot& rh = from[idx(Limb::kRightHand)];
  const double center = com_y(from);

  if (is_hand(limb)) {
    const Spot& self = from[idx(limb)];
    const Spot& other = limb == Limb::kLeftHand ? rh : lh;
    if (to.placed && other.placed && to.key == other.key) return MoveType::kMatch;
    if (to.placed && other.placed &&
        (limb == Limb::kLeftHand ? to.x > other.x : to.x < other.x)) {
      return MoveType::kCross;
    }
    if (distance > 0.85 * arm_span) return MoveType::kDyno;
    // Press: the hand leaves a ledge upward while a heel sits beside it.
    if (self.placed && to.placed && to.y > self.y && self.y >= center) {
      for (Limb foot : {Limb::kLeftFoot, Limb::kRightFoot}) {
        const Spot& f = from[idx(foot)];
        if (f.placed && spot_distance(f, self) <= 0.3) return MoveType::kMantle;
      }
    }
    return MoveType::kReach;
  }

  if (!to.placed) return MoveType::kReach;
  for (const Spot* hand : {&lh, &rh}) {
    if (hand->placed && hand->y >= center && spot_distance(to, *hand) <= 0.3) {
      return MoveType::kMantle;
    }
  }
  double lowest_hand = std::numeric_limits<double>::infinity();
  if (lh.placed) lowest_hand = std::min(lowest_hand, lh.y);
  if (rh.placed) lowest_hand = std::min(lowest_hand, rh.y);
  if (std::isfinite(lowest_hand) && to.y > lowest_hand - 0.6 * hand_foot) {
    return MoveType::kHighStep;
  }
  const Spot& other_foot = limb == Limb::kLeftFoot ? from[idx(Limb::kRightFoot)]
                                                   : from[idx(Limb::kLeftFoot)];
  if (other_foot.placed && other_foot.key == to.key) return MoveType::kFootSwap;
  return MoveType::kReach;
}

/// Reach and role-independent BodyState checks over placed spots.
inline bool spots_valid(const std::array<Spot, 4>& s, double hand_hand, double hand_foot) {
  const Spot& lh = s[0];
  const Spot& rh = s[1];
  int placed = 0;
  for (const auto& spot : s) placed += spot.placed ? 1 : 0;
  if (placed < 2 || (!lh.placed && !rh.placed)) return false;
  if (lh.placed && rh.placed && spot_distance(lh, rh) > hand_hand + kReachTolerance) return false;
  for (std::size_t f = 2; f < 4; ++f) {
    const Spot& foot = s[f];
    if (!foot.placed) continue;
    double highest_hand = -std::numeric_limits<double>::infinity();
    for (const Spot* hand : {&lh, &rh}) {
      if (!hand->placed) continue;
      if (spot_distance(foot, *hand) > hand_foot + kReachTolerance) return false;
      highest_hand = std::max(highest_hand, hand->y);
    }
    if (foot.y > highest_hand) return false;
  }
  return true;
}

}  // namespace crux::detail
