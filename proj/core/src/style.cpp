#include "crux/style.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "crux/error.hpp"
#include "crux/rng.hpp"
#include "model_core.hpp"

namespace crux {

namespace {

detail::Spot spot_of(const LimbHold& id, const Wall& wall) {
  if (!id) return {};
  const Hold* h = wall.find(*id);
  if (h == nullptr) return {};
  return {true, h->x, h->y, static_cast<int>(h - wall.holds.data())};
}

LorenzState derivative(const LorenzState& s) {
  LorenzState d = s;
  d.x = s.sigma * (s.y - s.x);
  d.y = s.x * (s.rho - s.z) - s.y;
  d.z = s.x * s.y - s.beta * s.z;
  return d;
}

LorenzState offset(const LorenzState& s, const LorenzState& d, double h) {
  LorenzState out = s;
  out.x += h * d.x;
  out.y += h * d.y;
  out.z += h * d.z;
  return out;
}

// Nearest other type by nominal difficulty that keeps the hold's roles legal.
std::optional<HoldType> swap_type(HoldType current) {
  if (current == HoldType::kFoothold) return std::nullopt;
  std::optional<HoldType> best;
  double best_gap = 0.0;
  for (HoldType t : kAllHoldTypes) {
    if (t == current || t == HoldType::kFoothold) continue;
    const double gap = std::abs(nominal_difficulty(t) - nominal_difficulty(current));
    if (!best || gap < best_gap) {
      best = t;
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace

MoveType classify_move(const Move& move, const BodyState& from, const Wall& wall,
                       const ClimberProfile& climber) {
  const std::array<detail::Spot, 4> spots = {spot_of(from.holds[0], wall),
                                             spot_of(from.holds[1], wall),
                                             spot_of(from.holds[2], wall),
                                             spot_of(from.holds[3], wall)};
  return detail::classify(move.limb, spots, spot_of(move.to, wall), move.distance,
                          climber.arm_span, reach_limit(climber).hand_foot);
}

StyleVector style_vector(const std::vector<MoveType>& types) {
  StyleVector out;
  if (types.empty()) return out;
  out.weights.fill(0.0);
  for (MoveType t : types) out.weights[static_cast<std::size_t>(t)] += 1.0;
  for (auto& w : out.weights) w /= static_cast<double>(types.size());
  return out;
}

StyleVector style_vector(const Beta& beta) { return style_vector(move_types(beta)); }

nlohmann::json style_to_json(const StyleVector& style) {
  nlohmann::json out = nlohmann::json::object();
  for (MoveType t : kAllMoveTypes) out[std::string(to_string(t))] = style[t];
  return out;
}

std::optional<StyleVector> style_from_json(const nlohmann::json& object) {
  if (!object.is_object()) return std::nullopt;
  StyleVector out;
  out.weights.fill(0.0);
  double total = 0.0;
  for (const auto& [key, value] : object.items()) {
    const auto type = parse_move_type(key);
    if (!type || !value.is_number()) return std::nullopt;
    const double w = value.get<double>();
    if (!std::isfinite(w) || w < 0.0) return std::nullopt;
    out.weights[static_cast<std::size_t>(*type)] = w;
    total += w;
  }
  if (!(total > 0.0)) return std::nullopt;
  for (auto& w : out.weights) w /= total;
  return out;
}

double normalized_entropy(const StyleVector& style) {
  double h = 0.0;
  for (double p : style.weights) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::clamp(h / std::log(static_cast<double>(kMoveTypeCount)), 0.0, 1.0);
}

double normalized_edit_distance(const std::vector<MoveType>& a, const std::vector<MoveType>& b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return static_cast<double>(row[b.size()]) / static_cast<double>(longest);
}

std::size_t max_run_length(const std::vector<MoveType>& types) {
  std::size_t best = 0;
  std::size_t run = 0;
  for (std::size_t i = 0; i < types.size(); ++i) {
    run = (i > 0 && types[i] == types[i - 1]) ? run + 1 : 1;
    best = std::max(best, run);
  }
  return best;
}

std::vector<MoveType> move_types(const Beta& beta) {
  std::vector<MoveType> out;
  out.reserve(beta.moves.size());
  for (const auto& m : beta.moves) out.push_back(m.move_type);
  return out;
}

double reward(const std::vector<MoveType>& types, const std::optional<StyleVector>& target_style,
              const std::vector<std::vector<MoveType>>& prior_sequences,
              const RewardWeights& weights) {
  const StyleVector style = style_vector(types);
  double match = 0.0;
  if (target_style) {
    double l1 = 0.0;
    for (std::size_t t = 0; t < kMoveTypeCount; ++t) {
      l1 += std::abs(style.weights[t] - target_style->weights[t]);
    }
    match = 1.0 - l1 / 2.0;
  }
  double novelty = 1.0;
  for (const auto& prior : prior_sequences) {
    novelty = std::min(novelty, normalized_edit_distance(types, prior));
  }
  const double repetition =
      types.empty() ? 0.0
                    : static_cast<double>(max_run_length(types)) / static_cast<double>(types.size());
  return weights.diversity * normalized_entropy(style) + weights.match * match +
         weights.novelty * novelty - weights.repetition * repetition;
}

double reward(const Beta& beta, const std::optional<StyleVector>& target_style,
              const std::vector<Beta>& prior_betas, const RewardWeights& weights) {
  std::vector<std::vector<MoveType>> priors;
  priors.reserve(prior_betas.size());
  for (const auto& b : prior_betas) priors.push_back(move_types(b));
  return reward(move_types(beta), target_style, priors, weights);
}

std::vector<LorenzState> lorenz_trajectory(const LorenzState& initial, double dt, int steps) {
  if (dt > kLorenzMaxDt) {
    throw Error(ErrorCode::kDtTooLarge, "Lorenz step must not exceed 0.02");
  }
  if (!(dt > 0.0) || steps < 1) {
    throw Error(ErrorCode::kInvalidArgument, "Lorenz step must be positive with steps >= 1");
  }
  std::vector<LorenzState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(initial);
  LorenzState s = initial;
  for (int i = 0; i < steps; ++i) {
    const LorenzState k1 = derivative(s);
    const LorenzState k2 = derivative(offset(s, k1, dt / 2));
    const LorenzState k3 = derivative(offset(s, k2, dt / 2));
    const LorenzState k4 = derivative(offset(s, k3, dt));
    s.x += dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    s.y += dt / 6 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y);
    s.z += dt / 6 * (k1.z + 2 * k2.z + 2 * k3.z + k4.z);
    out.push_back(s);
  }
  return out;
}

VariedRoute vary_route(const Route& route, const Wall& wall, const Beta& beta, double intensity,
                       std::uint64_t seed) {
  if (!(intensity >= 0.0 && intensity <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "intensity must lie in [0,1]");
  }
  VariedRoute out{route, wall};
  if (intensity == 0.0 || beta.moves.empty()) return out;

  // Burn in onto the attractor, then sample every kStride steps so that
  // consecutive moves see decorrelated states.
  constexpr int kBurnIn = 200;
  constexpr int kStride = 8;
  constexpr double kDt = 0.01;
  constexpr double kRadius = 25.0;     // typical |(x,y)| on the attractor
  constexpr double kSwapZ = 40.0;      // upper lobe excursions swap type
  Rng rng(derive_seed(seed, fnv1a(route.name)));
  LorenzState init;
  init.x = rng.uniform(-10.0, 10.0);
  init.y = rng.uniform(-10.0, 10.0);
  init.z = rng.uniform(10.0, 30.0);
  const int samples = static_cast<int>(beta.moves.size());
  const auto traj = lorenz_trajectory(init, kDt, kBurnIn + kStride * samples);

  std::vector<std::string> touched;
  for (int i = 0; i < samples; ++i) {
    const Move& move = beta.moves[static_cast<std::size_t>(i)];
    if (!move.to) continue;
    if (std::find(touched.begin(), touched.end(), *move.to) != touched.end()) continue;
    touched.push_back(*move.to);
    auto it = std::find_if(out.wall.holds.begin(), out.wall.holds.end(),
                           [&](const Hold& h) { return h.id == *move.to; });
    if (it == out.wall.holds.end()) continue;
    const LorenzState& s = traj[static_cast<std::size_t>(kBurnIn + kStride * (i + 1))];
    const double angle = std::atan2(s.y, s.x);
    const double scale = std::min(1.0, std::hypot(s.x, s.y) / kRadius);
    const double magnitude = intensity * kMaxVariationMeters * scale;
    // Clamping to the wall is a projection onto a box that contains the
    // original point, so it never lengthens the displacement.
    it->x = std::clamp(it->x + magnitude * std::cos(angle), 0.0, wall.width);
    it->y = std::clamp(it->y + magnitude * std::sin(angle), 0.0, wall.height);
    if (s.z > kSwapZ) {
      if (const auto next = swap_type(it->type)) {
        it->difficulty = std::clamp(
            it->difficulty + nominal_difficulty(*next) - nominal_difficulty(it->type), 0.0, 1.0);
        it->type = *next;
      }
    }
  }
  return out;
}

}  // namespace crux
