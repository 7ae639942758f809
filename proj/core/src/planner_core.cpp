#include "planner_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

#include "crux/error.hpp"

namespace crux::detail {

namespace {

constexpr std::uint32_t kNoPred = 0xFFFFFFFFu;

struct Node {
  double g = std::numeric_limits<double>::infinity();
  std::uint32_t pred = kNoPred;
  std::uint16_t moves = 0;
  bool closed = false;
};

struct QueueEntry {
  double f;
  double g;
  std::uint16_t moves;
  std::uint32_t key;
};

// Min-heap order on (f, moves, key).
struct QueueAfter {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.moves != b.moves) return a.moves > b.moves;
    return a.key > b.key;
  }
};

class DenseTable {
 public:
  // Hands-only searches keep both feet FREE, so only the hand slots vary.
  DenseTable(std::size_t n, bool hands_only)
      : m_(n + 1), n_(static_cast<std::uint8_t>(n)), hands_only_(hands_only) {
    nodes_.resize(hands_only ? m_ * m_ : m_ * m_ * m_ * m_);
  }
  Node& operator[](std::uint32_t key) { return nodes_[index(key)]; }

 private:
  std::size_t slot(std::uint8_t b) const { return b == kFree ? n_ : b; }
  std::size_t index(std::uint32_t key) const {
    const Packed s = unpack_key(key);
    if (hands_only_) return slot(s[0]) * m_ + slot(s[1]);
    return ((slot(s[0]) * m_ + slot(s[1])) * m_ + slot(s[2])) * m_ + slot(s[3]);
  }
  std::size_t m_;
  std::uint8_t n_;
  bool hands_only_;
  std::vector<Node> nodes_;
};

class SparseTable {
 public:
  Node& operator[](std::uint32_t key) { return nodes_[key]; }

 private:
  std::unordered_map<std::uint32_t, Node> nodes_;
};

// Lower bound on the cost for one hand to travel from each hold to the
// finish. Edge u->v is priced with fear at zero and the most favourable
// exposure, which never exceeds the true cost of any hand move u->v, so the
// sum over both hands is a consistent heuristic.
std::vector<double> hand_heuristic(const RouteView& view, const ClimberModel& model) {
  const std::size_t n = view.size();
  // Exposure lowers effective difficulty, so the largest weight is the most
  // favourable one.
  double best_exposure = 0.0;
  for (MoveType t : kAllMoveTypes) {
    best_exposure = std::max(best_exposure, model.climber->exposure_of(t));
  }
  auto edge = [&](std::size_t u, std::size_t v) {
    const auto a = static_cast<std::uint8_t>(u);
    const auto b = static_cast<std::uint8_t>(v);
    const double d = view.distance(a, b);
    const double diff = view.hold(b).difficulty;
    const double d_eff = effective_difficulty(diff, d, model.arm_span, model.exposure_weight,
                                              best_exposure);
    return neg_log_success(success_logit(model.kappa, model.ability, d_eff, 0.0)) +
           model.lambda * d / model.hand_hand;
  };
  std::vector<double> h(n, std::numeric_limits<double>::infinity());
  std::vector<bool> done(n, false);
  h[view.finish()] = 0.0;
  for (std::size_t iter = 0; iter < n; ++iter) {
    std::size_t best = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && view.hold(static_cast<std::uint8_t>(v)).hand &&
          (best == n || h[v] < h[best])) {
        best = v;
      }
    }
    if (best == n || !std::isfinite(h[best])) break;
    done[best] = true;
    for (std::size_t u = 0; u < n; ++u) {
      if (done[u] || !view.hold(static_cast<std::uint8_t>(u)).hand) continue;
      h[u] = std::min(h[u], h[best] + edge(u, best));
    }
  }
  return h;
}

template <typename Table>
std::optional<LocalPlan> search(const RouteView& view, const ClimberModel& model,
                                const ForbiddenTable& forbidden, Table& table) {
  const auto starts = search_starts(view, model);
  if (starts.empty()) return std::nullopt;
  const auto hand_h = hand_heuristic(view, model);
  auto heuristic = [&](const Packed& s) {
    const double a = s[0] == kFree ? 0.0 : hand_h[s[0]];
    const double b = s[1] == kFree ? 0.0 : hand_h[s[1]];
    return a + b;
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueAfter> open;
  for (const auto& s : starts) {
    const auto key = pack_key(s);
    Node& node = table[key];
    node.g = 0.0;
    node.moves = 0;
    node.pred = kNoPred;
    open.push({heuristic(s), 0.0, 0, key});
  }

  std::size_t expanded = 0;
  std::optional<std::uint32_t> goal;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    Node& node = table[top.key];
    if (node.closed || top.g != node.g || top.moves != node.moves) continue;
    node.closed = true;
    ++expanded;
    const Packed s = unpack_key(top.key);
    if (is_terminal(view, s)) {
      goal = top.key;
      break;
    }
    const double g = node.g;
    const auto moves = static_cast<std::uint16_t>(node.moves + 1);
    for_each_successor(view, model, s, forbidden, [&](Limb limb, std::uint8_t to, const Packed& next) {
      const LocalMove move = make_move(view, model, s, limb, to);
      const double cand = g + move.cost;
      const auto next_key = pack_key(next);
      Node& succ = table[next_key];
      if (succ.closed) return;
      const bool better =
          cand < succ.g ||
          (cand == succ.g && (moves < succ.moves || (moves == succ.moves && top.key < succ.pred)));
      if (!better) return;
      succ.g = cand;
      succ.moves = moves;
      succ.pred = top.key;
      open.push({cand + heuristic(next), cand, moves, next_key});
    });
  }
  if (!goal) return std::nullopt;

  LocalPlan result;
  result.expanded = expanded;
  result.cost = table[*goal].g;
  for (std::uint32_t key = *goal; key != kNoPred; key = table[key].pred) {
    result.states.push_back(unpack_key(key));
  }
  std::reverse(result.states.begin(), result.states.end());
  for (std::size_t i = 0; i + 1 < result.states.size(); ++i) {
    const Packed& a = result.states[i];
    const Packed& b = result.states[i + 1];
    for (Limb limb : kAllLimbs) {
      const auto li = static_cast<std::size_t>(limb);
      if (a[li] != b[li]) {
        result.moves.push_back(make_move(view, model, a, limb, b[li]));
        break;
      }
    }
  }
  return result;
}

}  // namespace

RouteView::RouteView(const Route& route, const Wall& wall) : wall_(&wall) {
  const auto report = validate_route(route, wall);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidArgument,
                "route " + route.name + " is invalid: " + report.issues.front().code);
  }
  std::vector<std::string_view> ids(route.hold_ids.begin(), route.hold_ids.end());
  std::sort(ids.begin(), ids.end());
  if (ids.size() > kMaxRouteHolds) {
    throw Error(ErrorCode::kLimitExceeded, "route uses more than 254 holds");
  }
  for (auto id : ids) {
    const Hold* h = wall.find(id);
    holds_.push_back({h, h->x, h->y, h->difficulty, h->roles.hand, h->roles.foot});
  }
  const std::size_t n = holds_.size();
  dist_.resize(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      dist_[a * n + b] = std::hypot(holds_[a].x - holds_[b].x, holds_[a].y - holds_[b].y);
    }
  }
  for (const auto& id : route.start_hold_ids) starts_.push_back(*index_of(id));
  finish_ = *index_of(route.finish_hold_id);
}

std::optional<std::uint8_t> RouteView::index_of(std::string_view id) const {
  auto it = std::lower_bound(holds_.begin(), holds_.end(), id,
                             [](const LocalHold& h, std::string_view v) { return h.hold->id < v; });
  if (it == holds_.end() || it->hold->id != id) return std::nullopt;
  return static_cast<std::uint8_t>(it - holds_.begin());
}

Spot RouteView::spot(std::uint8_t i) const {
  if (i == kFree) return {};
  return {true, holds_[i].x, holds_[i].y, i};
}

std::array<Spot, 4> RouteView::spots(const Packed& s) const {
  return {spot(s[0]), spot(s[1]), spot(s[2]), spot(s[3])};
}

double RouteView::com_y(const Packed& s) const { return detail::com_y(spots(s)); }

Packed RouteView::pack(const BodyState& state) const {
  Packed out{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!state.holds[i]) {
      out[i] = kFree;
      continue;
    }
    const auto idx = index_of(*state.holds[i]);
    if (!idx) throw Error(ErrorCode::kInvalidArgument, "state uses a hold outside the route");
    out[i] = *idx;
  }
  return out;
}

BodyState RouteView::unpack(const Packed& s) const {
  BodyState state;
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] != kFree) state.holds[i] = holds_[s[i]].hold->id;
  }
  return state;
}

ClimberModel::ClimberModel(const ClimberProfile& c, const ModelParams& params, double lambda_effort)
    : climber(&c),
      ability(c.ability),
      arm_span(c.arm_span),
      hand_hand(reach_limit(c).hand_hand),
      hand_foot(reach_limit(c).hand_foot),
      fear_sensitivity(c.fear_sensitivity),
      kappa(params.kappa),
      lambda(lambda_effort),
      exposure_weight(params.exposure_weight) {}

bool state_valid(const RouteView& view, const ClimberModel& model, const Packed& s) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (s[i] == kFree) continue;
    const LocalHold& h = view.hold(s[i]);
    if (i < 2 ? !h.hand : !h.foot) return false;
  }
  return spots_valid(view.spots(s), model.hand_hand, model.hand_foot);
}

bool is_terminal(const RouteView& view, const Packed& s) {
  return s[0] == view.finish() && s[1] == view.finish();
}

LocalMove make_move(const RouteView& view, const ClimberModel& model, const Packed& from,
                    Limb limb, std::uint8_t to) {
  LocalMove move;
  move.limb = limb;
  move.from = from[static_cast<std::size_t>(limb)];
  move.to = to;
  move.distance = view.distance(move.from, to);
  const auto spots = view.spots(from);
  move.type = classify(limb, spots, view.spot(to), move.distance, model.arm_span, model.hand_foot);
  const double difficulty = to == kFree ? 0.0 : view.hold(to).difficulty;
  const double center = com_y(spots);
  const double fear = fear_term(model.fear_sensitivity, view.wall().panel_angle(center), center,
                                view.wall().height);
  const double d_eff = effective_difficulty(difficulty, move.distance, model.arm_span,
                                            model.exposure_weight,
                                            model.climber->exposure_of(move.type));
  move.logit = success_logit(model.kappa, model.ability, d_eff, fear);
  move.cost = neg_log_success(move.logit) + model.lambda * move.distance / model.hand_hand;
  return move;
}

ForbiddenTable::ForbiddenTable(const RouteView& view, const std::vector<ForbiddenMove>& forbidden)
    : n_(view.size()), bits_(4 * (view.size() + 1), false) {
  for (const auto& f : forbidden) {
    std::size_t slot = n_;
    if (f.to) {
      const auto idx = view.index_of(*f.to);
      if (!idx) continue;
      slot = *idx;
    }
    bits_[static_cast<std::size_t>(f.limb) * (n_ + 1) + slot] = true;
  }
}

std::vector<Packed> start_states(const RouteView& view, const ClimberModel& model) {
  std::vector<std::uint8_t> hand_starts;
  for (auto s : view.starts()) {
    if (view.hold(s).hand) hand_starts.push_back(s);
  }
  if (hand_starts.empty()) return {};
  std::uint8_t left = hand_starts.front();
  std::uint8_t right = left;
  if (hand_starts.size() == 2) {
    right = hand_starts[1];
    const auto& a = view.hold(left);
    const auto& b = view.hold(right);
    // Left hand takes the left-most start hold; ids break ties.
    if (b.x < a.x || (b.x == a.x && b.hold->id < a.hold->id)) std::swap(left, right);
  }
  const double lowest_hand = std::min(view.hold(left).y, view.hold(right).y);
  std::vector<std::uint8_t> feet;
  for (std::size_t i = 0; i < view.size(); ++i) {
    const auto& h = view.hold(static_cast<std::uint8_t>(i));
    if (h.foot && h.y < lowest_hand) feet.push_back(static_cast<std::uint8_t>(i));
  }
  feet.push_back(kFree);
  std::vector<Packed> out;
  for (auto lf : feet) {
    for (auto rf : feet) {
      const Packed s{left, right, lf, rf};
      if (state_valid(view, model, s)) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Packed& a, const Packed& b) { return pack_key(a) < pack_key(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Packed> search_starts(const RouteView& view, const ClimberModel& model) {
  auto starts = start_states(view, model);
  if (model.hands_only) {
    std::erase_if(starts, [](const Packed& s) { return s[2] != kFree || s[3] != kFree; });
  }
  return starts;
}

bool feet_can_help(const RouteView& view, const ClimberModel& model) {
  const Wall& wall = view.wall();
  bool overhung = false;
  for (const auto& p : wall.panels) overhung = overhung || p.angle_deg > 90.0;
  const bool fear_possible = model.fear_sensitivity != 0.0 && overhung && wall.height > 0.0;
  const bool mantle_cheaper =
      model.exposure_weight != 0.0 &&
      model.climber->exposure_of(MoveType::kMantle) > model.climber->exposure_of(MoveType::kReach);
  return fear_possible || mantle_cheaper;
}

std::optional<LocalPlan> plan(const RouteView& view, const ClimberModel& model,
                              const ForbiddenTable& forbidden) {
  constexpr std::size_t kDenseLimit = 16;
  if (model.hands_only || view.size() <= kDenseLimit) {
    DenseTable table(view.size(), model.hands_only);
    return search(view, model, forbidden, table);
  }
  SparseTable table;
  return search(view, model, forbidden, table);
}

Beta to_beta(const RouteView& view, const LocalPlan& plan) {
  Beta beta;
  beta.total_cost = plan.cost;
  for (const auto& s : plan.states) beta.states.push_back(view.unpack(s));
  for (const auto& m : plan.moves) {
    Move move;
    move.limb = m.limb;
    if (m.from != kFree) move.from = view.hold(m.from).hold->id;
    if (m.to != kFree) move.to = view.hold(m.to).hold->id;
    move.distance = m.distance;
    move.move_type = m.type;
    beta.moves.push_back(std::move(move));
  }
  return beta;
}

}  // namespace crux::detail
