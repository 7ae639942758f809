#include "crux/format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace crux {

namespace {

struct Token {
  std::string_view text;
  int column;
};

struct PendingRef {
  std::string id;
  SourceLocation location;
};

struct RouteDraft {
  Route route;
  SourceLocation location;
  std::optional<SourceLocation> start_at;
  std::optional<SourceLocation> finish_at;
  std::vector<PendingRef> refs;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

std::string message_for(ParseErrorCode code, std::string_view detail) {
  switch (code) {
    case ParseErrorCode::kUnknownKeyword:
      return "unknown keyword '" + std::string(detail) + "'";
    case ParseErrorCode::kArity:
      return "wrong number of fields: " + std::string(detail);
    case ParseErrorCode::kNumberFormat:
      return "'" + std::string(detail) + "' is not a finite number";
    case ParseErrorCode::kDuplicateId:
      return "duplicate definition of '" + std::string(detail) + "'";
    case ParseErrorCode::kUndefinedRef:
      return "undefined reference '" + std::string(detail) + "'";
    case ParseErrorCode::kRange:
      return "value out of range: " + std::string(detail);
  }
  return std::string(detail);
}

class Parser {
 public:
  ParseResult run(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = text.find('\n', pos);
      std::string_view line = text.substr(
          pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
      ++line_no;
      handle_line(line, line_no);
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
    finish();
    ParseResult result;
    std::stable_sort(errors_.begin(), errors_.end(),
                     [](const ParseError& a, const ParseError& b) {
                       return a.location.line < b.location.line;
                     });
    result.errors = std::move(errors_);
    if (result.errors.empty()) result.document = std::move(document_);
    return result;
  }

 private:
  void error(SourceLocation at, ParseErrorCode code, std::string_view detail) {
    errors_.push_back({at, code, message_for(code, detail)});
  }

  std::optional<double> number(const Token& token, int line) {
    double value = 0.0;
    const char* begin = token.text.data();
    const char* end = begin + token.text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
      error({line, token.column}, ParseErrorCode::kNumberFormat, token.text);
      return std::nullopt;
    }
    return value;
  }

  bool arity(const std::vector<Token>& tokens, std::size_t min_args,
             std::size_t max_args, int line) {
    const std::size_t args = tokens.size() - 1;
    if (args < min_args || args > max_args) {
      std::string expected = std::to_string(min_args);
      if (max_args != min_args) {
        expected += max_args == SIZE_MAX ? "+" : ".." + std::to_string(max_args);
      }
      error({line, tokens.front().column}, ParseErrorCode::kArity,
            std::string(tokens.front().text) + " expects " + expected +
                " argument(s), got " + std::to_string(args));
      return false;
    }
    return true;
  }

  RouteDraft* open_route(const Token& keyword, int line) {
    if (routes_.empty()) {
      error({line, keyword.column}, ParseErrorCode::kUndefinedRef,
            std::string(keyword.text) + " outside of a ROUTE block");
      return nullptr;
    }
    return &routes_.back();
  }

  void handle_line(std::string_view line, int line_no) {
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = tokenize(line);
    if (tokens.empty()) return;
    const auto keyword = tokens.front().text;
    if (keyword == "WALL") {
      on_wall(tokens, line_no);
    } else if (keyword == "PANEL") {
      on_panel(tokens, line_no);
    } else if (keyword == "HOLD") {
      on_hold(tokens, line_no);
    } else if (keyword == "ROUTE") {
      on_route(tokens, line_no);
    } else if (keyword == "START") {
      on_start(tokens, line_no);
    } else if (keyword == "FINISH") {
      on_finish(tokens, line_no);
    } else if (keyword == "USE") {
      on_use(tokens, line_no);
    } else if (keyword == "GRADE") {
      on_grade(tokens, line_no);
    } else if (keyword == "STYLE") {
      on_style(tokens, line_no);
    } else {
      error({line_no, tokens.front().column}, ParseErrorCode::kUnknownKeyword, keyword);
    }
  }

  void on_wall(const std::vector<Token>& t, int line) {
    if (!arity(t, 2, 2, line)) return;
    if (wall_at_) {
      error({line, t[0].column}, ParseErrorCode::kDuplicateId, "WALL");
      return;
    }
    const auto w = number(t[1], line);
    const auto h = number(t[2], line);
    wall_at_ = SourceLocation{line, t[0].column};
    if (!w || !h) return;
    if (!(*w > 0.0)) error({line, t[1].column}, ParseErrorCode::kRange, "wall width must be > 0");
    if (!(*h > 0.0)) error({line, t[2].column}, ParseErrorCode::kRange, "wall height must be > 0");
    document_.wall.width = *w;
    document_.wall.height = *h;
  }

  void on_panel(const std::vector<Token>& t, int line) {
    if (!arity(t, 3, 3, line)) return;
    const auto y0 = number(t[1], line);
    const auto y1 = number(t[2], line);
    const auto angle = number(t[3], line);
    if (!y0 || !y1 || !angle) return;
    if (!(*angle >= 60.0 && *angle <= 180.0)) {
      error({line, t[3].column}, ParseErrorCode::kRange, "panel angle must lie in [60,180]");
    }
    if (!(*y1 > *y0)) {
      error({line, t[2].column}, ParseErrorCode::kRange, "panel needs y1 > y0");
    }
    panels_.push_back({Panel{*y0, *y1, *angle}, SourceLocation{line, t[0].column}});
  }

  void on_hold(const std::vector<Token>& t, int line) {
    if (!arity(t, 7, 7, line)) return;
    Hold hold;
    hold.id = std::string(t[1].text);
    bool good = true;
    const auto x = number(t[2], line);
    const auto y = number(t[3], line);
    const auto type = parse_hold_type(t[4].text);
    if (!type) {
      error({line, t[4].column}, ParseErrorCode::kUnknownKeyword, t[4].text);
      good = false;
    }
    const auto difficulty = number(t[5], line);
    const auto roles = parse_roles(t[6].text);
    if (!roles) {
      error({line, t[6].column}, ParseErrorCode::kUnknownKeyword, t[6].text);
      good = false;
    }
    const auto orientation = number(t[7], line);
    if (!x || !y || !difficulty || !orientation) good = false;
    if (difficulty && !(*difficulty >= 0.0 && *difficulty <= 1.0)) {
      error({line, t[5].column}, ParseErrorCode::kRange,
            "difficulty " + std::string(t[5].text) + " not in [0,1]");
      good = false;
    }
    if (orientation && !(*orientation >= 0.0 && *orientation < 360.0)) {
      error({line, t[7].column}, ParseErrorCode::kRange,
            "orientation " + std::string(t[7].text) + " not in [0,360)");
      good = false;
    }
    if (type && roles && *type == HoldType::kFoothold && !(*roles == Roles{false, true})) {
      error({line, t[6].column}, ParseErrorCode::kRange, "footholds take the foot role only");
      good = false;
    }
    if (hold_lines_.count(hold.id) != 0) {
      error({line, t[1].column}, ParseErrorCode::kDuplicateId, hold.id);
      return;
    }
    hold_lines_[hold.id] = SourceLocation{line, t[0].column};
    if (!good) return;
    hold.x = *x;
    hold.y = *y;
    hold.type = *type;
    hold.difficulty = *difficulty;
    hold.roles = *roles;
    hold.orientation_deg = *orientation;
    holds_.push_back({std::move(hold), SourceLocation{line, t[2].column}});
  }

  void on_route(const std::vector<Token>& t, int line) {
    if (!arity(t, 1, 1, line)) return;
    const std::string name(t[1].text);
    if (!route_names_.insert(name).second) {
      error({line, t[1].column}, ParseErrorCode::kDuplicateId, name);
    }
    RouteDraft draft;
    draft.route.name = name;
    draft.location = {line, t[0].column};
    routes_.push_back(std::move(draft));
  }

  void on_start(const std::vector<Token>& t, int line) {
    RouteDraft* draft = open_route(t[0], line);
    if (draft == nullptr || !arity(t, 1, 2, line)) return;
    if (draft->start_at) {
      error({line, t[0].column}, ParseErrorCode::kDuplicateId, "START");
      return;
    }
    draft->start_at = SourceLocation{line, t[0].column};
    for (std::size_t i = 1; i < t.size(); ++i) {
      draft->route.start_hold_ids.emplace_back(t[i].text);
      draft->refs.push_back({std::string(t[i].text), {line, t[i].column}});
    }
    if (t.size() == 3 && t[1].text == t[2].text) {
      error({line, t[2].column}, ParseErrorCode::kDuplicateId, t[2].text);
    }
  }

  void on_finish(const std::vector<Token>& t, int line) {
    RouteDraft* draft = open_route(t[0], line);
    if (draft == nullptr || !arity(t, 1, 1, line)) return;
    if (draft->finish_at) {
      error({line, t[0].column}, ParseErrorCode::kDuplicateId, "FINISH");
      return;
    }
    draft->finish_at = SourceLocation{line, t[0].column};
    draft->route.finish_hold_id = std::string(t[1].text);
    draft->refs.push_back({std::string(t[1].text), {line, t[1].column}});
  }

  void on_use(const std::vector<Token>& t, int line) {
    RouteDraft* draft = open_route(t[0], line);
    if (draft == nullptr || !arity(t, 1, SIZE_MAX, line)) return;
    for (std::size_t i = 1; i < t.size(); ++i) {
      draft->route.hold_ids.emplace_back(t[i].text);
      draft->refs.push_back({std::string(t[i].text), {line, t[i].column}});
    }
  }

  void on_grade(const std::vector<Token>& t, int line) {
    RouteDraft* draft = open_route(t[0], line);
    if (draft == nullptr || !arity(t, 1, 1, line)) return;
    if (draft->route.assigned_grade) {
      error({line, t[0].column}, ParseErrorCode::kDuplicateId, "GRADE");
      return;
    }
    const auto grade = GradeLabel::parse(t[1].text);
    if (!grade) {
      error({line, t[1].column}, ParseErrorCode::kRange,
            "'" + std::string(t[1].text) + "' is not a grade between 5.1 and 5.15d");
      return;
    }
    draft->route.assigned_grade = grade;
  }

  void on_style(const std::vector<Token>& t, int line) {
    RouteDraft* draft = open_route(t[0], line);
    if (draft == nullptr || !arity(t, 1, SIZE_MAX, line)) return;
    for (std::size_t i = 1; i < t.size(); ++i) {
      const auto tag = parse_move_type(t[i].text);
      if (!tag) {
        error({line, t[i].column}, ParseErrorCode::kUnknownKeyword, t[i].text);
        continue;
      }
      draft->route.style_tags.push_back(*tag);
    }
  }

  void finish() {
    if (!wall_at_) {
      error({1, 1}, ParseErrorCode::kArity, "document requires one WALL record");
    }
    Wall& wall = document_.wall;
    std::sort(panels_.begin(), panels_.end(), [](const auto& a, const auto& b) {
      return a.first.y0 < b.first.y0;
    });
    if (wall_at_ && panels_.empty()) {
      error(*wall_at_, ParseErrorCode::kArity, "wall requires at least one PANEL");
    }
    double expected = 0.0;
    for (const auto& [panel, at] : panels_) {
      if (std::abs(panel.y0 - expected) > 1e-9) {
        error(at, ParseErrorCode::kRange, "panels must partition [0,height] without gaps or overlap");
      }
      expected = panel.y1;
      wall.panels.push_back(panel);
    }
    if (wall_at_ && !panels_.empty() && wall.height > 0.0 &&
        std::abs(expected - wall.height) > 1e-9) {
      error(panels_.back().second, ParseErrorCode::kRange, "last panel must end at the wall height");
    }
    for (auto& [hold, at] : holds_) {
      if (wall_at_ && wall.width > 0.0 && wall.height > 0.0 &&
          !(hold.x >= 0.0 && hold.x <= wall.width && hold.y >= 0.0 && hold.y <= wall.height)) {
        error(at, ParseErrorCode::kRange, "hold '" + hold.id + "' lies outside the wall");
      }
      wall.holds.push_back(std::move(hold));
    }
    std::sort(wall.holds.begin(), wall.holds.end(),
              [](const Hold& a, const Hold& b) { return a.id < b.id; });

    for (auto& draft : routes_) {
      if (!draft.start_at) {
        error(draft.location, ParseErrorCode::kArity, "ROUTE " + draft.route.name + " has no START");
      }
      if (!draft.finish_at) {
        error(draft.location, ParseErrorCode::kArity, "ROUTE " + draft.route.name + " has no FINISH");
      }
      for (const auto& ref : draft.refs) {
        if (hold_lines_.count(ref.id) == 0) {
          error(ref.location, ParseErrorCode::kUndefinedRef, ref.id);
        }
      }
      Route& route = draft.route;
      for (const auto& id : route.start_hold_ids) route.hold_ids.push_back(id);
      if (!route.finish_hold_id.empty()) route.hold_ids.push_back(route.finish_hold_id);
      std::sort(route.hold_ids.begin(), route.hold_ids.end());
      route.hold_ids.erase(std::unique(route.hold_ids.begin(), route.hold_ids.end()),
                           route.hold_ids.end());
      document_.routes.push_back(std::move(route));
    }
    std::sort(document_.routes.begin(), document_.routes.end(),
              [](const Route& a, const Route& b) { return a.name < b.name; });
  }

  Document document_;
  std::vector<ParseError> errors_;
  std::optional<SourceLocation> wall_at_;
  std::vector<std::pair<Panel, SourceLocation>> panels_;
  std::vector<std::pair<Hold, SourceLocation>> holds_;
  std::map<std::string, SourceLocation> hold_lines_;
  std::set<std::string> route_names_;
  std::vector<RouteDraft> routes_;
};

// JSON helpers ---------------------------------------------------------------

class JsonReader {
 public:
  explicit JsonReader(std::vector<ParseError>& errors) : errors_(errors) {}

  void fail(const std::string& path, ParseErrorCode code, const std::string& what) {
    errors_.push_back({{1, 1}, code, path + ": " + what});
  }

  const nlohmann::json* field(const nlohmann::json& obj, const std::string& path,
                              const char* key) {
    if (!obj.is_object()) {
      fail(path, ParseErrorCode::kArity, "expected an object");
      return nullptr;
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
      fail(path + "." + key, ParseErrorCode::kArity, "missing field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const nlohmann::json& obj, const std::string& path,
                               const char* key) {
    const auto* value = field(obj, path, key);
    if (value == nullptr) return std::nullopt;
    if (!value->is_number() || !std::isfinite(value->get<double>())) {
      fail(path + "." + key, ParseErrorCode::kNumberFormat, "expected a finite number");
      return std::nullopt;
    }
    return value->get<double>();
  }

  std::optional<std::string> string(const nlohmann::json& obj, const std::string& path,
                                    const char* key) {
    const auto* value = field(obj, path, key);
    if (value == nullptr) return std::nullopt;
    if (!value->is_string()) {
      fail(path + "." + key, ParseErrorCode::kArity, "expected a string");
      return std::nullopt;
    }
    return value->get<std::string>();
  }

  std::optional<std::vector<std::string>> strings(const nlohmann::json& obj,
                                                  const std::string& path, const char* key) {
    const auto* value = field(obj, path, key);
    if (value == nullptr) return std::nullopt;
    if (!value->is_array()) {
      fail(path + "." + key, ParseErrorCode::kArity, "expected an array of strings");
      return std::nullopt;
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value->size(); ++i) {
      const auto& item = (*value)[i];
      if (!item.is_string()) {
        fail(path + "." + key + "[" + std::to_string(i) + "]", ParseErrorCode::kArity,
             "expected a string");
        return std::nullopt;
      }
      out.push_back(item.get<std::string>());
    }
    return out;
  }

 private:
  std::vector<ParseError>& errors_;
};

}  // namespace

std::string_view to_string(ParseErrorCode code) {
  switch (code) {
    case ParseErrorCode::kUnknownKeyword: return "UNKNOWN_KEYWORD";
    case ParseErrorCode::kArity: return "ARITY";
    case ParseErrorCode::kNumberFormat: return "NUMBER_FORMAT";
    case ParseErrorCode::kDuplicateId: return "DUPLICATE_ID";
    case ParseErrorCode::kUndefinedRef: return "UNDEFINED_REF";
    case ParseErrorCode::kRange: return "RANGE";
  }
  return "UNKNOWN";
}

const Route* Document::find_route(std::string_view name) const {
  for (const auto& route : routes) {
    if (route.name == name) return &route;
  }
  return nullptr;
}

ParseResult parse_document(std::string_view text) { return Parser{}.run(text); }

std::string format_number(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::fixed, 3);
  if (ec != std::errc()) return "nan";
  std::string out(buffer, ptr);
  if (out == "-0.000") out = "0.000";
  return out;
}

std::string serialize_document(const Wall& wall, const std::vector<Route>& routes) {
  std::string out;
  out += "WALL " + format_number(wall.width) + " " + format_number(wall.height) + "\n";

  std::vector<Panel> panels = wall.panels;
  std::stable_sort(panels.begin(), panels.end(),
                   [](const Panel& a, const Panel& b) { return a.y0 < b.y0; });
  for (const auto& p : panels) {
    out += "PANEL " + format_number(p.y0) + " " + format_number(p.y1) + " " +
           format_number(p.angle_deg) + "\n";
  }

  std::vector<const Hold*> holds;
  for (const auto& h : wall.holds) holds.push_back(&h);
  std::sort(holds.begin(), holds.end(),
            [](const Hold* a, const Hold* b) { return a->id < b->id; });
  for (const Hold* h : holds) {
    out += "HOLD " + h->id + " " + format_number(h->x) + " " + format_number(h->y) + " " +
           std::string(to_string(h->type)) + " " + format_number(h->difficulty) + " " +
           to_string(h->roles) + " " + format_number(h->orientation_deg) + "\n";
  }

  std::vector<const Route*> sorted;
  for (const auto& r : routes) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const Route* a, const Route* b) { return a->name < b->name; });
  for (const Route* r : sorted) {
    out += "ROUTE " + r->name + "\n";
    std::vector<std::string> starts = r->start_hold_ids;
    std::sort(starts.begin(), starts.end());
    out += "START";
    for (const auto& id : starts) out += " " + id;
    out += "\nFINISH " + r->finish_hold_id + "\n";
    std::vector<std::string> used = r->hold_ids;
    for (const auto& id : r->start_hold_ids) used.push_back(id);
    used.push_back(r->finish_hold_id);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    out += "USE";
    for (const auto& id : used) out += " " + id;
    out += "\n";
    if (r->assigned_grade) out += "GRADE " + r->assigned_grade->to_string() + "\n";
    if (!r->style_tags.empty()) {
      out += "STYLE";
      for (MoveType tag : r->style_tags) out += " " + std::string(to_string(tag));
      out += "\n";
    }
  }
  return out;
}

std::string serialize_document(const Document& document) {
  return serialize_document(document.wall, document.routes);
}

nlohmann::json wall_to_json(const Wall& wall) {
  nlohmann::json panels = nlohmann::json::array();
  for (const auto& p : wall.panels) {
    panels.push_back({{"y0", p.y0}, {"y1", p.y1}, {"angle_deg", p.angle_deg}});
  }
  nlohmann::json holds = nlohmann::json::array();
  for (const auto& h : wall.holds) {
    nlohmann::json roles = nlohmann::json::array();
    if (h.roles.hand) roles.push_back("hand");
    if (h.roles.foot) roles.push_back("foot");
    holds.push_back({{"id", h.id},
                     {"x", h.x},
                     {"y", h.y},
                     {"type", to_string(h.type)},
                     {"difficulty", h.difficulty},
                     {"roles", roles},
                     {"orientation_deg", h.orientation_deg}});
  }
  return {{"width_m", wall.width},
          {"height_m", wall.height},
          {"panels", panels},
          {"holds", holds}};
}

nlohmann::json route_to_json(const Route& route) {
  nlohmann::json tags = nlohmann::json::array();
  for (MoveType t : route.style_tags) tags.push_back(to_string(t));
  return {{"name", route.name},
          {"hold_ids", route.hold_ids},
          {"start_hold_ids", route.start_hold_ids},
          {"finish_hold_id", route.finish_hold_id},
          {"grade", route.assigned_grade ? nlohmann::json(route.assigned_grade->to_string())
                                         : nlohmann::json(nullptr)},
          {"style_tags", tags}};
}

nlohmann::json to_json_object(const Wall& wall, const std::vector<Route>& routes) {
  nlohmann::json out;
  out["wall"] = wall_to_json(wall);
  out["routes"] = nlohmann::json::array();
  for (const auto& r : routes) out["routes"].push_back(route_to_json(r));
  return out;
}

WallFromJson wall_from_json(const nlohmann::json& object, const std::string& path) {
  WallFromJson result;
  JsonReader in(result.errors);
  Wall wall;
  const auto width = in.number(object, path, "width_m");
  const auto height = in.number(object, path, "height_m");
  if (width) wall.width = *width;
  if (height) wall.height = *height;

  if (const auto* panels = in.field(object, path, "panels")) {
    if (!panels->is_array()) {
      in.fail(path + ".panels", ParseErrorCode::kArity, "expected an array");
    } else {
      for (std::size_t i = 0; i < panels->size(); ++i) {
        const std::string p = path + ".panels[" + std::to_string(i) + "]";
        const auto y0 = in.number((*panels)[i], p, "y0");
        const auto y1 = in.number((*panels)[i], p, "y1");
        const auto angle = in.number((*panels)[i], p, "angle_deg");
        if (y0 && y1 && angle) wall.panels.push_back({*y0, *y1, *angle});
      }
    }
  }
  if (const auto* holds = in.field(object, path, "holds")) {
    if (!holds->is_array()) {
      in.fail(path + ".holds", ParseErrorCode::kArity, "expected an array");
    } else {
      for (std::size_t i = 0; i < holds->size(); ++i) {
        const std::string p = path + ".holds[" + std::to_string(i) + "]";
        const auto& h = (*holds)[i];
        Hold hold;
        const auto id = in.string(h, p, "id");
        const auto x = in.number(h, p, "x");
        const auto y = in.number(h, p, "y");
        const auto type = in.string(h, p, "type");
        const auto difficulty = in.number(h, p, "difficulty");
        const auto roles = in.strings(h, p, "roles");
        const auto orientation = in.number(h, p, "orientation_deg");
        if (!id || !x || !y || !type || !difficulty || !roles || !orientation) continue;
        const auto parsed_type = parse_hold_type(*type);
        if (!parsed_type) {
          in.fail(p + ".type", ParseErrorCode::kUnknownKeyword, "unknown hold type '" + *type + "'");
          continue;
        }
        Roles parsed_roles;
        bool roles_ok = true;
        for (const auto& r : *roles) {
          if (r == "hand") {
            parsed_roles.hand = true;
          } else if (r == "foot") {
            parsed_roles.foot = true;
          } else {
            in.fail(p + ".roles", ParseErrorCode::kUnknownKeyword, "unknown role '" + r + "'");
            roles_ok = false;
          }
        }
        if (!roles_ok) continue;
        hold.id = *id;
        hold.x = *x;
        hold.y = *y;
        hold.type = *parsed_type;
        hold.difficulty = *difficulty;
        hold.roles = parsed_roles;
        hold.orientation_deg = *orientation;
        wall.holds.push_back(std::move(hold));
      }
    }
  }
  if (!result.errors.empty()) return result;

  for (const auto& issue : validate_wall(wall).issues) {
    const auto code = issue.code == "DUPLICATE_HOLD_ID" ? ParseErrorCode::kDuplicateId
                                                        : ParseErrorCode::kRange;
    std::string where = path;
    if (issue.hold_id) where += ".holds[id=" + *issue.hold_id + "]";
    in.fail(where, code, issue.message);
  }
  if (result.errors.empty()) result.wall = std::move(wall);
  return result;
}

RouteFromJson route_from_json(const nlohmann::json& object, const Wall& wall,
                              const std::string& path) {
  RouteFromJson result;
  JsonReader in(result.errors);
  Route route;
  const auto name = in.string(object, path, "name");
  const auto holds = in.strings(object, path, "hold_ids");
  const auto starts = in.strings(object, path, "start_hold_ids");
  const auto finish = in.string(object, path, "finish_hold_id");
  if (const auto* grade = in.field(object, path, "grade")) {
    if (grade->is_string()) {
      route.assigned_grade = GradeLabel::parse(grade->get<std::string>());
      if (!route.assigned_grade) {
        in.fail(path + ".grade", ParseErrorCode::kRange, "not a grade between 5.1 and 5.15d");
      }
    } else if (!grade->is_null()) {
      in.fail(path + ".grade", ParseErrorCode::kArity, "expected a string or null");
    }
  }
  if (object.is_object() && object.contains("style_tags")) {
    if (const auto tags = in.strings(object, path, "style_tags")) {
      for (const auto& tag : *tags) {
        if (const auto type = parse_move_type(tag)) {
          route.style_tags.push_back(*type);
        } else {
          in.fail(path + ".style_tags", ParseErrorCode::kUnknownKeyword,
                  "unknown move type '" + tag + "'");
        }
      }
    }
  }
  if (!name || !holds || !starts || !finish) return result;
  route.name = *name;
  route.hold_ids = *holds;
  route.start_hold_ids = *starts;
  route.finish_hold_id = *finish;
  if (route.name.empty() || route.name.find_first_of(" \t\n#") != std::string::npos) {
    in.fail(path + ".name", ParseErrorCode::kRange, "route name must be a single token");
  }
  auto check_ref = [&](const std::string& id, const std::string& where) {
    if (wall.find(id) == nullptr) {
      in.fail(where, ParseErrorCode::kUndefinedRef, "undefined hold '" + id + "'");
    }
  };
  for (std::size_t i = 0; i < route.hold_ids.size(); ++i) {
    check_ref(route.hold_ids[i], path + ".hold_ids[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < route.start_hold_ids.size(); ++i) {
    check_ref(route.start_hold_ids[i], path + ".start_hold_ids[" + std::to_string(i) + "]");
  }
  check_ref(route.finish_hold_id, path + ".finish_hold_id");
  if (route.start_hold_ids.empty() || route.start_hold_ids.size() > 2) {
    in.fail(path + ".start_hold_ids", ParseErrorCode::kArity, "expected one or two ids");
  }
  if (result.errors.empty()) result.route = std::move(route);
  return result;
}

ParseResult from_json_object(const nlohmann::json& object) {
  ParseResult result;
  if (!object.is_object()) {
    result.errors.push_back({{1, 1}, ParseErrorCode::kArity, "$: expected an object"});
    return result;
  }
  if (!object.contains("wall")) {
    result.errors.push_back({{1, 1}, ParseErrorCode::kArity, "$.wall: missing field"});
    return result;
  }
  auto wall = wall_from_json(object["wall"], "$.wall");
  result.errors = std::move(wall.errors);
  Document document;
  if (wall.wall) document.wall = std::move(*wall.wall);
  if (!object.contains("routes") || !object["routes"].is_array()) {
    result.errors.push_back({{1, 1}, ParseErrorCode::kArity, "$.routes: expected an array"});
    return result;
  }
  std::set<std::string> names;
  const auto& routes = object["routes"];
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::string path = "$.routes[" + std::to_string(i) + "]";
    auto route = route_from_json(routes[i], document.wall, path);
    for (auto& e : route.errors) result.errors.push_back(std::move(e));
    if (!route.route) continue;
    if (!names.insert(route.route->name).second) {
      result.errors.push_back({{1, 1}, ParseErrorCode::kDuplicateId,
                               path + ".name: duplicate route '" + route.route->name + "'"});
    }
    document.routes.push_back(std::move(*route.route));
  }
  if (result.errors.empty()) result.document = std::move(document);
  return result;
}

}  // namespace crux
