#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/model.hpp"

namespace crux {

// Line-based route document (.crux):
//
//   # comment
//   WALL <width> <height>
//   PANEL <y0> <y1> <angle>
//   HOLD <id> <x> <y> <type> <difficulty> <roles> <orientation>
//   ROUTE <name>
//   START <id> [<id>]
//   FINISH <id>
//   USE <id>...
//   GRADE <label>
//   STYLE <tag>...
//
// START, FINISH, USE, GRADE and STYLE attach to the most recent ROUTE.

struct SourceLocation {
  int line = 1;
  int column = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class ParseErrorCode {
  kUnknownKeyword,
  kArity,
  kNumberFormat,
  kDuplicateId,
  kUndefinedRef,
  kRange,
};

std::string_view to_string(ParseErrorCode code);

struct ParseError {
  SourceLocation location;
  ParseErrorCode code;
  std::string message;
};

struct Document {
  Wall wall;
  std::vector<Route> routes;

  const Route* find_route(std::string_view name) const;
};

struct ParseResult {
  std::optional<Document> document;
  std::vector<ParseError> errors;

  bool ok() const { return document.has_value(); }
};

/// Collects every error in the text rather than stopping at the first.
ParseResult parse_document(std::string_view text);

/// Canonical text: WALL, PANELs by y0, HOLDs by id, ROUTEs by name; numbers
/// with three decimals; single spaces; trailing newline.
std::string serialize_document(const Wall& wall, const std::vector<Route>& routes);
std::string serialize_document(const Document& document);

/// Fixed-point rendering used by the serializer ("1.000", never "-0.000").
std::string format_number(double value);

nlohmann::json wall_to_json(const Wall& wall);
nlohmann::json route_to_json(const Route& route);
nlohmann::json to_json_object(const Wall& wall, const std::vector<Route>& routes);

/// Structural and semantic checks; error messages start with the JSON path.
ParseResult from_json_object(const nlohmann::json& object);

struct WallFromJson {
  std::optional<Wall> wall;
  std::vector<ParseError> errors;
};
WallFromJson wall_from_json(const nlohmann::json& object, const std::string& path = "$");

struct RouteFromJson {
  std::optional<Route> route;
  std::vector<ParseError> errors;
};
/// Checks the route's hold references against `wall`.
RouteFromJson route_from_json(const nlohmann::json& object, const Wall& wall,
                              const std::string& path = "$");

}  // namespace crux
