#include <doctest.h>

#include "crux/format.hpp"
#include "crux/rng.hpp"
#include "support.hpp"

using namespace crux;

TEST_SUITE("format") {
  TEST_CASE("fixtures are canonical and reach a fixpoint") {
    const auto files = test::all_fixture_documents();
    CHECK(files.size() >= 20);
    for (const auto& path : files) {
      const std::string text = test::read_text(path);
      const auto parsed = parse_document(text);
      REQUIRE_MESSAGE(parsed.ok(), path.string());
      const std::string once = serialize_document(*parsed.document);
      CHECK_MESSAGE(once == text, path.string());
      const auto again = parse_document(once);
      REQUIRE(again.ok());
      CHECK(serialize_document(*again.document) == once);
    }
  }

  TEST_CASE("serializer orders records and trims numbers") {
    const std::string messy =
        "# comment line\n"
        "ROUTE r   # trailing comment\n"
        "FINISH b\r\n"
        "USE a b\n"
        "START a\n"
        "GRADE 5.10b\n"
        "STYLE mantle reach\n"
        "HOLD b 1 2.0004 crimp .5 hand 10\n"
        "HOLD a 1.0 1 jug 0 hand|foot 0\n"
        "PANEL 2 4 120\n"
        "PANEL 0 2 90\n"
        "WALL 3 4\n";
    const auto parsed = parse_document(messy);
    REQUIRE(parsed.ok());
    CHECK(serialize_document(*parsed.document) ==
          "WALL 3.000 4.000\n"
          "PANEL 0.000 2.000 90.000\n"
          "PANEL 2.000 4.000 120.000\n"
          "HOLD a 1.000 1.000 jug 0.000 hand|foot 0.000\n"
          "HOLD b 1.000 2.000 crimp 0.500 hand 10.000\n"
          "ROUTE r\n"
          "START a\n"
          "FINISH b\n"
          "USE a b\n"
          "GRADE 5.10b\n"
          "STYLE mantle reach\n");
  }

  TEST_CASE("format_number is fixed point without negative zero") {
    CHECK(format_number(1.0) == "1.000");
    CHECK(format_number(-0.0) == "0.000");
    CHECK(format_number(-0.0004) == "0.000");
    CHECK(format_number(2.0005) == "2.001");
    CHECK(format_number(-1.25) == "-1.250");
  }

  TEST_CASE("every error is collected with its position") {
    const std::string bad =
        "WALL 3 4.5\n"
        "PANEL 0 4.5 90\n"
        "HOLD a 1 x jug 0.1 hand 0\n"
        "HOLD a 1 1 jug 0.1 hand 0\n"
        "FLOOR 1\n"
        "HOLD b 1 2 jug 1.5 hand 0\n"
        "ROUTE r\n"
        "START a\n"
        "FINISH zz\n"
        "USE a b\n";
    const auto parsed = parse_document(bad);
    CHECK(!parsed.ok());
    REQUIRE(parsed.errors.size() >= 4);
    auto find = [&](ParseErrorCode code) -> const ParseError* {
      for (const auto& e : parsed.errors) {
        if (e.code == code) return &e;
      }
      return nullptr;
    };
    const auto* number = find(ParseErrorCode::kNumberFormat);
    REQUIRE(number);
    CHECK(number->location.line == 3);
    CHECK(number->location.column == 10);
    const auto* keyword = find(ParseErrorCode::kUnknownKeyword);
    REQUIRE(keyword);
    CHECK(keyword->location.line == 5);
    CHECK(keyword->location.column == 1);
    CHECK(find(ParseErrorCode::kRange));
    CHECK(find(ParseErrorCode::kUndefinedRef));
    for (std::size_t i = 1; i < parsed.errors.size(); ++i) {
      CHECK(parsed.errors[i - 1].location.line <= parsed.errors[i].location.line);
    }
  }

  TEST_CASE("documents without a wall or panel are rejected") {
    CHECK(!parse_document("").ok());
    CHECK(!parse_document("WALL 3 4\n").ok());
    CHECK(!parse_document("WALL 3 4\nWALL 3 4\nPANEL 0 4 90\n").ok());
    CHECK(!parse_document("WALL 3 4 5\nPANEL 0 4 90\n").ok());
    CHECK(parse_document("WALL 3 4\nPANEL 0 4 90\n").ok());
  }

  TEST_CASE("JSON objects mirror the text format") {
    for (const auto& path : test::all_fixture_documents()) {
      const auto doc = *parse_document(test::read_text(path)).document;
      const auto object = to_json_object(doc.wall, doc.routes);
      const auto back = from_json_object(object);
      REQUIRE_MESSAGE(back.ok(), path.string());
      CHECK(back.document->wall == doc.wall);
      CHECK(back.document->routes == doc.routes);
    }
  }

  TEST_CASE("JSON errors carry the offending path") {
    const auto doc = test::load("trap.crux");
    auto object = to_json_object(doc.wall, doc.routes);
    object["wall"]["holds"][0]["x"] = "left";
    object["routes"][0]["finish_hold_id"] = "nowhere";
    const auto back = from_json_object(object);
    CHECK(!back.ok());
    bool saw_x = false;
    bool saw_finish = false;
    for (const auto& e : back.errors) {
      saw_x = saw_x || e.message.find("$.wall.holds[0].x") == 0;
      saw_finish = saw_finish || e.message.find("$.routes[0]") == 0;
    }
    CHECK(saw_x);
    CHECK(saw_finish);
  }

  TEST_CASE("mutated documents give a document or errors") {
    const std::string base = test::read_text(test::fixture("ladder.crux"));
    Rng rng(99);
    for (int i = 0; i < 2000; ++i) {
      std::string text = base;
      const int edits = 1 + static_cast<int>(rng.below(4));
      for (int e = 0; e < edits; ++e) {
        const auto at = rng.below(text.size());
        switch (rng.below(3)) {
          case 0: text[at] = static_cast<char>(rng.below(256)); break;
          case 1: text.erase(at, 1 + rng.below(8)); break;
          default: text.insert(at, 1, " \n#-.09e"[rng.below(8)]); break;
        }
      }
      const auto parsed = parse_document(text);
      CHECK(parsed.ok() != !parsed.errors.empty());
      if (parsed.ok()) {
        const std::string once = serialize_document(*parsed.document);
        const auto again = parse_document(once);
        REQUIRE(again.ok());
        CHECK(serialize_document(*again.document) == once);
      }
    }
  }
}
