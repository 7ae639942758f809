#include <doctest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <unistd.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "crux/generator.hpp"
#include "crux/planner.hpp"
#include "crux/service/corpus_store.hpp"
#include "crux/service/engine.hpp"
#include "crux/service/server.hpp"
#include "support.hpp"

using namespace crux;
using namespace crux::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Copy of the bundled corpus in a fresh directory, removed on scope exit.
struct TempCorpus {
  fs::path dir;

  TempCorpus() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("crux-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::copy(test::fixture("corpus"), dir, fs::copy_options::recursive);
  }
  ~TempCorpus() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

ServiceConfig small_config() {
  ServiceConfig c;
  c.population.size = 300;
  c.generation.loop_population = 40;
  c.generation.final_population = 80;
  c.generation.max_iterations = 5;
  return c;
}

json request_for(const std::string& fixture) {
  const auto doc = test::load(fixture);
  return {{"wall", wall_to_json(doc.wall)}, {"route", route_to_json(doc.routes[0])}};
}

json corpus_route(const std::string& name) {
  for (const auto& r : test::corpus_routes()) {
    if (r.route.name == name) return route_to_json(r.route);
  }
  FAIL("no corpus route " << name);
  return {};
}

json corpus_wall(const std::string& name) {
  for (const auto& r : test::corpus_routes()) {
    if (r.route.name == name) return wall_to_json(r.wall);
  }
  FAIL("no corpus route " << name);
  return {};
}

json wait_for_job(Engine& engine, const std::string& id, const std::string& until_not) {
  for (int i = 0; i < 6000; ++i) {
    const auto r = engine.job(id);
    if (r.body["status"] != until_not && r.body["status"] != "queued") return r.body;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  FAIL("job " << id << " did not leave " << until_not);
  return {};
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("beta agrees with the planner for the representative climber") {
    Engine engine(small_config(), nullptr);
    const auto doc = test::load("trap.crux");
    CHECK(engine.representative() == representative_climber(engine.population()));
    const auto r = engine.beta(request_for("trap.crux"));
    REQUIRE(r.status == 200);
    const Beta b = plan_beta(doc.routes[0], doc.wall, engine.representative());
    CHECK(r.body["route"] == "trap");
    CHECK(r.body["beta"]["total_cost"].get<double>() == doctest::Approx(b.total_cost));
    CHECK(r.body["beta"]["moves"].size() == b.moves.size());
    CHECK(r.body["beta"]["states"].size() == b.states.size());
    CHECK(r.body["success_probability"].get<double>() ==
          doctest::Approx(beta_success_probability(b, doc.wall, engine.representative())));
    CHECK(render(r.body).back() == '\n');
  }

  TEST_CASE("trap beta matches the golden file and the exhaustive oracle") {
    Engine engine(ServiceConfig{}, nullptr);
    const auto r = engine.beta(request_for("trap.crux"));
    REQUIRE(r.status == 200);
    CHECK(render(r.body) == test::read_text(test::fixture("golden/trap_beta.json")));
    const auto doc = test::load("trap.crux");
    const Beta brute = brute_force_beta(doc.routes[0], doc.wall, engine.representative(), 0.1,
                                        kBruteForceMaxMoves);
    CHECK(r.body["beta"]["total_cost"].get<double>() ==
          doctest::Approx(brute.total_cost).epsilon(1e-12));
    for (const auto& m : r.body["beta"]["moves"]) CHECK(m["to"] != "D");
  }

  TEST_CASE("beta with an explicit climber") {
    Engine engine(small_config(), nullptr);
    auto req = request_for("mantle.crux");
    req["climber"] = {{"ability", 0.0},
                      {"exposure",
                       {{"reach", 0.05}, {"cross", 0.05}, {"match", 0.05}, {"high_step", 0.05},
                        {"mantle", 0.7}, {"dyno", 0.05}, {"foot_swap", 0.05}}}};
    const auto r = engine.beta(req);
    REQUIRE(r.status == 200);
    bool mantle = false;
    for (const auto& m : r.body["beta"]["moves"]) mantle = mantle || m["move_type"] == "mantle";
    CHECK(mantle);
    req["climber"] = {{"arm_span", -1.0}};
    CHECK(engine.beta(req).status == 422);
  }

  TEST_CASE("request errors") {
    Engine engine(small_config(), nullptr);
    auto no_wall = request_for("trap.crux");
    no_wall.erase("wall");
    const auto r = engine.beta(no_wall);
    CHECK(r.status == 422);
    CHECK(r.body["code"] == "NO_WALL");
    CHECK(engine.beta(json::array()).status == 422);
    CHECK(engine.beta(json{{"wall", request_for("trap.crux")["wall"]}}).status == 422);

    auto bad_hold = request_for("trap.crux");
    bad_hold["route"]["hold_ids"].push_back("nowhere");
    const auto v = engine.beta(bad_hold);
    CHECK(v.status == 422);
    CHECK(v.body["code"] == "VALIDATION");
    CHECK(v.body.contains("issues"));

    auto bad_wall = request_for("trap.crux");
    bad_wall["wall"]["holds"][0]["x"] = "left";
    const auto w = engine.beta(bad_wall);
    CHECK(w.status == 422);
    CHECK(w.body["issues"][0]["message"].is_string());
  }

  TEST_CASE("unreachable finish is a conflict") {
    Engine engine(small_config(), nullptr);
    auto req = request_for("two_hold.crux");
    req["wall"]["holds"][0]["y"] = 4.4;
    const auto r = engine.beta(req);
    CHECK(r.status == 409);
    CHECK(r.body["code"] == "UNREACHABLE");
    CHECK(engine.simulate(req).status == 409);
  }

  TEST_CASE("grade needs a corpus") {
    Engine engine(small_config(), nullptr);
    const auto r = engine.grade(request_for("trap.crux"));
    CHECK(r.status == 409);
    CHECK(r.body["code"] == "EMPTY_CORPUS");
  }

  TEST_CASE("grade against the corpus") {
    TempCorpus tmp;
    Engine engine(small_config(), std::make_shared<CorpusStore>(tmp.dir));
    // A locked corpus route by name, wall taken from the corpus.
    const auto locked = engine.grade({{"route", corpus_route("c10a_03")}});
    CHECK(locked.status == 409);
    CHECK(locked.body["code"] == "LOCKED");

    auto fresh = corpus_route("c10a_03");
    fresh["name"] = "fresh";
    const json req = {{"route", fresh}, {"wall", corpus_wall("c10a_03")}};
    const auto r = engine.grade(req);
    REQUIRE(r.status == 200);
    CHECK(r.body["grade"] == "5.10a");
    CHECK(r.body["tnorm"] == "product");
    CHECK(r.body["seed"] == 11);
    CHECK(r.body["scores"].size() == 3);
    // Same request, same body.
    CHECK(engine.grade(req).body == r.body);

    auto other = req;
    other["tnorm"] = "minimum";
    other["seed"] = 3;
    const auto m = engine.grade(other);
    REQUIRE(m.status == 200);
    CHECK(m.body["tnorm"] == "minimum");
    CHECK(m.body["seed"] == 3);

    other["tnorm"] = "hamacher";
    CHECK(engine.grade(other).status == 422);
    other["tnorm"] = "product";
    other["threshold"] = 1.5;
    CHECK(engine.grade(other).status == 422);
  }

  TEST_CASE("vary and simulate") {
    Engine engine(small_config(), nullptr);
    auto req = request_for("ladder.crux");
    CHECK(engine.vary(req).status == 422);
    req["intensity"] = 0.0;
    const auto same = engine.vary(req);
    REQUIRE(same.status == 200);
    CHECK(same.body["route"] == req["route"]);
    CHECK(same.body["wall"] == req["wall"]);
    req["intensity"] = 2.0;
    CHECK(engine.vary(req).status == 422);
    req["intensity"] = 0.4;
    req["seed"] = 5;
    const auto varied = engine.vary(req);
    REQUIRE(varied.status == 200);
    CHECK(engine.vary(req).body == varied.body);
    CHECK(Engine::parse(varied.body["document"].get<std::string>()).status == 200);

    auto sim = request_for("trap.crux");
    sim["trials"] = 4000;
    sim["seed"] = 2;
    const auto s = engine.simulate(sim);
    REQUIRE(s.status == 200);
    const double p = s.body["success_probability"];
    const double f = s.body["frequency"];
    CHECK(std::abs(f - p) <= 4.0 * std::sqrt(p * (1 - p) / 4000) + 1e-9);
    int falls = 0;
    for (const auto& n : s.body["falls_by_move"]) falls += n.get<int>();
    CHECK(falls + s.body["successes"].get<int>() == 4000);
    sim["trials"] = 0;
    CHECK(engine.simulate(sim).status == 422);
  }

  TEST_CASE("parse") {
    const auto text = test::read_text(test::fixture("trap.crux"));
    const auto ok = Engine::parse(text);
    REQUIRE(ok.status == 200);
    CHECK(ok.body["document"] == text);
    CHECK(ok.body["routes"].size() == 1);
    const auto bad = Engine::parse("WALL 3 4.5\nPANEL 0 4.5 90\nHOLD a 1 x jug 0.1 hand 0\n");
    CHECK(bad.status == 422);
    CHECK(bad.body["code"] == "VALIDATION");
    CHECK(bad.body["issues"][0]["line"] == 3);
  }
}

TEST_SUITE("corpus") {
  TEST_CASE("store loads, writes atomically and reloads") {
    TempCorpus tmp;
    auto store = std::make_shared<CorpusStore>(tmp.dir);
    const auto first = store->snapshot();
    CHECK(first->routes.size() == 30);
    CHECK(!first->wall);
    REQUIRE(first->find("c08_01") != nullptr);
    CHECK(first->find("c08_01")->route.grade_locked);
    CHECK(first->find("nope") == nullptr);

    const auto doc = test::load("desk_wall.crux");
    store->put_wall(doc.wall);
    const auto second = store->snapshot();
    CHECK(second->revision > first->revision);
    REQUIRE(second->wall);
    CHECK(*second->wall == doc.wall);
    // The earlier snapshot is untouched.
    CHECK(!first->wall);
    CHECK(CorpusStore(tmp.dir).snapshot()->wall == doc.wall);

    const auto updated = store->record_ascent("c08_01", 2, 50);
    REQUIRE(updated);
    CHECK(updated->exposure_count == 52);
    CHECK(!store->record_ascent("nope", 1, 50));
    CHECK(CorpusStore(tmp.dir).snapshot()->find("c08_01")->route.exposure_count == 52);

    for (const auto& entry : fs::directory_iterator(tmp.dir)) {
      const auto name = entry.path().filename().string();
      CHECK_MESSAGE(name.find(".tmp") == std::string::npos, name);
    }
  }

  TEST_CASE("atomic_write replaces the content") {
    TempCorpus tmp;
    const auto path = tmp.dir / "x.txt";
    atomic_write(path, "one");
    atomic_write(path, "two");
    CHECK(test::read_text(path) == "two");
  }

  TEST_CASE("ascents lock a route and grading then refuses it") {
    TempCorpus tmp;
    auto meta = json::parse(test::read_text(tmp.dir / "meta.json"));
    meta["routes"]["c11a_04"] = {{"exposure_count", 48}, {"grade_locked", false}};
    std::ofstream(tmp.dir / "meta.json") << meta.dump(2);

    Engine engine(small_config(), std::make_shared<CorpusStore>(tmp.dir));
    const json req = {{"route", corpus_route("c11a_04")}};
    CHECK(engine.grade(req).status == 200);

    auto r = engine.ascents({{"route_name", "c11a_04"}});
    REQUIRE(r.status == 200);
    CHECK(r.body["exposure_count"] == 49);
    CHECK(r.body["grade_locked"] == false);
    r = engine.ascents({{"route_name", "c11a_04"}, {"count", 1}});
    CHECK(r.body["exposure_count"] == 50);
    CHECK(r.body["grade_locked"] == true);
    const auto locked = engine.grade(req);
    CHECK(locked.status == 409);
    CHECK(locked.body["code"] == "LOCKED");

    CHECK(engine.ascents({{"route_name", "missing"}}).status == 404);
    CHECK(engine.ascents({{"route_name", "c11a_04"}, {"count", 0}}).status == 422);
    CHECK(engine.ascents(json::object()).status == 422);
  }

  TEST_CASE("wall endpoints") {
    TempCorpus tmp;
    Engine engine(small_config(), std::make_shared<CorpusStore>(tmp.dir));
    CHECK(engine.get_wall().status == 404);
    const auto doc = test::load("trap.crux");
    const auto put = engine.put_wall({{"wall", wall_to_json(doc.wall)}});
    REQUIRE(put.status == 200);
    const auto got = engine.get_wall();
    REQUIRE(got.status == 200);
    CHECK(got.body["wall"] == wall_to_json(doc.wall));
    // Routes without a wall now use the working wall.
    CHECK(engine.beta({{"route", route_to_json(doc.routes[0])}}).status == 200);

    auto broken = wall_to_json(doc.wall);
    broken["holds"][0]["x"] = 99.0;
    CHECK(engine.put_wall({{"wall", broken}}).status == 422);
  }
}

TEST_SUITE("http") {
  TEST_CASE("server and jobs") {
    TempCorpus tmp;
    Engine engine(small_config(), std::make_shared<CorpusStore>(tmp.dir));
    HttpServer server(engine);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread loop([&] { server.listen(); });
    server.wait_until_ready();
    httplib::Client cli("127.0.0.1", port);

    SUBCASE("handlers render identically over HTTP") {
      const auto req = request_for("trap.crux");
      const auto res = cli.Post("/api/beta", req.dump(), "application/json");
      REQUIRE(res);
      CHECK(res->status == 200);
      CHECK(res->body == render(engine.beta(req).body));

      const auto bad = cli.Post("/api/beta", "{not json", "application/json");
      REQUIRE(bad);
      CHECK(bad->status == 400);
      CHECK(json::parse(bad->body)["code"] == "MALFORMED_JSON");

      const auto wall = cli.Get("/api/wall");
      REQUIRE(wall);
      CHECK(wall->status == 404);
      const auto put = cli.Put("/api/wall", json{{"wall", req["wall"]}}.dump(), "application/json");
      REQUIRE(put);
      CHECK(put->status == 200);
      CHECK(cli.Get("/api/wall")->status == 200);

      const auto locked = cli.Post("/api/grade", json{{"route", corpus_route("c08_02")}}.dump(),
                                   "application/json");
      REQUIRE(locked);
      CHECK(locked->status == 409);

      auto unreachable = request_for("two_hold.crux");
      unreachable["wall"]["holds"][0]["y"] = 4.4;
      CHECK(cli.Post("/api/beta", unreachable.dump(), "application/json")->status == 409);
      CHECK(cli.Post("/api/ascents", json{{"route_name", "nope"}}.dump(), "application/json")
                ->status == 404);
      CHECK(cli.Get("/api/jobs/job-999")->status == 404);
      CHECK(cli.Delete("/api/jobs/job-999")->status == 404);
    }

    SUBCASE("a generation job runs to completion") {
      const json req = {{"wall", wall_to_json(test::load("desk_wall.crux").wall)},
                        {"max_iterations", 4},
                        {"seed", 3}};
      const auto res = cli.Post("/api/generate", req.dump(), "application/json");
      REQUIRE(res);
      CHECK(res->status == 202);
      const std::string id = json::parse(res->body)["job_id"];
      const auto done = wait_for_job(engine, id, "running");
      CHECK(done["status"] == "done");
      CHECK(done["progress"]["iteration"] == 4);
      REQUIRE(done.contains("result"));
      CHECK(done["result"]["report"]["iterations"] == 4);
      // The synchronous path gives the same route.
      CHECK(engine.generate(req).body["route"] == done["result"]["route"]);
      const auto over_http = cli.Get("/api/jobs/" + id);
      REQUIRE(over_http);
      CHECK(json::parse(over_http->body)["status"] == "done");
    }

    SUBCASE("a long job can be canceled") {
      const json req = {{"wall", wall_to_json(test::load("desk_wall.crux").wall)},
                        {"max_iterations", 100000},
                        {"seed", 4}};
      const auto submitted = engine.submit_generate(req);
      REQUIRE(submitted.status == 202);
      const std::string id = submitted.body["job_id"];
      for (int i = 0; i < 3000; ++i) {
        if (engine.job(id).body["progress"]["iteration"].get<int>() > 0) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
      const auto del = cli.Delete("/api/jobs/" + id);
      REQUIRE(del);
      CHECK(del->status == 200);
      const auto end = wait_for_job(engine, id, "running");
      CHECK(end["status"] == "canceled");
      CHECK(end["progress"]["iteration"].get<int>() < 100000);
    }

    SUBCASE("bad generation requests fail the job") {
      const auto submitted = engine.submit_generate({{"max_iterations", -1}});
      REQUIRE(submitted.status == 202);
      const auto end = wait_for_job(engine, submitted.body["job_id"], "running");
      CHECK(end["status"] == "failed");
      CHECK(end["result"]["code"] == "INVALID_ARGUMENT");
      CHECK(engine.generate({{"max_iterations", -1}}).status == 422);
    }

    server.stop();
    loop.join();
  }
}
