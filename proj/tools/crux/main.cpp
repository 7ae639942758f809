#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crux/format.hpp"
#include "crux/service/config.hpp"
#include "crux/service/corpus_store.hpp"
#include "crux/service/engine.hpp"
#include "crux/service/json_io.hpp"
#include "crux/service/server.hpp"

namespace {

using crux::service::Engine;
using crux::service::Response;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;
constexpr int kExitUsage = 64;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config;
  bool json = false;
};

int exit_code(const Response& r) {
  if (r.status >= 200 && r.status < 300) return kExitOk;
  if (r.status >= 400 && r.status < 500) return kExitValidation;
  return kExitInternal;
}

void print_error(const Response& r) {
  std::cerr << "error: " << r.body.value("code", "ERROR") << ": " << r.body.value("message", "")
            << "\n";
  if (r.body.contains("issues")) {
    for (const auto& i : r.body.at("issues")) {
      if (i.contains("line")) {
        std::cerr << "  " << i.at("line") << ":" << i.at("column") << ": "
                  << i.at("code").get<std::string>() << ": " << i.at("message").get<std::string>()
                  << "\n";
      } else {
        std::cerr << "  " << i.at("code").get<std::string>() << ": "
                  << i.at("message").get<std::string>() << "\n";
      }
    }
  }
}

// Non-2xx bodies always go out as JSON on stdout with --json, else to stderr.
int finish(const Globals& g, const Response& r) {
  if (g.json) {
    std::cout << crux::service::render(r.body);
  } else if (exit_code(r) != kExitOk) {
    print_error(r);
  }
  return exit_code(r);
}

// Builds {wall, route} from a .crux file, picking the named route or the
// first one. Returns an error response when the file does not qualify.
std::variant<json, Response> load_request(const std::string& path,
                                          const std::optional<std::string>& route_name) {
  const auto parsed = Engine::parse(crux::service::read_file(path));
  if (parsed.status != 200) return parsed;
  const auto& routes = parsed.body.at("routes");
  if (routes.empty()) {
    return crux::service::error_response(422, "VALIDATION", path + " has no ROUTE");
  }
  const json* chosen = &routes.front();
  if (route_name) {
    chosen = nullptr;
    for (const auto& r : routes) {
      if (r.at("name") == *route_name) chosen = &r;
    }
    if (chosen == nullptr) {
      return crux::service::error_response(404, "NOT_FOUND", "no route named " + *route_name);
    }
  }
  return json{{"wall", parsed.body.at("wall")}, {"route", *chosen}};
}

std::shared_ptr<crux::service::CorpusStore> open_store(const std::string& dir) {
  if (dir.empty()) return nullptr;
  return std::make_shared<crux::service::CorpusStore>(dir);
}

void print_beta(const json& body) {
  const auto& moves = body.at("beta").at("moves");
  std::printf("route %s: %zu moves, cost %.4f, success %.4f\n",
              body.at("route").get<std::string>().c_str(), moves.size(),
              body.at("beta").at("total_cost").get<double>(),
              body.at("success_probability").get<double>());
  int i = 1;
  for (const auto& m : moves) {
    const auto hold = [](const json& h) { return h.is_null() ? std::string("FREE") : h.get<std::string>(); };
    std::printf("%3d  %s  %-5s -> %-5s  %-9s  %.3f m\n", i++, m.at("limb").get<std::string>().c_str(),
                hold(m.at("from")).c_str(), hold(m.at("to")).c_str(),
                m.at("move_type").get<std::string>().c_str(), m.at("distance").get<double>());
  }
}

void print_grade(const json& body) {
  std::printf("route %s: %s (%s)\n", body.at("route").get<std::string>().c_str(),
              body.at("grade").get<std::string>().c_str(),
              body.at("tnorm").get<std::string>().c_str());
  std::printf("  %-7s %10s %10s %10s %6s %6s\n", "grade", "P(R|S)", "P(S|R)", "conj", "qual",
              "asc");
  for (const auto& s : body.at("scores")) {
    std::string flags;
    for (const auto& f : s.at("flags")) flags += " " + f.get<std::string>();
    std::printf("  %-7s %10.4f %10.4f %10.4f %6d %6d%s\n", s.at("grade").get<std::string>().c_str(),
                s.at("p_route_given_set").get<double>(), s.at("p_set_given_route").get<double>(),
                s.at("conjunction").get<double>(), s.at("qualifiers").get<int>(),
                s.at("ascenders").get<int>(), flags.c_str());
  }
}

bool write_text(const std::string& path, const std::string& text) {
  try {
    crux::service::atomic_write(path, text);
    return true;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crux: climbing route engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every stochastic step");
  app.add_option("--config", g.config, "JSON service configuration")->check(CLI::ExistingFile);
  app.add_flag("--json", g.json, "Write the JSON response to stdout");

  std::string file;
  std::optional<std::string> route_name;
  std::string corpus;
  std::optional<std::string> climber_file;
  std::optional<std::string> out;

  auto* parse = app.add_subcommand("parse", "Validate a .crux document and print it canonically");
  parse->add_option("file", file, "Route document")->required()->check(CLI::ExistingFile);

  auto* beta = app.add_subcommand("beta", "Plan the least-resistance beta");
  beta->add_option("file", file, "Route document")->required()->check(CLI::ExistingFile);
  beta->add_option("--route", route_name, "Route name (default: first route)");
  beta->add_option("--climber", climber_file, "Climber profile JSON")->check(CLI::ExistingFile);

  std::optional<std::string> tnorm;
  std::optional<double> threshold;
  auto* grade = app.add_subcommand("grade", "Assign a grade against a locked corpus");
  grade->add_option("file", file, "Route document")->required()->check(CLI::ExistingFile);
  grade->add_option("--route", route_name, "Route name (default: first route)");
  grade->add_option("--corpus", corpus, "Corpus directory");
  grade->add_option("--tnorm", tnorm, "product | minimum | lukasiewicz");
  grade->add_option("--threshold", threshold, "High-probability threshold");

  std::string wall_file;
  std::optional<std::string> target_grade;
  std::optional<std::string> target_style;
  std::optional<int> iterations;
  std::optional<int> hold_budget;
  std::optional<std::string> seed_route;
  auto* generate = app.add_subcommand("generate", "Search hold placements for a target grade");
  generate->add_option("--wall", wall_file, "Wall document")->required()->check(CLI::ExistingFile);
  generate->add_option("--target-grade", target_grade, "Target grade label");
  generate->add_option("--target-style", target_style, "Target style JSON")
      ->check(CLI::ExistingFile);
  generate->add_option("--iterations", iterations, "Annealing iterations");
  generate->add_option("--hold-budget", hold_budget, "Maximum holds");
  generate->add_option("--seed-route", seed_route, "Route to start from (in the wall document)");
  generate->add_option("--corpus", corpus, "Corpus directory");
  generate->add_option("--out", out, "Write the generated .crux document here");

  double intensity = 0.0;
  auto* vary = app.add_subcommand("vary", "Perturb a route along a Lorenz trajectory");
  vary->add_option("file", file, "Route document")->required()->check(CLI::ExistingFile);
  vary->add_option("--route", route_name, "Route name (default: first route)");
  vary->add_option("--intensity", intensity, "Variation intensity in [0,1]")->required();
  vary->add_option("--climber", climber_file, "Climber profile JSON")->check(CLI::ExistingFile);
  vary->add_option("--out", out, "Write the varied .crux document here");

  int trials = 1000;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo ascents against the planned beta");
  simulate->add_option("file", file, "Route document")->required()->check(CLI::ExistingFile);
  simulate->add_option("--route", route_name, "Route name (default: first route)");
  simulate->add_option("--trials", trials, "Number of ascents");
  simulate->add_option("--climber", climber_file, "Climber profile JSON")
      ->check(CLI::ExistingFile);

  std::optional<int> port;
  std::optional<std::string> ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--corpus", corpus, "Corpus directory");
  serve->add_option("--ui", ui_dir, "Static UI bundle directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    auto config = crux::service::load_config(g.config);
    if (!corpus.empty()) config.corpus_path = corpus;

    if (parse->parsed()) {
      const Response r = Engine::parse(crux::service::read_file(file));
      if (!g.json && r.status == 200) std::cout << r.body.at("document").get<std::string>();
      return finish(g, r);
    }

    auto with_climber = [&](json& request) -> std::optional<Response> {
      if (!climber_file) return std::nullopt;
      try {
        request["climber"] = json::parse(crux::service::read_file(*climber_file));
      } catch (const json::parse_error& e) {
        return crux::service::error_response(422, "VALIDATION", *climber_file + ": " + e.what());
      }
      return std::nullopt;
    };

    if (beta->parsed() || vary->parsed() || simulate->parsed()) {
      auto loaded = load_request(file, route_name);
      if (auto* r = std::get_if<Response>(&loaded)) return finish(g, *r);
      json request = std::get<json>(loaded);
      if (auto err = with_climber(request)) return finish(g, *err);
      // The route document carries its own wall; no corpus is needed.
      const Engine engine(config, nullptr);
      if (beta->parsed()) {
        const Response r = engine.beta(request);
        if (!g.json && r.status == 200) print_beta(r.body);
        return finish(g, r);
      }
      if (vary->parsed()) {
        request["intensity"] = intensity;
        request["seed"] = g.seed.value_or(0);
        const Response r = engine.vary(request);
        if (r.status == 200 && out && !write_text(*out, r.body.at("document"))) return kExitInternal;
        if (!g.json && r.status == 200 && !out) std::cout << r.body.at("document").get<std::string>();
        return finish(g, r);
      }
      request["trials"] = trials;
      request["seed"] = g.seed.value_or(0);
      const Response r = engine.simulate(request);
      if (!g.json && r.status == 200) {
        std::printf("route %s: %d/%d ascents (%.4f), analytic %.4f\n",
                    r.body.at("route").get<std::string>().c_str(), r.body.at("successes").get<int>(),
                    trials, r.body.at("frequency").get<double>(),
                    r.body.at("success_probability").get<double>());
      }
      return finish(g, r);
    }

    if (grade->parsed()) {
      auto loaded = load_request(file, route_name);
      if (auto* r = std::get_if<Response>(&loaded)) return finish(g, *r);
      json request = std::get<json>(loaded);
      if (tnorm) request["tnorm"] = *tnorm;
      if (threshold) request["threshold"] = *threshold;
      if (g.seed) request["seed"] = *g.seed;
      const Engine engine(config, open_store(config.corpus_path));
      const Response r = engine.grade(request);
      if (!g.json && r.status == 200) print_grade(r.body);
      return finish(g, r);
    }

    if (generate->parsed()) {
      const Response wall_doc = Engine::parse(crux::service::read_file(wall_file));
      if (wall_doc.status != 200) return finish(g, wall_doc);
      json request = json::object();
      request["wall"] = wall_doc.body.at("wall");
      if (seed_route) {
        const json* found = nullptr;
        for (const auto& r : wall_doc.body.at("routes")) {
          if (r.at("name") == *seed_route) found = &r;
        }
        if (found == nullptr) {
          return finish(g, crux::service::error_response(404, "NOT_FOUND",
                                                         "no route named " + *seed_route));
        }
        request["seed_route"] = *found;
      }
      if (target_grade) request["target_grade"] = *target_grade;
      if (target_style) {
        try {
          request["target_style"] = json::parse(crux::service::read_file(*target_style));
        } catch (const json::parse_error& e) {
          return finish(g, crux::service::error_response(422, "VALIDATION",
                                                         *target_style + ": " + e.what()));
        }
      }
      if (iterations) request["max_iterations"] = *iterations;
      if (hold_budget) request["hold_budget"] = *hold_budget;
      if (g.seed) request["seed"] = *g.seed;
      const Engine engine(config, open_store(config.corpus_path));
      const Response r = engine.generate(request);
      if (r.status == 200) {
        if (out && !write_text(*out, r.body.at("document"))) return kExitInternal;
        if (!g.json) {
          if (!out) std::cout << r.body.at("document").get<std::string>();
          std::cout << crux::service::render(r.body.at("report"));
        }
      }
      return finish(g, r);
    }

    if (serve->parsed()) {
      if (port) config.port = *port;
      if (ui_dir) config.ui_dir = *ui_dir;
      Engine engine(config, open_store(config.corpus_path));
      crux::service::HttpServer server(engine);
      const int bound = server.bind("0.0.0.0", config.port);
      if (bound < 0) {
        std::cerr << "error: cannot bind port " << config.port << "\n";
        return kExitInternal;
      }
      std::cerr << "crux listening on port " << bound << "\n";
      return server.listen() ? kExitOk : kExitInternal;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
