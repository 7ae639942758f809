#include "crux/service/engine.hpp"

#include <stdexcept>
#include <variant>

#include "crux/error.hpp"
#include "crux/format.hpp"
#include "crux/planner.hpp"
#include "crux/service/json_io.hpp"
#include "crux/style.hpp"

namespace crux::service {

namespace {

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnreachable:
    case ErrorCode::kStuck:
    case ErrorCode::kEmpty:
    case ErrorCode::kLocked:
    case ErrorCode::kEmptySet:
    case ErrorCode::kEmptyCorpus:
    case ErrorCode::kNoValidStart:
      return 409;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kDomain:
    case ErrorCode::kDtTooLarge:
    case ErrorCode::kLimitExceeded:
    case ErrorCode::kParse:
      return 422;
  }
  return 500;
}

Response from_error(const Error& e) {
  return error_response(status_for(e.code()), to_string(e.code()), e.what());
}

Response validation(const std::string& message, nlohmann::json issues) {
  return error_response(422, "VALIDATION", message, std::move(issues));
}

struct Target {
  Route route;
  Wall wall;
};

// Wall precedence: request body, the wall of a corpus route with the same
// name, then the working wall.
std::variant<Target, Response> resolve(const nlohmann::json& request,
                                       const CorpusSnapshot* snap) {
  if (!request.is_object()) return validation("request must be an object", nullptr);
  if (!request.contains("route")) return validation("missing field: route", nullptr);
  const auto& route_obj = request.at("route");
  const std::string name = route_obj.is_object() ? route_obj.value("name", "") : "";
  const GradedRoute* known = snap != nullptr ? snap->find(name) : nullptr;

  Wall wall;
  if (request.contains("wall")) {
    auto parsed = wall_from_json(request.at("wall"), "$.wall");
    if (!parsed.wall) return validation("invalid wall", parse_errors_to_json(parsed.errors));
    wall = std::move(*parsed.wall);
  } else if (known != nullptr) {
    wall = known->wall;
  } else if (snap != nullptr && snap->wall) {
    wall = *snap->wall;
  } else {
    return error_response(422, "NO_WALL", "no wall in the request and no working wall");
  }
  const auto wall_report = validate_wall(wall);
  if (!wall_report.ok()) return validation("invalid wall", issues_to_json(wall_report));

  auto parsed = route_from_json(route_obj, wall, "$.route");
  if (!parsed.route) return validation("invalid route", parse_errors_to_json(parsed.errors));
  Route route = std::move(*parsed.route);
  const auto report = validate_route(route, wall);
  if (!report.ok()) return validation("invalid route", issues_to_json(report));
  if (known != nullptr) {
    route.exposure_count = known->route.exposure_count;
    route.grade_locked = known->route.grade_locked;
  }
  return Target{std::move(route), std::move(wall)};
}

std::variant<ClimberProfile, Response> climber_of(const nlohmann::json& request,
                                                  const ClimberProfile& fallback) {
  if (!request.contains("climber")) return fallback;
  try {
    return climber_from_json(request.at("climber"), fallback);
  } catch (const std::invalid_argument& e) {
    return validation(e.what(), nullptr);
  }
}

template <typename T>
std::variant<T, Response> field(const nlohmann::json& request, const char* key, T fallback) {
  if (!request.contains(key)) return fallback;
  try {
    return request.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    return validation(std::string("wrong type for field: ") + key, nullptr);
  }
}

std::vector<GradeSet> locked_corpus(const CorpusSnapshot* snap, const std::string& exclude) {
  if (snap == nullptr) return {};
  std::vector<GradedRoute> routes;
  for (const auto& r : snap->routes) {
    if (r.route.name != exclude) routes.push_back(r);
  }
  return group_by_grade(routes, true);
}

nlohmann::json wall_document(const Wall& wall) {
  return {{"wall", wall_to_json(wall)}, {"document", serialize_document(wall, {})}};
}

}  // namespace

Response error_response(int status, std::string_view code, const std::string& message,
                        nlohmann::json issues) {
  nlohmann::json body = {{"code", code}, {"message", message}};
  if (!issues.is_null()) body["issues"] = std::move(issues);
  return {status, std::move(body)};
}

std::string render(const nlohmann::json& body) { return body.dump(2) + "\n"; }

Engine::Engine(ServiceConfig config, std::shared_ptr<CorpusStore> store)
    : config_(std::move(config)), store_(std::move(store)) {
  population_ = sample_population(config_.population, config_.population_seed);
  representative_ = representative_climber(population_);
}

Engine::~Engine() {
  {
    std::lock_guard lock(jobs_mutex_);
    stopping_ = true;
    for (auto& [id, job] : jobs_) job->cancel = true;
  }
  jobs_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

Response Engine::parse(std::string_view text) {
  const auto parsed = parse_document(text);
  if (!parsed.ok()) return validation("document does not parse", parse_errors_to_json(parsed.errors));
  const auto& doc = *parsed.document;
  nlohmann::json body = to_json_object(doc.wall, doc.routes);
  body["document"] = serialize_document(doc);
  return {200, std::move(body)};
}

Response Engine::get_wall() const {
  const auto snap = store_ ? store_->snapshot() : nullptr;
  if (!snap || !snap->wall) return error_response(404, "NOT_FOUND", "no working wall");
  auto body = wall_document(*snap->wall);
  body["revision"] = snap->revision;
  return {200, std::move(body)};
}

Response Engine::put_wall(const nlohmann::json& request) {
  if (!store_) return error_response(409, "NO_CORPUS", "service has no corpus directory");
  const nlohmann::json& obj =
      request.is_object() && request.contains("wall") ? request.at("wall") : request;
  auto parsed = wall_from_json(obj, "$");
  if (!parsed.wall) return validation("invalid wall", parse_errors_to_json(parsed.errors));
  const auto report = validate_wall(*parsed.wall);
  if (!report.ok()) return validation("invalid wall", issues_to_json(report));
  store_->put_wall(*parsed.wall);
  auto body = wall_document(*parsed.wall);
  body["revision"] = store_->snapshot()->revision;
  return {200, std::move(body)};
}

Response Engine::beta(const nlohmann::json& request) const {
  const auto snap = store_ ? store_->snapshot() : nullptr;
  auto target = resolve(request, snap.get());
  if (auto* r = std::get_if<Response>(&target)) return *r;
  auto climber = climber_of(request, representative_);
  if (auto* r = std::get_if<Response>(&climber)) return *r;
  const auto& [route, wall] = std::get<Target>(target);
  const auto& c = std::get<ClimberProfile>(climber);
  const ModelParams& model = config_.grading.model;
  try {
    const Beta b = plan_beta(route, wall, c, model.lambda_effort, {model, {}});
    return {200,
            {{"route", route.name},
             {"beta", beta_to_json(b)},
             {"success_probability", beta_success_probability(b, wall, c, model)}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

std::shared_ptr<const Grader> Engine::grader_for(const CorpusSnapshot& snap,
                                                 const GradingOptions& options) const {
  const GraderKey key{snap.revision, static_cast<int>(options.tnorm), options.threshold,
                      options.seed, options.min_qualifiers};
  std::lock_guard lock(grader_mutex_);
  if (auto it = graders_.find(key); it != graders_.end()) return it->second;
  auto grader = std::make_shared<const Grader>(locked_corpus(&snap, ""), population_, options);
  // Old revisions are never asked for again.
  std::erase_if(graders_, [&](const auto& kv) { return std::get<0>(kv.first) != snap.revision; });
  graders_.emplace(key, grader);
  return grader;
}

Response Engine::grade(const nlohmann::json& request) const {
  const auto snap = store_ ? store_->snapshot() : std::make_shared<const CorpusSnapshot>();
  auto target = resolve(request, snap.get());
  if (auto* r = std::get_if<Response>(&target)) return *r;
  const auto& [route, wall] = std::get<Target>(target);
  GradingOptions options;
  try {
    options = grading_from_json(request, config_.grading);
  } catch (const std::invalid_argument& e) {
    return validation(e.what(), nullptr);
  }
  try {
    if (route.grade_locked) {
      throw Error(ErrorCode::kLocked, "route " + route.name + " has a locked grade");
    }
    // A route being graded is unlocked, so it is never a member of the
    // locked corpus it is graded against.
    const auto grader = grader_for(*snap, options);
    const auto assignment = grader->assign(route, wall);
    return {200,
            {{"route", route.name},
             {"grade", assignment.grade.to_string()},
             {"tnorm", to_string(options.tnorm)},
             {"threshold", options.threshold},
             {"seed", options.seed},
             {"scores", scores_to_json(assignment.scores)}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

Response Engine::vary(const nlohmann::json& request) const {
  const auto snap = store_ ? store_->snapshot() : nullptr;
  auto target = resolve(request, snap.get());
  if (auto* r = std::get_if<Response>(&target)) return *r;
  auto climber = climber_of(request, representative_);
  if (auto* r = std::get_if<Response>(&climber)) return *r;
  auto intensity = field<double>(request, "intensity", -1.0);
  if (auto* r = std::get_if<Response>(&intensity)) return *r;
  auto seed = field<std::uint64_t>(request, "seed", 0);
  if (auto* r = std::get_if<Response>(&seed)) return *r;
  if (!request.contains("intensity")) return validation("missing field: intensity", nullptr);
  const auto& [route, wall] = std::get<Target>(target);
  const ModelParams& model = config_.grading.model;
  try {
    const Beta b =
        plan_beta(route, wall, std::get<ClimberProfile>(climber), model.lambda_effort, {model, {}});
    const auto varied = vary_route(route, wall, b, std::get<double>(intensity),
                                   std::get<std::uint64_t>(seed));
    return {200,
            {{"route", route_to_json(varied.route)},
             {"wall", wall_to_json(varied.wall)},
             {"document", serialize_document(varied.wall, {varied.route})}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

Response Engine::simulate(const nlohmann::json& request) const {
  const auto snap = store_ ? store_->snapshot() : nullptr;
  auto target = resolve(request, snap.get());
  if (auto* r = std::get_if<Response>(&target)) return *r;
  auto climber = climber_of(request, representative_);
  if (auto* r = std::get_if<Response>(&climber)) return *r;
  auto trials = field<int>(request, "trials", 1000);
  if (auto* r = std::get_if<Response>(&trials)) return *r;
  auto seed = field<std::uint64_t>(request, "seed", 0);
  if (auto* r = std::get_if<Response>(&seed)) return *r;
  const int n = std::get<int>(trials);
  if (n < 1) return validation("trials must be at least 1", nullptr);
  const auto& [route, wall] = std::get<Target>(target);
  const auto& c = std::get<ClimberProfile>(climber);
  const ModelParams& model = config_.grading.model;
  try {
    const Beta b = plan_beta(route, wall, c, model.lambda_effort, {model, {}});
    std::vector<double> probs;
    for (std::size_t i = 0; i < b.moves.size(); ++i) {
      probs.push_back(move_success_probability(b.moves[i], b.states[i], wall, c,
                                               model.exposure_weight, model));
    }
    Rng rng(std::get<std::uint64_t>(seed));
    int successes = 0;
    std::vector<int> falls(b.moves.size(), 0);
    for (int t = 0; t < n; ++t) {
      const auto result = simulate_moves(probs, rng);
      if (result.success) {
        ++successes;
      } else if (result.fall_move_index) {
        ++falls[static_cast<std::size_t>(*result.fall_move_index)];
      }
    }
    return {200,
            {{"route", route.name},
             {"trials", n},
             {"successes", successes},
             {"frequency", static_cast<double>(successes) / n},
             {"success_probability", beta_success_probability(b, wall, c, model)},
             {"falls_by_move", falls}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

Response Engine::ascents(const nlohmann::json& request) {
  if (!request.is_object() || !request.contains("route_name") ||
      !request.at("route_name").is_string()) {
    return validation("missing field: route_name", nullptr);
  }
  auto count = field<std::int64_t>(request, "count", 1);
  if (auto* r = std::get_if<Response>(&count)) return *r;
  const std::string name = request.at("route_name").get<std::string>();
  try {
    const auto route =
        store_ ? store_->record_ascent(name, std::get<std::int64_t>(count), config_.lock_threshold)
               : std::nullopt;
    if (!route) return error_response(404, "NOT_FOUND", "unknown route " + name);
    return {200,
            {{"route_name", name},
             {"exposure_count", route->exposure_count},
             {"grade_locked", route->grade_locked}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

Response Engine::run_generation(const nlohmann::json& request,
                                const GenerationHooks& hooks) const {
  if (!request.is_object()) return validation("request must be an object", nullptr);
  GenerationConfig gen;
  try {
    gen = generation_from_json(request, config_.generation);
    gen.grading = grading_from_json(request.value("grading", nlohmann::json::object()),
                                    config_.grading);
    validate_config(gen);
  } catch (const std::invalid_argument& e) {
    return validation(e.what(), nullptr);
  } catch (const Error& e) {
    return from_error(e);
  }
  const auto snap = store_ ? store_->snapshot() : nullptr;
  Wall wall;
  if (request.contains("wall")) {
    auto parsed = wall_from_json(request.at("wall"), "$.wall");
    if (!parsed.wall) return validation("invalid wall", parse_errors_to_json(parsed.errors));
    wall = std::move(*parsed.wall);
  } else if (snap && snap->wall) {
    wall = *snap->wall;
  } else {
    return error_response(422, "NO_WALL", "no wall in the request and no working wall");
  }
  const auto wall_report = validate_wall(wall);
  if (!wall_report.ok()) return validation("invalid wall", issues_to_json(wall_report));
  std::optional<Route> seed_route;
  if (request.contains("seed_route") && !request.at("seed_route").is_null()) {
    auto parsed = route_from_json(request.at("seed_route"), wall, "$.seed_route");
    if (!parsed.route) return validation("invalid seed route", parse_errors_to_json(parsed.errors));
    seed_route = std::move(parsed.route);
  }
  try {
    const auto result =
        generate_route(wall, seed_route, gen, locked_corpus(snap.get(), ""), population_, hooks);
    return {200,
            {{"route", route_to_json(result.route)},
             {"wall", wall_to_json(result.wall)},
             {"document", serialize_document(result.wall, {result.route})},
             {"beta", beta_to_json(result.beta)},
             {"report", report_to_json(result.report)}}};
  } catch (const Error& e) {
    return from_error(e);
  }
}

Response Engine::generate(const nlohmann::json& request) const {
  return run_generation(request, {});
}

void Engine::ensure_workers() {
  if (!workers_.empty()) return;
  for (int i = 0; i < config_.max_jobs; ++i) workers_.emplace_back([this] { worker(); });
}

Response Engine::submit_generate(const nlohmann::json& request) {
  if (!request.is_object()) return validation("request must be an object", nullptr);
  auto job = std::make_shared<Job>();
  job->request = request;
  {
    std::lock_guard lock(jobs_mutex_);
    job->id = "job-" + std::to_string(next_job_++);
    jobs_.emplace(job->id, job);
    queue_.push_back(job);
    ensure_workers();
  }
  jobs_cv_.notify_one();
  return {202, {{"job_id", job->id}, {"status", "queued"}}};
}

void Engine::worker() {
  for (;;) {
    std::shared_ptr<Job> job;
    {
      std::unique_lock lock(jobs_mutex_);
      jobs_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job = queue_.front();
      queue_.pop_front();
      if (job->cancel) continue;
      job->status = "running";
    }
    GenerationHooks hooks;
    hooks.cancel = &job->cancel;
    hooks.on_progress = [this, job](const GenerationProgress& p) {
      std::lock_guard lock(jobs_mutex_);
      job->progress = p;
    };
    Response r = run_generation(job->request, hooks);
    std::lock_guard lock(jobs_mutex_);
    job->result = std::move(r.body);
    if (r.status != 200) {
      job->status = "failed";
    } else {
      job->status = job->result.at("report").value("canceled", false) ? "canceled" : "done";
    }
  }
}

Response Engine::job(const std::string& id) const {
  std::lock_guard lock(jobs_mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return error_response(404, "NOT_FOUND", "unknown job " + id);
  const Job& j = *it->second;
  nlohmann::json body = {{"job_id", j.id},
                         {"status", j.status},
                         {"progress",
                          {{"iteration", j.progress.iteration},
                           {"max_iterations", j.progress.max_iterations},
                           {"best_objective", j.progress.best_objective}}}};
  if (!j.result.is_null()) body["result"] = j.result;
  return {200, std::move(body)};
}

Response Engine::cancel_job(const std::string& id) {
  {
    std::lock_guard lock(jobs_mutex_);
    const auto it = jobs_.find(id);
    if (it == jobs_.end()) return error_response(404, "NOT_FOUND", "unknown job " + id);
    it->second->cancel = true;
    if (it->second->status == "queued") it->second->status = "canceled";
  }
  return job(id);
}

}  // namespace crux::service
