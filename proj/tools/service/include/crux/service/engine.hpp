#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/generator.hpp"
#include "crux/service/config.hpp"
#include "crux/service/corpus_store.hpp"

namespace crux::service {

// Transport-independent result of a request: the HTTP status and the body.
// The CLI maps the status to an exit code and prints the same body.
struct Response {
  int status = 200;
  nlohmann::json body;
};

Response error_response(int status, std::string_view code, const std::string& message,
                        nlohmann::json issues = nullptr);

/// Text of a response body as both transports emit it.
std::string render(const nlohmann::json& body);

class Engine {
 public:
  /// `store` may be null: no corpus, no working wall.
  Engine(ServiceConfig config, std::shared_ptr<CorpusStore> store);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Response get_wall() const;
  Response put_wall(const nlohmann::json& request);
  Response beta(const nlohmann::json& request) const;
  Response grade(const nlohmann::json& request) const;
  Response vary(const nlohmann::json& request) const;
  Response simulate(const nlohmann::json& request) const;
  Response ascents(const nlohmann::json& request);

  /// Runs a generation to completion in the caller's thread.
  Response generate(const nlohmann::json& request) const;
  /// Queues a generation job; 202 with {job_id}.
  Response submit_generate(const nlohmann::json& request);
  Response job(const std::string& id) const;
  Response cancel_job(const std::string& id);

  /// Parses a .crux document; 200 with the canonical text, 422 with errors.
  static Response parse(std::string_view text);

  const ServiceConfig& config() const { return config_; }
  const std::vector<ClimberProfile>& population() const { return population_; }
  const ClimberProfile& representative() const { return representative_; }

 private:
  struct Job {
    std::string id;
    nlohmann::json request;
    std::string status = "queued";
    GenerationProgress progress;
    nlohmann::json result;
    std::atomic<bool> cancel{false};
  };

  Response run_generation(const nlohmann::json& request, const GenerationHooks& hooks) const;
  std::shared_ptr<const Grader> grader_for(const CorpusSnapshot& snap,
                                           const GradingOptions& options) const;
  void worker();
  void ensure_workers();

  ServiceConfig config_;
  std::shared_ptr<CorpusStore> store_;
  std::vector<ClimberProfile> population_;
  ClimberProfile representative_;

  using GraderKey = std::tuple<std::uint64_t, int, double, std::uint64_t, int>;
  mutable std::mutex grader_mutex_;
  mutable std::map<GraderKey, std::shared_ptr<const Grader>> graders_;

  mutable std::mutex jobs_mutex_;
  std::condition_variable jobs_cv_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::deque<std::shared_ptr<Job>> queue_;
  std::vector<std::thread> workers_;
  std::uint64_t next_job_ = 1;
  bool stopping_ = false;
};

}  // namespace crux::service
