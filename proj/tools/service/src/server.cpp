#include "crux/service/server.hpp"

#include <filesystem>

#include <httplib.h>

#include "crux/service/engine.hpp"

namespace crux::service {

struct HttpServer::Impl {
  Engine& engine;
  httplib::Server server;

  explicit Impl(Engine& e) : engine(e) {}
};

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(render(r.body), "application/json");
}

// 400 for a body that is not JSON; otherwise hands the parsed body on.
template <typename Handler>
httplib::Server::Handler with_json(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::parse_error& e) {
      reply(res, error_response(400, "MALFORMED_JSON", e.what()));
      return;
    }
    reply(res, handler(body));
  };
}

}  // namespace

HttpServer::HttpServer(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {
  auto& s = impl_->server;
  Engine& e = engine;
  s.Get("/api/wall", [&e](const httplib::Request&, httplib::Response& res) {
    reply(res, e.get_wall());
  });
  s.Put("/api/wall", with_json([&e](const nlohmann::json& b) { return e.put_wall(b); }));
  s.Post("/api/beta", with_json([&e](const nlohmann::json& b) { return e.beta(b); }));
  s.Post("/api/grade", with_json([&e](const nlohmann::json& b) { return e.grade(b); }));
  s.Post("/api/vary", with_json([&e](const nlohmann::json& b) { return e.vary(b); }));
  s.Post("/api/simulate", with_json([&e](const nlohmann::json& b) { return e.simulate(b); }));
  s.Post("/api/ascents", with_json([&e](const nlohmann::json& b) { return e.ascents(b); }));
  s.Post("/api/generate",
         with_json([&e](const nlohmann::json& b) { return e.submit_generate(b); }));
  s.Get(R"(/api/jobs/([^/]+))", [&e](const httplib::Request& req, httplib::Response& res) {
    reply(res, e.job(req.matches[1]));
  });
  s.Delete(R"(/api/jobs/([^/]+))", [&e](const httplib::Request& req, httplib::Response& res) {
    reply(res, e.cancel_job(req.matches[1]));
  });
  const auto& ui = engine.config().ui_dir;
  if (!ui.empty() && std::filesystem::is_directory(ui)) s.set_mount_point("/", ui);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace crux::service
