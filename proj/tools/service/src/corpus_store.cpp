#include "crux/service/corpus_store.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "crux/format.hpp"
#include "crux/service/json_io.hpp"

namespace crux::service {

namespace fs = std::filesystem;

namespace {

constexpr const char* kWallFile = "wall.crux";
constexpr const char* kMetaFile = "meta.json";

Document parse_or_throw(const fs::path& path) {
  auto parsed = parse_document(read_file(path.string()));
  if (!parsed.ok()) {
    const auto& e = parsed.errors.front();
    throw std::runtime_error(path.string() + ":" + std::to_string(e.location.line) + ": " +
                             e.message);
  }
  return std::move(*parsed.document);
}

}  // namespace

const GradedRoute* CorpusSnapshot::find(std::string_view name) const {
  for (const auto& r : routes) {
    if (r.route.name == name) return &r;
  }
  return nullptr;
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

CorpusStore::CorpusStore(fs::path root) : root_(std::move(root)) {
  auto snap = std::make_shared<CorpusSnapshot>();
  if (fs::is_directory(root_)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(root_)) {
      if (entry.is_regular_file() && entry.path().extension() == ".crux") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      Document doc = parse_or_throw(file);
      if (file.filename() == kWallFile) {
        snap->wall = std::move(doc.wall);
        continue;
      }
      for (auto& r : doc.routes) snap->routes.push_back({std::move(r), doc.wall});
    }
    if (fs::exists(root_ / kMetaFile)) {
      const auto meta = nlohmann::json::parse(read_file((root_ / kMetaFile).string()));
      if (meta.contains("routes") && meta.at("routes").is_object()) {
        for (auto& r : snap->routes) {
          if (!meta.at("routes").contains(r.route.name)) continue;
          const auto& m = meta.at("routes").at(r.route.name);
          r.route.exposure_count = m.value("exposure_count", std::int64_t{0});
          r.route.grade_locked = m.value("grade_locked", false);
        }
      }
    }
  }
  std::sort(snap->routes.begin(), snap->routes.end(),
            [](const GradedRoute& a, const GradedRoute& b) { return a.route.name < b.route.name; });
  current_ = std::move(snap);
}

std::shared_ptr<const CorpusSnapshot> CorpusStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void CorpusStore::publish(std::shared_ptr<CorpusSnapshot> next) {
  next->revision = current_->revision + 1;
  current_ = std::move(next);
}

void CorpusStore::write_meta(const CorpusSnapshot& snap) const {
  nlohmann::json routes = nlohmann::json::object();
  for (const auto& r : snap.routes) {
    routes[r.route.name] = {{"exposure_count", r.route.exposure_count},
                            {"grade_locked", r.route.grade_locked}};
  }
  atomic_write(root_ / kMetaFile, nlohmann::json{{"routes", routes}}.dump(2) + "\n");
}

void CorpusStore::put_wall(const Wall& wall) {
  std::lock_guard lock(mutex_);
  fs::create_directories(root_);
  atomic_write(root_ / kWallFile, serialize_document(wall, {}));
  auto next = std::make_shared<CorpusSnapshot>(*current_);
  next->wall = wall;
  publish(std::move(next));
}

std::optional<Route> CorpusStore::record_ascent(const std::string& name, std::int64_t increment,
                                                std::int64_t lock_threshold) {
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<CorpusSnapshot>(*current_);
  auto it = std::find_if(next->routes.begin(), next->routes.end(),
                         [&](const GradedRoute& r) { return r.route.name == name; });
  if (it == next->routes.end()) return std::nullopt;
  it->route = record_ascent_and_maybe_lock(it->route, increment, lock_threshold);
  write_meta(*next);
  Route out = it->route;
  publish(std::move(next));
  return out;
}

}  // namespace crux::service
