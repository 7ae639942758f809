#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "crux/grading.hpp"
#include "crux/model.hpp"

namespace crux::service {

// Read-only view handed to request handlers; never mutated after publication.
struct CorpusSnapshot {
  std::uint64_t revision = 0;
  std::optional<Wall> wall;          // wall.crux, the setter's working wall
  std::vector<GradedRoute> routes;   // every other .crux file, sorted by name

  const GradedRoute* find(std::string_view name) const;
};

/// Directory of .crux documents plus meta.json with exposure counts and
/// locks. All writes go through one mutex and land via write-temp-rename.
class CorpusStore {
 public:
  /// Loads the directory; a missing directory is an empty corpus. Throws
  /// std::runtime_error on a document that does not parse.
  explicit CorpusStore(std::filesystem::path root);

  std::shared_ptr<const CorpusSnapshot> snapshot() const;

  void put_wall(const Wall& wall);

  /// Returns the updated route, or nullopt for an unknown name.
  std::optional<Route> record_ascent(const std::string& name, std::int64_t increment,
                                     std::int64_t lock_threshold);

  const std::filesystem::path& root() const { return root_; }

 private:
  void publish(std::shared_ptr<CorpusSnapshot> next);
  void write_meta(const CorpusSnapshot& snap) const;

  std::filesystem::path root_;
  mutable std::mutex mutex_;
  std::shared_ptr<const CorpusSnapshot> current_;
};

/// Writes `content` to a sibling temp file and renames it over `path`.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace crux::service
