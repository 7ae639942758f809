#pragma once

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "crux/format.hpp"
#include "crux/grading.hpp"
#include "crux/model.hpp"
#include "crux/rng.hpp"

namespace crux::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CRUX_FIXTURE_DIR) / name;
}

std::string read_text(const std::filesystem::path& path);

/// Parses a fixture and throws if it does not parse.
Document load(const std::string& name);

/// Every .crux fixture, sorted by path.
std::vector<std::filesystem::path> all_fixture_documents();

/// The bundled grading corpus with exposure and locks from its meta.json.
std::vector<GradedRoute> corpus_routes();

/// Population the acceptance criteria are stated against.
std::vector<ClimberProfile> reference_population(int size = 2000);

struct RandomCase {
  Wall wall;
  Route route;
  ClimberProfile climber;
};

/// A small random route (3 to `max_holds` holds) on a 3 x 4.5 m wall that
/// may be overhung, with a random climber whose exposure and fear vary.
RandomCase random_case(Rng& rng, int max_holds);

/// Independent restatement of the move success model, written from its
/// definition rather than shared with the library.
inline double oracle_probability(double ability, double difficulty, double distance,
                                 double arm_span, double exposure_weight, double exposure,
                                 double fear, double kappa = 4.0) {
  const double stretched = difficulty + 0.5 * distance / arm_span + exposure_weight * (1 - 7 * exposure);
  const double d = stretched > difficulty ? stretched : difficulty;
  return 1.0 / (1.0 + std::exp(-kappa * (ability - d - fear)));
}

}  // namespace crux::test
