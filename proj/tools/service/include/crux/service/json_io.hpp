#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crux/body.hpp"
#include "crux/climber_sim.hpp"
#include "crux/format.hpp"
#include "crux/model.hpp"

namespace crux::service {

nlohmann::json beta_to_json(const Beta& beta);
nlohmann::json climber_to_json(const ClimberProfile& climber);
nlohmann::json issues_to_json(const ValidationReport& report);
nlohmann::json parse_errors_to_json(const std::vector<ParseError>& errors);

/// Missing fields keep the values already in `base`. Throws
/// std::invalid_argument naming the offending field.
ClimberProfile climber_from_json(const nlohmann::json& object, ClimberProfile base = {});
PopulationSpec population_from_json(const nlohmann::json& object, PopulationSpec base = {});
nlohmann::json population_to_json(const PopulationSpec& spec);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace crux::service
