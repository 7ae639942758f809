#include "crux/service/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "crux/style.hpp"

namespace crux::service {

namespace {

nlohmann::json hold_or_free(const LimbHold& h) {
  return h ? nlohmann::json(*h) : nlohmann::json(nullptr);
}

double number_field(const nlohmann::json& object, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  const auto& v = object.at(key);
  if (!v.is_number()) throw std::invalid_argument(std::string(key) + ": expected a number");
  return v.get<double>();
}

}  // namespace

nlohmann::json beta_to_json(const Beta& beta) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : beta.states) {
    nlohmann::json state = nlohmann::json::object();
    for (Limb limb : kAllLimbs) state[std::string(to_string(limb))] = hold_or_free(s.at(limb));
    states.push_back(std::move(state));
  }
  nlohmann::json moves = nlohmann::json::array();
  for (const auto& m : beta.moves) {
    moves.push_back({{"limb", to_string(m.limb)},
                     {"from", hold_or_free(m.from)},
                     {"to", hold_or_free(m.to)},
                     {"distance", m.distance},
                     {"move_type", to_string(m.move_type)}});
  }
  return {{"states", states}, {"moves", moves}, {"total_cost", beta.total_cost}};
}

nlohmann::json climber_to_json(const ClimberProfile& c) {
  nlohmann::json exposure = nlohmann::json::object();
  for (MoveType t : kAllMoveTypes) exposure[std::string(to_string(t))] = c.exposure_of(t);
  return {{"ability", c.ability},
          {"height", c.height},
          {"arm_span", c.arm_span},
          {"fear_sensitivity", c.fear_sensitivity},
          {"exposure", exposure}};
}

nlohmann::json issues_to_json(const ValidationReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& i : report.issues) {
    nlohmann::json issue = {{"code", i.code}, {"message", i.message}};
    if (i.hold_id) issue["hold_id"] = *i.hold_id;
    out.push_back(std::move(issue));
  }
  return out;
}

nlohmann::json parse_errors_to_json(const std::vector<ParseError>& errors) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : errors) {
    out.push_back({{"line", e.location.line},
                   {"column", e.location.column},
                   {"code", to_string(e.code)},
                   {"message", e.message}});
  }
  return out;
}

ClimberProfile climber_from_json(const nlohmann::json& object, ClimberProfile base) {
  if (!object.is_object()) throw std::invalid_argument("climber: expected an object");
  base.ability = number_field(object, "ability", base.ability);
  base.height = number_field(object, "height", base.height);
  base.arm_span = number_field(object, "arm_span", base.arm_span);
  base.fear_sensitivity = number_field(object, "fear_sensitivity", base.fear_sensitivity);
  if (object.contains("exposure")) {
    const auto style = style_from_json(object.at("exposure"));
    if (!style) throw std::invalid_argument("climber.exposure: expected {move_type: weight}");
    base.exposure = style->weights;
  }
  const auto report = validate_climber(base);
  if (!report.ok()) throw std::invalid_argument("climber: " + report.issues.front().message);
  return base;
}

PopulationSpec population_from_json(const nlohmann::json& object, PopulationSpec base) {
  if (!object.is_object()) throw std::invalid_argument("population: expected an object");
  if (object.contains("size")) {
    if (!object.at("size").is_number_integer()) {
      throw std::invalid_argument("population.size: expected an integer");
    }
    base.size = object.at("size").get<int>();
  }
  base.ability_mean = number_field(object, "ability_mean", base.ability_mean);
  base.ability_std = number_field(object, "ability_std", base.ability_std);
  base.height_mean = number_field(object, "height_mean", base.height_mean);
  base.height_std = number_field(object, "height_std", base.height_std);
  base.fear_mean = number_field(object, "fear_mean", base.fear_mean);
  base.exposure_skew = number_field(object, "exposure_skew", base.exposure_skew);
  return base;
}

nlohmann::json population_to_json(const PopulationSpec& s) {
  return {{"size", s.size},
          {"ability_mean", s.ability_mean},
          {"ability_std", s.ability_std},
          {"height_mean", s.height_mean},
          {"height_std", s.height_std},
          {"fear_mean", s.fear_mean},
          {"exposure_skew", s.exposure_skew}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace crux::service
