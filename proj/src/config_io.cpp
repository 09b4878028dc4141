#include "anyonlt/config_io.hpp"

#include <set>

#include "anyonlt/error.hpp"

namespace anyonlt::model {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.contains(key)) {
      throw InvalidInput(std::string("unknown key '") + key + "' in " + where);
    }
  }
}

Vec2 point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidInput("points are [x, y] number pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json point_to_json(const Vec2& x) { return json::array({x.x(), x.y()}); }

std::vector<Vec2> points_from_json(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  if (!j.at(key).is_array()) throw InvalidInput(std::string(key) + " must be an array");
  std::vector<Vec2> out;
  for (const auto& p : j.at(key)) out.push_back(point_from_json(p));
  return out;
}

double number_at(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw InvalidInput(std::string("missing numeric field '") + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

json to_json(const ConfigurationDocument& doc) {
  json inside = json::array();
  for (const auto& x : doc.config.inside()) inside.push_back(point_to_json(x));
  json outside = json::array();
  for (const auto& y : doc.config.outside()) outside.push_back(point_to_json(y));
  return json{{"version", kConfigurationFormatVersion},
              {"alpha", doc.params.alpha()},
              {"radius", doc.params.radius()},
              {"square",
               {{"corner", point_to_json(doc.config.square().corner())},
                {"side", doc.config.square().side()}}},
              {"inside", inside},
              {"outside", outside}};
}

ConfigurationDocument configuration_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("configuration document must be a JSON object");
  reject_unknown_keys(j, {"version", "alpha", "radius", "square", "inside", "outside"}, "configuration");
  if (j.contains("version") &&
      (!j.at("version").is_number_integer() || j.at("version").get<int>() != kConfigurationFormatVersion)) {
    throw InvalidInput("unsupported configuration version");
  }
  if (!j.contains("square") || !j.at("square").is_object()) throw InvalidInput("missing 'square'");
  const json& sq = j.at("square");
  reject_unknown_keys(sq, {"corner", "side"}, "square");
  if (!sq.contains("corner")) throw InvalidInput("missing square corner");
  SquareDomain square(point_from_json(sq.at("corner")), number_at(sq, "side"));
  AnyonParams params(number_at(j, "alpha"), number_at(j, "radius"));
  Configuration config(square, points_from_json(j, "inside"), points_from_json(j, "outside"));
  return {params, std::move(config)};
}

std::string dump_configuration(const ConfigurationDocument& doc) { return to_json(doc).dump(2); }

ConfigurationDocument parse_configuration(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("configuration parse error: ") + e.what());
  }
  return configuration_from_json(j);
}

}  // namespace anyonlt::model
