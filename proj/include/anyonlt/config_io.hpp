#pragma once

#include <string>

#include <json.hpp>

#include "anyonlt/model.hpp"

namespace anyonlt::model {

/// Version tag written into every serialized configuration.
inline constexpr int kConfigurationFormatVersion = 1;

/// A configuration together with the parameters it was sampled for.
struct ConfigurationDocument {
  AnyonParams params;
  Configuration config;
};

nlohmann::json to_json(const ConfigurationDocument& doc);

/// Strict reader: unknown keys, a wrong version or invariant violations throw InvalidInput.
ConfigurationDocument configuration_from_json(const nlohmann::json& j);

std::string dump_configuration(const ConfigurationDocument& doc);
ConfigurationDocument parse_configuration(const std::string& text);

}  // namespace anyonlt::model
