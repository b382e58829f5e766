#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace amiedot {

struct ServiceConfig {
  std::string log_path = "amiedot.jsonl";
  std::string bind_address = "127.0.0.1:8080";
  bool strict_lending = false;
  std::optional<std::string> stopword_path;
};

struct BindAddress {
  std::string host;
  int port = 0;
};

/// "host:port" with port in [1, 65535]. Throws invalid-argument.
BindAddress parse_bind_address(std::string_view text);

/// Flat key=value file: log_path, bind_address, strict_lending, stopword_path.
/// '#' starts a comment line. Throws io-error or invalid-argument.
void apply_config_file(ServiceConfig& config, const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
std::optional<std::string> process_env(const char* name);

/// AMIEDOT_LOG and AMIEDOT_BIND override whatever the config file said.
void apply_environment(ServiceConfig& config, const EnvLookup& env = process_env);

/// Throws invalid-argument unless log_path is nonempty and the bind address parses.
void validate_config(const ServiceConfig& config);

}  // namespace amiedot
