#include "amiedot/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "amiedot/error.hpp"
#include "amiedot/model.hpp"

namespace amiedot {

BindAddress parse_bind_address(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw Error(ErrorCode::invalid_argument, "bind address must be host:port");
  }
  const auto port_text = text.substr(colon + 1);
  int port = 0;
  const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port < 1 || port > 65535) {
    throw Error(ErrorCode::invalid_argument, "port must be in [1, 65535]");
  }
  return {std::string(text.substr(0, colon)), port};
}

void apply_config_file(ServiceConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read config file '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = normalize_keyword(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::invalid_argument, "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = normalize_keyword(line.substr(0, eq));
    auto value = line.substr(eq + 1);
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(0, 1);
    while (!value.empty() && (value.back() == ' ' || value.back() == '\t' || value.back() == '\r')) {
      value.pop_back();
    }
    if (key == "log_path") {
      config.log_path = value;
    } else if (key == "bind_address") {
      config.bind_address = value;
    } else if (key == "strict_lending") {
      const auto v = normalize_keyword(value);
      if (v == "true" || v == "1" || v == "yes") config.strict_lending = true;
      else if (v == "false" || v == "0" || v == "no") config.strict_lending = false;
      else throw Error(ErrorCode::invalid_argument, "strict_lending must be true or false");
    } else if (key == "stopword_path") {
      config.stopword_path = value;
    } else {
      throw Error(ErrorCode::invalid_argument, "unknown config key '" + key + "'");
    }
  }
}

std::optional<std::string> process_env(const char* name) {
  if (const char* value = std::getenv(name); value && *value) return std::string(value);
  return std::nullopt;
}

void apply_environment(ServiceConfig& config, const EnvLookup& env) {
  if (auto log = env("AMIEDOT_LOG")) config.log_path = *log;
  if (auto bind = env("AMIEDOT_BIND")) config.bind_address = *bind;
}

void validate_config(const ServiceConfig& config) {
  if (config.log_path.empty()) throw Error(ErrorCode::invalid_argument, "log_path must be nonempty");
  parse_bind_address(config.bind_address);
}

}  // namespace amiedot
