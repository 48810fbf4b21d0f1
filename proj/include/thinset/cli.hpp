#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>

namespace thinset::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kSchema = "thinset-report/1";

struct Options {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::optional<long> precision_bits;  // flag wins over the config value
  std::optional<std::size_t> cap;
  std::optional<std::string> log_convention;
};

struct Outcome {
  bool pass = false;
  nlohmann::json result;
  std::optional<std::string> csv;
};

/// Runs one command on an already parsed config. Throws thinset::Error.
Outcome execute(const std::string& command, const nlohmann::json& config, const Options& options);

/// FNV-1a 64 over the canonical (sorted-key) dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Parses a config file; ConfigError carries line and column on syntax errors.
nlohmann::json load_config(const std::string& path);

/// Full process entry point: 0 pass, 1 verification failure, 2 config error.
int run(int argc, char** argv);

}  // namespace thinset::cli
