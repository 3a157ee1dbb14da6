#pragma once

#include "coopcsma/csma_engine.hpp"
#include "coopcsma/protocols.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coopcsma {

/// Bad or unknown configuration key; `key()` names it.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key))
  {
  }
  const std::string& key() const { return key_; }

private:
  std::string key_;
};

inline constexpr std::uint64_t kDeskScaleCompetitions = 200'000;
inline constexpr std::uint64_t kPaperScaleCompetitions = 16'000'000;

struct ExperimentConfig {
  std::size_t n_nodes = 32;
  double gamma = -3.0;
  std::uint64_t seed = 1;
  /// When set, every replication reuses this network instead of drawing one.
  std::optional<std::filesystem::path> topology_file;
  std::vector<double> snr_db; ///< empty: the subcommand's default sweep
  CsmaParams csma;
  ProtocolConfig protocol;
  std::uint64_t competitions = kDeskScaleCompetitions;
  std::size_t replications = 5;
  double energy_budget = 1.0; ///< W
  std::size_t threads = 0;    ///< 0 = hardware concurrency
  std::optional<std::filesystem::path> out;

  /// Throws ConfigError naming the first offending key.
  void validate() const;
};

/// Flat `key = value` text, '#' comments. Unknown keys and malformed values
/// are rejected here; cross-field checks happen in validate().
///
/// keys: n_nodes gamma seed topology_file snr_db (comma list) tau sigma
///       protocol H P Q competitions replications W threads out
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig read_config(const std::filesystem::path& path);

/// Applies one `key = value` assignment; used by the parser and CLI overrides.
void apply_config_key(ExperimentConfig& config, std::string_view key, std::string_view value);

} // namespace coopcsma
