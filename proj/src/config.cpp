#include "coopcsma/config.hpp"

#include "coopcsma/text_format.hpp"

#include <fstream>
#include <sstream>

namespace coopcsma {

namespace {

template <class F>
auto checked(std::string_view key, F&& parse)
{
  try {
    return parse();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::string message = e.what();
    const std::string prefix = std::string(key) + ": ";
    if (message.rfind(prefix, 0) == 0)
      message.erase(0, prefix.size());
    throw ConfigError(std::string(key), message);
  }
}

std::uint64_t parse_count(std::string_view key, std::string_view value)
{
  const auto n = parse_integer(value, key);
  if (n < 0)
    throw ConfigError(std::string(key), "must be non-negative");
  return static_cast<std::uint64_t>(n);
}

} // namespace

void apply_config_key(ExperimentConfig& c, std::string_view key, std::string_view value)
{
  value = trim(value);
  checked(key, [&] {
    if (key == "n_nodes") {
      c.n_nodes = parse_count(key, value);
    } else if (key == "gamma") {
      c.gamma = parse_double(value, key);
    } else if (key == "seed") {
      c.seed = parse_count(key, value);
    } else if (key == "topology_file") {
      c.topology_file = std::filesystem::path(std::string(value));
    } else if (key == "snr_db") {
      c.snr_db.clear();
      for (auto item : split(value, ','))
        c.snr_db.push_back(parse_double(item, key));
    } else if (key == "tau") {
      c.csma.tau = parse_double(value, key);
    } else if (key == "sigma") {
      c.csma.sigma = parse_double(value, key);
    } else if (key == "protocol") {
      c.protocol.kind = parse_protocol_kind(value);
    } else if (key == "H") {
      c.protocol.max_helpers = HelperCap::parse(value);
    } else if (key == "P") {
      c.protocol.max_pending = static_cast<int>(parse_integer(value, key));
    } else if (key == "Q") {
      c.protocol.max_forward = static_cast<int>(parse_integer(value, key));
    } else if (key == "competitions") {
      c.competitions = parse_count(key, value);
    } else if (key == "replications") {
      c.replications = parse_count(key, value);
    } else if (key == "W") {
      c.energy_budget = parse_double(value, key);
    } else if (key == "threads") {
      c.threads = parse_count(key, value);
    } else if (key == "out") {
      c.out = std::filesystem::path(std::string(value));
    } else {
      throw ConfigError(std::string(key), "unknown configuration key");
    }
    return 0;
  });
}

void ExperimentConfig::validate() const
{
  if (n_nodes < 1 && !topology_file)
    throw ConfigError("n_nodes", "must be at least 1");
  if (snr_db.empty())
    throw ConfigError("snr_db", "sweep list must not be empty");
  if (competitions < 1)
    throw ConfigError("competitions", "must be at least 1");
  if (replications < 1)
    throw ConfigError("replications", "must be at least 1");
  if (!(energy_budget > 0.0))
    throw ConfigError("W", "must be positive");
  if (!(gamma < 0.0))
    throw ConfigError("gamma", "path-loss exponent must be negative");
  checked("tau", [&] {
    CsmaParams probe = csma;
    probe.sigma = 1.0;
    probe.validate();
    return 0;
  });
  checked("sigma", [&] {
    CsmaParams probe = csma;
    probe.tau = 0.5;
    probe.validate();
    return 0;
  });
  if (protocol.kind == ProtocolKind::FairMac) {
    if (protocol.max_pending < 0)
      throw ConfigError("P", "must be non-negative");
    if (protocol.max_forward < 1)
      throw ConfigError("Q", "must be at least 1");
  }
}

ExperimentConfig parse_config(std::string_view text)
{
  ExperimentConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    apply_config_key(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

ExperimentConfig read_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

} // namespace coopcsma
