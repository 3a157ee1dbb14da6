#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace coopcsma {

using NodeId = std::uint32_t;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

double distance(Vec2 a, Vec2 b);

/// Node placement around an access point fixed at the origin.
struct Topology {
  std::vector<Vec2> positions;
  double pathloss_exponent = -3.0;

  std::size_t n_nodes() const { return positions.size(); }
  double distance_to_ap(NodeId k) const;
  double distance_between(NodeId k, NodeId l) const;

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Achievable rates in nats per time unit. The pairwise diagonal is unused.
class RateTable {
public:
  RateTable() = default;
  /// `pairwise` is row-major n x n; the diagonal is ignored and stored as 0.
  RateTable(std::vector<double> direct, std::vector<double> pairwise, double tx_power);

  std::size_t n_nodes() const { return direct_.size(); }
  double direct(NodeId k) const { return direct_[k]; }
  double link(NodeId k, NodeId l) const { return pairwise_[k * direct_.size() + l]; }
  double tx_power() const { return tx_power_; }

  std::span<const double> direct_rates() const { return direct_; }
  std::span<const double> pairwise_rates() const { return pairwise_; }

  /// Copy with every rate multiplied by `factor`.
  RateTable scaled(double factor) const;

  friend bool operator==(const RateTable&, const RateTable&) = default;

private:
  std::vector<double> direct_;
  std::vector<double> pairwise_;
  double tx_power_ = 1.0;
};

/// Uniform placement over the closed unit disk (radius = sqrt(u)), re-drawing
/// any point closer than kMinApDistance to the AP.
Topology generate_topology(std::size_t n_nodes, std::uint64_t seed, double gamma);

inline constexpr double kMinApDistance = 1e-9;

/// Transmit power that puts the farthest node at `target_snr_db` at the AP,
/// under unit noise variance and SNR = E * d^gamma.
double calibrate_power(const Topology& topology, double target_snr_db);

double snr(double tx_power, double dist, double gamma);

/// R = ln(1 + E d^gamma) for every node->AP and node->node link.
/// Throws std::invalid_argument if two nodes coincide.
RateTable build_rate_table(const Topology& topology, double tx_power);

/// Wraps explicit rates verbatim. `pairwise` is row-major n x n.
RateTable load_rates(std::vector<double> direct, std::vector<double> pairwise,
                     double tx_power = 1.0);

/// Replayable network description: a placement, explicit rates, or both.
struct NetworkFile {
  std::optional<Topology> topology;
  std::optional<RateTable> rates;
};

NetworkFile read_network_file(const std::filesystem::path& path);
NetworkFile parse_network(std::string_view text);
std::string serialize_network(const NetworkFile& network);
void write_network_file(const std::filesystem::path& path, const NetworkFile& network);

} // namespace coopcsma
