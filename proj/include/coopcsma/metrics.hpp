#pragma once

#include "coopcsma/csma_engine.hpp"
#include "coopcsma/protocols.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace coopcsma {

struct NodeMetrics {
  std::uint64_t delivered = 0; ///< own nats only; forwarded data never counts
  double transmit_time = 0.0;  ///< includes forwarding and collided attempts
  double throughput = 0.0;     ///< S_k, nats per time unit
  double avg_power = 0.0;      ///< E * transmit_time / clock
  /// Energy per own nat. +inf when the node spent energy without delivering;
  /// nullopt when it neither transmitted nor delivered.
  std::optional<double> bit_cost;
};

struct MetricsReport {
  std::vector<NodeMetrics> nodes;
  double clock = 0.0;
  double tx_power = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t idle_slots = 0;
  std::uint64_t sense_slots = 0;

  double mean_throughput = 0.0;
  double min_throughput = 0.0;
  double max_throughput = 0.0;
  double mean_power = 0.0;
  double max_power = 0.0;
  /// Over nodes with a defined bit-cost; may be +inf.
  double mean_bit_cost = 0.0;
  double min_bit_cost = 0.0;
  double max_bit_cost = 0.0;
};

/// Throws std::invalid_argument when the clock is not positive.
MetricsReport finalize(const Accumulators& acc, double tx_power);

/// Pools replications of one network by summing accumulators, so per-node
/// rates come out weighted by each replication's clock.
Accumulators pool(std::span<const Accumulators> runs);

struct Gains {
  double throughput_gain = 1.0;  ///< mean S over baseline mean S
  double bitcost_increase = 1.0; ///< max B over baseline max B
};

Gains gains_vs_baseline(const MetricsReport& report, const MetricsReport& baseline);

/// W / (max bit-cost * mean throughput). Throws std::invalid_argument unless
/// both are positive and finite and W > 0.
double lifetime(double energy_budget, const MetricsReport& report);

// CSV columns, fixed order:
// protocol,H,Q,P,tau,sigma,snr_db,seed,node_id,delivered_nats,transmit_time,
// clock,throughput,avg_power,bit_cost,lifetime
// The trailing lifetime column is filled only on the node_id=ALL row, whose
// throughput is the mean S, avg_power the mean power and bit_cost the max B.
struct CsvCell {
  ProtocolConfig protocol;
  double tau = 0.0;
  double sigma = 0.0;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kMetricsCsvHeader =
    "protocol,H,Q,P,tau,sigma,snr_db,seed,node_id,delivered_nats,transmit_time,clock,"
    "throughput,avg_power,bit_cost,lifetime";

/// n per-node rows followed by one ALL row; no header.
void write_csv_rows(std::ostream& out, const CsvCell& cell, const MetricsReport& report,
                    double energy_budget);

} // namespace coopcsma
