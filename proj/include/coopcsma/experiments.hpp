#pragma once

#include "coopcsma/config.hpp"
#include "coopcsma/metrics.hpp"
#include "coopcsma/simulation.hpp"
#include "coopcsma/topology.hpp"

#include <iosfwd>
#include <vector>

namespace coopcsma {

/// One (SNR, replication, protocol) simulation.
struct CellSpec {
  ProtocolConfig protocol;
  double snr_db = 0.0;
  std::size_t replication = 0;
  std::uint64_t seed = 0; ///< drives both placement and contention
};

struct CellResult {
  CellSpec spec;
  double tx_power = 0.0;
  MetricsReport report;
};

/// Network of one replication: placement from `seed` (or the configured
/// file), transmit power calibrated to `snr_db` at the farthest node.
/// A file that carries only explicit rates is used verbatim.
RateTable build_network(const ExperimentConfig& config, double snr_db, std::uint64_t seed);

/// Cells in output order: SNR, then replication, then protocol.
std::vector<CellSpec> expand_cells(const ExperimentConfig& config,
                                   const std::vector<ProtocolConfig>& protocols);

/// Runs every cell on a bounded worker pool; results keep `expand_cells` order.
std::vector<CellResult> run_cells(const ExperimentConfig& config,
                                  const std::vector<CellSpec>& cells);

/// Header plus per-node and ALL rows for every cell.
void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<CellResult>& results);

std::vector<CellResult> run_experiment(const ExperimentConfig& config,
                                       const std::vector<ProtocolConfig>& protocols,
                                       std::ostream& csv);

/// Direct Link, CoopMAC, fairMAC(H=1, Q=1..5) and fairMAC(H=inf, Q=1..5).
std::vector<ProtocolConfig> tradeoff_protocols(int max_pending);

/// Direct Link, CoopMAC and the configured fairMAC variant.
std::vector<ProtocolConfig> lifetime_protocols(const ProtocolConfig& fairmac);

struct Stat {
  double mean = 0.0;
  double stddev = 0.0; ///< sample standard deviation; 0 for a single value
};

Stat mean_and_stddev(const std::vector<double>& values);

/// Replication statistics of one (protocol, SNR) pair. Gains and the
/// lifetime ratio are paired against Direct Link of the same replication.
struct CellSummary {
  ProtocolConfig protocol;
  double snr_db = 0.0;
  Stat throughput;       ///< mean per-node S
  Stat max_bit_cost;
  Stat lifetime;
  Stat throughput_gain;
  Stat bitcost_increase;
  Stat lifetime_ratio;
};

/// Throws std::invalid_argument if Direct Link is missing for some SNR and seed.
std::vector<CellSummary> summarize(const std::vector<CellResult>& results, double energy_budget);

void write_summary_table(std::ostream& out, const std::vector<CellSummary>& summary);

/// Lifetime study CSV: one row per replication plus one `mean` row per
/// (protocol, SNR):
/// protocol,H,Q,P,snr_db,seed,effective_throughput,lifetime,lifetime_ratio
inline constexpr const char* kLifetimeCsvHeader =
    "protocol,H,Q,P,snr_db,seed,effective_throughput,lifetime,lifetime_ratio";

std::vector<CellSummary> lifetime_study(const ExperimentConfig& config,
                                        const ProtocolConfig& fairmac, std::ostream& csv);

} // namespace coopcsma
