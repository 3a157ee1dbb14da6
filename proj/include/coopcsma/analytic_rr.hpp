#pragma once

#include "coopcsma/topology.hpp"

#include <optional>
#include <vector>

namespace coopcsma {

// Closed-form Round-Robin (TDMA) model: nodes take turns, one packet of
// 1 nat each per round. A relayed packet is forwarded immediately by its
// helper inside the source's turn.

/// Route of one node's own packet: direct (no relay) or via a helper.
struct RrRoute {
  std::optional<NodeId> relay;

  static RrRoute direct() { return {}; }
  static RrRoute via(NodeId h) { return {h}; }
  bool is_direct() const { return !relay.has_value(); }

  friend bool operator==(const RrRoute&, const RrRoute&) = default;
};

struct RrAssignment {
  std::vector<RrRoute> routes;
};

struct RrNodeTimes {
  double travel_time = 0.0;       ///< s_k: time one own packet occupies the channel
  double transmission_time = 0.0; ///< t_k: time node k itself transmits per round
  int forwarded_per_round = 0;    ///< sources routed through k
};

struct RrMetrics {
  std::vector<RrNodeTimes> times;
  double round_length = 0.0; ///< sum of travel times
  double throughput = 0.0;   ///< identical for every node
  std::vector<double> bit_cost;

  double mean_bit_cost() const;
  double max_bit_cost() const;
};

/// Throws std::invalid_argument when a route uses an ineligible helper or a
/// helper that does not itself transmit directly.
RrMetrics rr_metrics(const RateTable& rates, const RrAssignment& assignment, double tx_power);

enum class RrSearch {
  /// Nodes in descending direct rate pick their best eligible helper among
  /// nodes already settled as direct.
  Greedy,
  /// Enumerates every valid route vector; limited to kRrExhaustiveMaxNodes.
  Exhaustive,
};

inline constexpr std::size_t kRrExhaustiveMaxNodes = 12;

/// Assignment minimizing the round length (maximizing throughput).
/// Exhaustive mode throws std::length_error above kRrExhaustiveMaxNodes.
RrAssignment rr_best_assignment(const RateTable& rates, RrSearch search = RrSearch::Greedy);

RrAssignment rr_direct_assignment(std::size_t n_nodes);

} // namespace coopcsma
