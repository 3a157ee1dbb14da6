#pragma once

#include "coopcsma/topology.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace coopcsma {

/// Maximum number of helpers a source keeps; either a bound or unbounded.
class HelperCap {
public:
  static HelperCap at_most(std::size_t n);
  static HelperCap unbounded() { return HelperCap(); }

  bool is_unbounded() const { return unbounded_; }
  /// Valid only when bounded.
  std::size_t bound() const { return bound_; }
  std::size_t clamp(std::size_t count) const;
  /// "inf" or the decimal bound.
  std::string to_string() const;
  /// Accepts a positive integer or "inf".
  static HelperCap parse(std::string_view text);

  friend bool operator==(const HelperCap&, const HelperCap&) = default;

private:
  HelperCap() = default;
  bool unbounded_ = true;
  std::size_t bound_ = 0;
};

/// Ordered helpers of one source, best first.
struct HelperList {
  NodeId source = 0;
  std::vector<NodeId> helpers;
  std::vector<double> costs; ///< two-hop time per nat through each helper

  bool empty() const { return helpers.empty(); }
  std::size_t size() const { return helpers.size(); }
};

/// Time per nat going k -> l -> AP: 1/R_kl + 1/R_l.
double two_hop_cost(NodeId k, NodeId l, const RateTable& rates);

/// True iff relaying through h is strictly faster than k's direct link.
bool is_eligible(NodeId k, NodeId h, const RateTable& rates);

/// All eligible helpers of k ordered by two-hop cost (ties by id), truncated to `cap`.
HelperList rank_helpers(NodeId k, const RateTable& rates, HelperCap cap);

std::vector<HelperList> rank_all_helpers(const RateTable& rates, HelperCap cap);

} // namespace coopcsma
