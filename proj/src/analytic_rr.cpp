#include "coopcsma/analytic_rr.hpp"

#include "coopcsma/helper_selection.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coopcsma {

double RrMetrics::mean_bit_cost() const
{
  if (bit_cost.empty())
    return 0.0;
  return std::accumulate(bit_cost.begin(), bit_cost.end(), 0.0) /
         static_cast<double>(bit_cost.size());
}

double RrMetrics::max_bit_cost() const
{
  return bit_cost.empty() ? 0.0 : *std::max_element(bit_cost.begin(), bit_cost.end());
}

RrMetrics rr_metrics(const RateTable& rates, const RrAssignment& assignment, double tx_power)
{
  const std::size_t n = rates.n_nodes();
  if (assignment.routes.size() != n)
    throw std::invalid_argument("rr_metrics: one route per node required");

  RrMetrics m;
  m.times.resize(n);
  for (NodeId k = 0; k < n; ++k) {
    const auto& route = assignment.routes[k];
    if (route.is_direct())
      continue;
    const NodeId h = *route.relay;
    if (h >= n)
      throw std::invalid_argument("rr_metrics: helper id out of range");
    if (!is_eligible(k, h, rates))
      throw std::invalid_argument("rr_metrics: node " + std::to_string(h) +
                                  " is not an eligible helper of node " + std::to_string(k));
    if (!assignment.routes[h].is_direct())
      throw std::invalid_argument("rr_metrics: helper " + std::to_string(h) +
                                  " must transmit directly");
    ++m.times[h].forwarded_per_round;
  }

  for (NodeId k = 0; k < n; ++k) {
    auto& t = m.times[k];
    const auto& route = assignment.routes[k];
    if (route.is_direct()) {
      t.travel_time = 1.0 / rates.direct(k);
      t.transmission_time = (t.forwarded_per_round + 1) / rates.direct(k);
    } else {
      const NodeId h = *route.relay;
      t.travel_time = two_hop_cost(k, h, rates);
      t.transmission_time = 1.0 / rates.link(k, h);
    }
    m.round_length += t.travel_time;
  }
  m.throughput = 1.0 / m.round_length;
  m.bit_cost.reserve(n);
  for (const auto& t : m.times)
    m.bit_cost.push_back(t.transmission_time * tx_power);
  return m;
}

RrAssignment rr_direct_assignment(std::size_t n_nodes)
{
  return RrAssignment{std::vector<RrRoute>(n_nodes, RrRoute::direct())};
}

namespace {

RrAssignment greedy(const RateTable& rates)
{
  const std::size_t n = rates.n_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return rates.direct(a) > rates.direct(b); });

  RrAssignment a = rr_direct_assignment(n);
  std::vector<bool> settled(n, false);
  for (NodeId k : order) {
    double best = 1.0 / rates.direct(k);
    for (NodeId h = 0; h < n; ++h) {
      if (!settled[h] || !a.routes[h].is_direct() || !is_eligible(k, h, rates))
        continue;
      if (const double c = two_hop_cost(k, h, rates); c < best) {
        best = c;
        a.routes[k] = RrRoute::via(h);
      }
    }
    settled[k] = true;
  }
  return a;
}

RrAssignment exhaustive(const RateTable& rates)
{
  const std::size_t n = rates.n_nodes();
  if (n > kRrExhaustiveMaxNodes)
    throw std::length_error("rr_best_assignment: exhaustive search supports at most " +
                            std::to_string(kRrExhaustiveMaxNodes) + " nodes");

  // options[k]: direct first, then every eligible helper
  std::vector<std::vector<RrRoute>> options(n);
  for (NodeId k = 0; k < n; ++k) {
    options[k].push_back(RrRoute::direct());
    for (NodeId h = 0; h < n; ++h)
      if (is_eligible(k, h, rates))
        options[k].push_back(RrRoute::via(h));
  }

  std::vector<std::size_t> pick(n, 0);
  RrAssignment current = rr_direct_assignment(n);
  RrAssignment best = current;
  double best_length = std::numeric_limits<double>::infinity();
  while (true) {
    bool valid = true;
    double length = 0.0;
    for (NodeId k = 0; k < n && valid; ++k) {
      const auto& r = current.routes[k];
      if (r.is_direct()) {
        length += 1.0 / rates.direct(k);
      } else {
        valid = current.routes[*r.relay].is_direct();
        length += two_hop_cost(k, *r.relay, rates);
      }
    }
    if (valid && length < best_length) {
      best_length = length;
      best = current;
    }
    std::size_t k = 0;
    for (; k < n; ++k) {
      if (++pick[k] < options[k].size()) {
        current.routes[k] = options[k][pick[k]];
        break;
      }
      pick[k] = 0;
      current.routes[k] = options[k][0];
    }
    if (k == n)
      break;
  }
  return best;
}

} // namespace

RrAssignment rr_best_assignment(const RateTable& rates, RrSearch search)
{
  return search == RrSearch::Exhaustive ? exhaustive(rates) : greedy(rates);
}

} // namespace coopcsma
