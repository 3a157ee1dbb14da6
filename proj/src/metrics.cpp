#include "coopcsma/metrics.hpp"

#include "coopcsma/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace coopcsma {

MetricsReport finalize(const Accumulators& acc, double tx_power)
{
  if (!(acc.clock > 0.0))
    throw std::invalid_argument("finalize: clock must be positive");
  MetricsReport r;
  r.clock = acc.clock;
  r.tx_power = tx_power;
  r.successes = acc.successes;
  r.collisions = acc.collisions;
  r.idle_slots = acc.idle_slots;
  r.sense_slots = acc.sense_slots;

  const std::size_t n = acc.n_nodes();
  r.nodes.resize(n);
  double sum_s = 0.0;
  double sum_p = 0.0;
  double sum_b = 0.0;
  std::size_t defined_b = 0;
  r.min_throughput = std::numeric_limits<double>::infinity();
  r.min_bit_cost = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    auto& m = r.nodes[k];
    m.delivered = acc.delivered[k];
    m.transmit_time = acc.transmit_time[k];
    m.throughput = static_cast<double>(m.delivered) / acc.clock;
    m.avg_power = tx_power * m.transmit_time / acc.clock;
    if (m.delivered > 0)
      m.bit_cost = tx_power * m.transmit_time / static_cast<double>(m.delivered);
    else if (m.transmit_time > 0.0)
      m.bit_cost = std::numeric_limits<double>::infinity();

    sum_s += m.throughput;
    sum_p += m.avg_power;
    r.min_throughput = std::min(r.min_throughput, m.throughput);
    r.max_throughput = std::max(r.max_throughput, m.throughput);
    r.max_power = std::max(r.max_power, m.avg_power);
    if (m.bit_cost) {
      sum_b += *m.bit_cost;
      ++defined_b;
      r.min_bit_cost = std::min(r.min_bit_cost, *m.bit_cost);
      r.max_bit_cost = std::max(r.max_bit_cost, *m.bit_cost);
    }
  }
  if (n > 0) {
    r.mean_throughput = sum_s / static_cast<double>(n);
    r.mean_power = sum_p / static_cast<double>(n);
  }
  if (defined_b > 0)
    r.mean_bit_cost = sum_b / static_cast<double>(defined_b);
  else
    r.min_bit_cost = 0.0;
  return r;
}

Accumulators pool(std::span<const Accumulators> runs)
{
  if (runs.empty())
    throw std::invalid_argument("pool: nothing to merge");
  Accumulators total(runs.front().n_nodes());
  for (const auto& run : runs) {
    if (run.n_nodes() != total.n_nodes())
      throw std::invalid_argument("pool: replications of different networks");
    total.clock += run.clock;
    total.idle_slots += run.idle_slots;
    total.sense_slots += run.sense_slots;
    total.successes += run.successes;
    total.collisions += run.collisions;
    for (std::size_t k = 0; k < total.n_nodes(); ++k) {
      total.transmit_time[k] += run.transmit_time[k];
      total.delivered[k] += run.delivered[k];
    }
  }
  return total;
}

Gains gains_vs_baseline(const MetricsReport& report, const MetricsReport& baseline)
{
  if (!(baseline.mean_throughput > 0.0))
    throw std::invalid_argument("gains_vs_baseline: baseline has zero throughput");
  if (!(baseline.max_bit_cost > 0.0))
    throw std::invalid_argument("gains_vs_baseline: baseline bit-cost undefined");
  return {report.mean_throughput / baseline.mean_throughput,
          report.max_bit_cost / baseline.max_bit_cost};
}

double lifetime(double energy_budget, const MetricsReport& report)
{
  if (!(energy_budget > 0.0))
    throw std::invalid_argument("lifetime: energy budget must be positive");
  const double b = report.max_bit_cost;
  const double s = report.mean_throughput;
  if (!(b > 0.0) || !std::isfinite(b))
    throw std::invalid_argument("lifetime: max bit-cost is zero or unbounded");
  if (!(s > 0.0))
    throw std::invalid_argument("lifetime: zero throughput");
  return energy_budget / (b * s);
}

void write_csv_rows(std::ostream& out, const CsvCell& cell, const MetricsReport& report,
                    double energy_budget)
{
  const auto& p = cell.protocol;
  std::string prefix = to_string(p.kind);
  prefix += ',';
  if (p.kind == ProtocolKind::FairMac) {
    prefix += p.max_helpers.to_string() + ',' + std::to_string(p.max_forward) + ',' +
              std::to_string(p.max_pending);
  } else {
    prefix += ",,";
  }
  prefix += ',' + format_double(cell.tau) + ',' + format_double(cell.sigma) + ',' +
            format_double(cell.snr_db) + ',' + std::to_string(cell.seed) + ',';

  std::uint64_t total_delivered = 0;
  double total_time = 0.0;
  for (std::size_t k = 0; k < report.nodes.size(); ++k) {
    const auto& m = report.nodes[k];
    total_delivered += m.delivered;
    total_time += m.transmit_time;
    out << prefix << k << ',' << m.delivered << ',' << format_double(m.transmit_time) << ','
        << format_double(report.clock) << ',' << format_double(m.throughput) << ','
        << format_double(m.avg_power) << ','
        << format_double(m.bit_cost.value_or(std::numeric_limits<double>::quiet_NaN())) << ",\n";
  }
  double t = std::numeric_limits<double>::quiet_NaN();
  try {
    t = lifetime(energy_budget, report);
  } catch (const std::invalid_argument&) {
  }
  out << prefix << "ALL," << total_delivered << ',' << format_double(total_time) << ','
      << format_double(report.clock) << ',' << format_double(report.mean_throughput) << ','
      << format_double(report.mean_power) << ',' << format_double(report.max_bit_cost) << ','
      << format_double(t) << '\n';
}

} // namespace coopcsma
