#include "coopcsma/experiments.hpp"

#include "coopcsma/text_format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

namespace coopcsma {

RateTable build_network(const ExperimentConfig& config, double snr_db, std::uint64_t seed)
{
  Topology topology;
  if (config.topology_file) {
    auto file = read_network_file(*config.topology_file);
    if (!file.topology)
      return *file.rates;
    topology = std::move(*file.topology);
  } else {
    topology = generate_topology(config.n_nodes, seed, config.gamma);
  }
  return build_rate_table(topology, calibrate_power(topology, snr_db));
}

std::vector<CellSpec> expand_cells(const ExperimentConfig& config,
                                   const std::vector<ProtocolConfig>& protocols)
{
  std::vector<CellSpec> cells;
  cells.reserve(config.snr_db.size() * config.replications * protocols.size());
  for (double snr : config.snr_db)
    for (std::size_t r = 0; r < config.replications; ++r)
      for (const auto& p : protocols)
        cells.push_back({p, snr, r, config.seed + r});
  return cells;
}

std::vector<CellResult> run_cells(const ExperimentConfig& config,
                                  const std::vector<CellSpec>& cells)
{
  std::vector<CellResult> results(cells.size());
  std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(cells.size(), 1));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const auto& spec = cells[i];
        const RateTable rates = build_network(config, spec.snr_db, spec.seed);
        SimulationOptions options;
        options.csma = config.csma;
        options.competitions = config.competitions;
        options.seed = spec.seed;
        const auto run = simulate(rates, spec.protocol, options);
        results[i] = {spec, rates.tx_power(), finalize(run.totals, rates.tx_power())};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);
  return results;
}

void write_experiment_csv(std::ostream& out, const ExperimentConfig& config,
                          const std::vector<CellResult>& results)
{
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : results) {
    const CsvCell cell{r.spec.protocol, config.csma.tau, config.csma.sigma, r.spec.snr_db,
                       r.spec.seed};
    write_csv_rows(out, cell, r.report, config.energy_budget);
  }
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config,
                                       const std::vector<ProtocolConfig>& protocols,
                                       std::ostream& csv)
{
  config.validate();
  auto results = run_cells(config, expand_cells(config, protocols));
  write_experiment_csv(csv, config, results);
  return results;
}

std::vector<ProtocolConfig> tradeoff_protocols(int max_pending)
{
  std::vector<ProtocolConfig> protocols{ProtocolConfig::direct_link(), ProtocolConfig::coopmac()};
  for (const HelperCap cap : {HelperCap::at_most(1), HelperCap::unbounded()})
    for (int q = 1; q <= 5; ++q)
      protocols.push_back(ProtocolConfig::fairmac(cap, max_pending, q));
  return protocols;
}

std::vector<ProtocolConfig> lifetime_protocols(const ProtocolConfig& fairmac)
{
  return {ProtocolConfig::direct_link(), ProtocolConfig::coopmac(), fairmac};
}

Stat mean_and_stddev(const std::vector<double>& values)
{
  Stat s;
  if (values.empty())
    return s;
  double sum = 0.0;
  for (double v : values)
    sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values)
      sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

namespace {

double lifetime_or_nan(double w, const MetricsReport& r)
{
  try {
    return lifetime(w, r);
  } catch (const std::invalid_argument&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

const CellResult& direct_of(const std::vector<CellResult>& results, const CellSpec& spec)
{
  for (const auto& r : results) {
    if (r.spec.protocol.kind == ProtocolKind::DirectLink && r.spec.snr_db == spec.snr_db &&
        r.spec.seed == spec.seed)
      return r;
  }
  throw std::invalid_argument("summarize: no Direct Link baseline for snr_db=" +
                              format_double(spec.snr_db) + " seed=" + std::to_string(spec.seed));
}

} // namespace

std::vector<CellSummary> summarize(const std::vector<CellResult>& results, double energy_budget)
{
  struct Samples {
    std::vector<double> s, b, t, gain, increase, ratio;
  };
  // keep first-appearance order of (protocol, snr)
  std::vector<std::pair<ProtocolConfig, double>> order;
  std::vector<Samples> samples;
  for (const auto& r : results) {
    auto it = std::find_if(order.begin(), order.end(), [&](const auto& key) {
      return key.first == r.spec.protocol && key.second == r.spec.snr_db;
    });
    std::size_t idx = static_cast<std::size_t>(it - order.begin());
    if (it == order.end()) {
      order.emplace_back(r.spec.protocol, r.spec.snr_db);
      samples.emplace_back();
    }
    const auto& base = direct_of(results, r.spec);
    const Gains g = gains_vs_baseline(r.report, base.report);
    const double t = lifetime_or_nan(energy_budget, r.report);
    auto& smp = samples[idx];
    smp.s.push_back(r.report.mean_throughput);
    smp.b.push_back(r.report.max_bit_cost);
    smp.t.push_back(t);
    smp.gain.push_back(g.throughput_gain);
    smp.increase.push_back(g.bitcost_increase);
    smp.ratio.push_back(t / lifetime_or_nan(energy_budget, base.report));
  }

  std::vector<CellSummary> summary;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& smp = samples[i];
    summary.push_back({order[i].first, order[i].second, mean_and_stddev(smp.s),
                       mean_and_stddev(smp.b), mean_and_stddev(smp.t), mean_and_stddev(smp.gain),
                       mean_and_stddev(smp.increase), mean_and_stddev(smp.ratio)});
  }
  return summary;
}

void write_summary_table(std::ostream& out, const std::vector<CellSummary>& summary)
{
  const auto flags = out.flags();
  out << std::left << std::setw(26) << "protocol" << std::right << std::setw(8) << "snr_db"
      << std::setw(13) << "S_mean" << std::setw(13) << "B_max" << std::setw(11) << "S_gain"
      << std::setw(11) << "B_incr" << std::setw(11) << "life_ratio" << std::setw(11) << "(sd)"
      << '\n';
  out << std::fixed;
  for (const auto& s : summary) {
    out << std::left << std::setw(26) << s.protocol.label() << std::right << std::setprecision(1)
        << std::setw(8) << s.snr_db << std::setprecision(6) << std::setw(13) << s.throughput.mean
        << std::setw(13) << s.max_bit_cost.mean << std::setprecision(4) << std::setw(11)
        << s.throughput_gain.mean << std::setw(11) << s.bitcost_increase.mean << std::setw(11)
        << s.lifetime_ratio.mean << std::setw(11) << s.lifetime_ratio.stddev << '\n';
  }
  out.flags(flags);
}

std::vector<CellSummary> lifetime_study(const ExperimentConfig& config,
                                        const ProtocolConfig& fairmac, std::ostream& csv)
{
  config.validate();
  const auto results = run_cells(config, expand_cells(config, lifetime_protocols(fairmac)));
  const auto summary = summarize(results, config.energy_budget);

  auto protocol_columns = [](const ProtocolConfig& p) {
    std::string cols = to_string(p.kind);
    cols += ',';
    if (p.kind == ProtocolKind::FairMac)
      cols += p.max_helpers.to_string() + ',' + std::to_string(p.max_forward) + ',' +
              std::to_string(p.max_pending);
    else
      cols += ",,";
    return cols;
  };

  csv << kLifetimeCsvHeader << '\n';
  for (const auto& r : results) {
    const auto& base = direct_of(results, r.spec);
    const double t = lifetime_or_nan(config.energy_budget, r.report);
    csv << protocol_columns(r.spec.protocol) << ',' << format_double(r.spec.snr_db) << ','
        << r.spec.seed << ',' << format_double(r.report.mean_throughput) << ','
        << format_double(t) << ','
        << format_double(t / lifetime_or_nan(config.energy_budget, base.report)) << '\n';
  }
  for (const auto& s : summary) {
    csv << protocol_columns(s.protocol) << ',' << format_double(s.snr_db) << ",mean,"
        << format_double(s.throughput.mean) << ',' << format_double(s.lifetime.mean) << ','
        << format_double(s.lifetime_ratio.mean) << '\n';
  }
  return summary;
}

} // namespace coopcsma
