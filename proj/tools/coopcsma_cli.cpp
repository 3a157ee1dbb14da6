// coopcsma: command-line driver for the cooperative slotted-CSMA simulator.

#include "coopcsma/analytic_rr.hpp"
#include "coopcsma/config.hpp"
#include "coopcsma/experiments.hpp"
#include "coopcsma/helper_selection.hpp"
#include "coopcsma/metrics.hpp"
#include "coopcsma/simulation.hpp"
#include "coopcsma/text_format.hpp"
#include "coopcsma/topology.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>

using namespace coopcsma;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> competitions;
  std::vector<std::string> overrides;
  std::string out;
  bool paper_scale = false;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
  cmd->add_option("--config", o.config, "Experiment config file (key = value)");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--competitions", o.competitions, "Channel competitions per cell");
  cmd->add_option("--set", o.overrides, "Config override key=value (repeatable)");
  cmd->add_option("--out", o.out, "Output CSV path");
  cmd->add_flag("--paper-scale", o.paper_scale, "Use 1.6e7 competitions per cell");
}

ExperimentConfig load(const CommonOptions& o, std::vector<double> default_snr)
{
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : read_config(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw ConfigError(kv, "override must look like key=value");
    apply_config_key(c, trim(std::string_view(kv).substr(0, eq)),
                     std::string_view(kv).substr(eq + 1));
  }
  if (o.seed)
    c.seed = *o.seed;
  if (o.paper_scale)
    c.competitions = kPaperScaleCompetitions;
  if (o.competitions)
    c.competitions = *o.competitions;
  if (!o.out.empty())
    c.out = o.out;
  if (c.snr_db.empty())
    c.snr_db = std::move(default_snr);
  c.validate();
  return c;
}

/// Opens the configured output or falls back to stdout.
std::unique_ptr<std::ostream, void (*)(std::ostream*)> open_out(const ExperimentConfig& c)
{
  if (!c.out)
    return {&std::cout, [](std::ostream*) {}};
  auto* f = new std::ofstream(*c.out);
  if (!*f) {
    delete f;
    throw ConfigError("out", "cannot write " + c.out->string());
  }
  return {f, [](std::ostream* s) { delete s; }};
}

int cmd_topology(std::optional<std::string> in, std::size_t n, std::uint64_t seed, double gamma,
                 std::optional<double> snr_db, const std::string& out)
{
  NetworkFile network = in ? read_network_file(*in) : NetworkFile{};
  if (!in)
    network.topology = generate_topology(n, seed, gamma);
  if (snr_db && network.topology)
    network.rates = build_rate_table(*network.topology,
                                     calibrate_power(*network.topology, *snr_db));

  if (!out.empty()) {
    write_network_file(out, network);
  } else if (!in) {
    std::cout << serialize_network(network);
  }
  if (in) {
    const std::size_t count =
        network.topology ? network.topology->n_nodes() : network.rates->n_nodes();
    std::cout << "nodes: " << count << '\n';
    if (network.rates) {
      for (const auto& list : rank_all_helpers(*network.rates, HelperCap::unbounded())) {
        std::cout << "node " << list.source << " R=" << format_double(network.rates->direct(list.source))
                  << " helpers:";
        for (auto h : list.helpers)
          std::cout << ' ' << h;
        std::cout << '\n';
      }
    }
  }
  return 0;
}

int cmd_analytic(bool toy, std::optional<std::string> topology_file, double snr_db,
                 bool exhaustive, bool direct_only, const std::string& out)
{
  RateTable rates;
  if (toy) {
    rates = load_rates({1, 1, 3}, {0, 3, 3, 3, 0, 3, 3, 3, 0}, 1.0);
  } else if (topology_file) {
    auto network = read_network_file(*topology_file);
    if (network.rates)
      rates = *network.rates;
    else
      rates = build_rate_table(*network.topology, calibrate_power(*network.topology, snr_db));
  } else {
    throw std::invalid_argument("analytic: give --toy or --topology <file>");
  }
  const auto assignment =
      direct_only ? rr_direct_assignment(rates.n_nodes())
                  : rr_best_assignment(rates, exhaustive ? RrSearch::Exhaustive : RrSearch::Greedy);
  const auto m = rr_metrics(rates, assignment, rates.tx_power());

  std::cout << std::left << std::setw(6) << "node" << std::setw(10) << "route" << std::right
            << std::setw(14) << "s_k" << std::setw(14) << "t_k" << std::setw(14) << "S"
            << std::setw(14) << "B_k" << '\n';
  std::ostringstream csv;
  csv << "node_id,route,travel_time,transmission_time,throughput,bit_cost\n";
  for (NodeId k = 0; k < rates.n_nodes(); ++k) {
    const auto& r = assignment.routes[k];
    const std::string route = r.is_direct() ? "direct" : "via " + std::to_string(*r.relay);
    std::cout << std::left << std::setw(6) << k << std::setw(10) << route << std::right
              << std::setprecision(6) << std::setw(14) << m.times[k].travel_time << std::setw(14)
              << m.times[k].transmission_time << std::setw(14) << m.throughput << std::setw(14)
              << m.bit_cost[k] << '\n';
    csv << k << ',' << (r.is_direct() ? "direct" : "via:" + std::to_string(*r.relay)) << ','
        << format_double(m.times[k].travel_time) << ','
        << format_double(m.times[k].transmission_time) << ',' << format_double(m.throughput)
        << ',' << format_double(m.bit_cost[k]) << '\n';
  }
  std::cout << "mean bit-cost " << m.mean_bit_cost() << ", max bit-cost " << m.max_bit_cost()
            << '\n';
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f)
      throw std::runtime_error("cannot write " + out);
    f << csv.str();
  }
  return 0;
}

int cmd_simulate(const CommonOptions& o, const std::string& trace_path)
{
  ExperimentConfig c = load(o, {0.0});
  const RateTable rates = build_network(c, c.snr_db.front(), c.seed);
  std::ofstream trace_file;
  std::optional<TraceSink> trace;
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    if (!trace_file)
      throw std::runtime_error("cannot write trace " + trace_path);
    trace.emplace(trace_file);
  }
  SimulationOptions options;
  options.csma = c.csma;
  options.competitions = c.competitions;
  options.seed = c.seed;
  options.trace = trace ? &*trace : nullptr;
  const auto run = simulate(rates, c.protocol, options);
  const auto report = finalize(run.totals, rates.tx_power());

  auto out = open_out(c);
  *out << kMetricsCsvHeader << '\n';
  write_csv_rows(*out, {c.protocol, c.csma.tau, c.csma.sigma, c.snr_db.front(), c.seed}, report,
                 c.energy_budget);
  std::cerr << c.protocol.label() << ": mean S " << report.mean_throughput << ", max B "
            << report.max_bit_cost << ", events " << run.events;
  if (trace)
    std::cerr << ", trace hash " << std::hex << run.trace_hash << std::dec;
  std::cerr << '\n';
  return 0;
}

int cmd_sweep(const CommonOptions& o)
{
  ExperimentConfig c = load(o, {0.0});
  auto out = open_out(c);
  const auto results = run_experiment(c, tradeoff_protocols(c.protocol.max_pending), *out);
  write_summary_table(c.out ? std::cout : std::cerr, summarize(results, c.energy_budget));
  return 0;
}

int cmd_lifetime(const CommonOptions& o)
{
  ExperimentConfig c = load(o, {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20});
  ProtocolConfig fairmac = c.protocol;
  if (fairmac.kind != ProtocolKind::FairMac)
    fairmac = ProtocolConfig::fairmac(HelperCap::at_most(1), c.protocol.max_pending, 1);
  auto out = open_out(c);
  const auto summary = lifetime_study(c, fairmac, *out);
  write_summary_table(c.out ? std::cout : std::cerr, summary);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Cooperative slotted-CSMA simulator: Direct Link, CoopMAC and fairMAC"};
  app.require_subcommand(1);

  auto* topo = app.add_subcommand("topology", "Generate or inspect a network file");
  std::optional<std::string> topo_in;
  std::size_t topo_n = 32;
  std::uint64_t topo_seed = 1;
  double topo_gamma = -3.0;
  std::optional<double> topo_snr;
  std::string topo_out;
  topo->add_option("--in", topo_in, "Inspect an existing network file");
  topo->add_option("--n", topo_n, "Number of nodes");
  topo->add_option("--seed", topo_seed, "Placement seed");
  topo->add_option("--gamma", topo_gamma, "Path-loss exponent");
  topo->add_option("--snr-db", topo_snr, "Also write calibrated rates for this SNR");
  topo->add_option("--out", topo_out, "Write the network file here");

  auto* analytic = app.add_subcommand("analytic", "Round-Robin closed-form throughput/bit-cost");
  bool toy = false;
  bool exhaustive = false;
  bool direct_only = false;
  std::optional<std::string> an_topology;
  double an_snr = 0.0;
  std::string an_out;
  analytic->add_flag("--toy", toy, "Three-node example network");
  analytic->add_option("--topology", an_topology, "Network file");
  analytic->add_option("--snr-db", an_snr, "Calibration SNR when the file has no rates");
  analytic->add_flag("--exhaustive", exhaustive, "Enumerate all route vectors");
  analytic->add_flag("--direct", direct_only, "Direct Link routes only");
  analytic->add_option("--out", an_out, "CSV output");

  CommonOptions sim_o, sweep_o, life_o;
  auto* sim = app.add_subcommand("simulate", "Run one protocol cell");
  add_common(sim, sim_o);
  std::string trace_path;
  sim->add_option("--trace", trace_path, "Write the event trace here");
  auto* sweep = app.add_subcommand("sweep", "Throughput / bit-cost tradeoff sweep over Q and H");
  add_common(sweep, sweep_o);
  auto* life = app.add_subcommand("lifetime", "Lifetime versus effective throughput over SNR");
  add_common(life, life_o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*topo)
      return cmd_topology(topo_in, topo_n, topo_seed, topo_gamma, topo_snr, topo_out);
    if (*analytic)
      return cmd_analytic(toy, an_topology, an_snr, exhaustive, direct_only, an_out);
    if (*sim)
      return cmd_simulate(sim_o, trace_path);
    if (*sweep)
      return cmd_sweep(sweep_o);
    if (*life)
      return cmd_lifetime(life_o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
