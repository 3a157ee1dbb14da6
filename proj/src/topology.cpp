#include "coopcsma/topology.hpp"

#include "coopcsma/random.hpp"
#include "coopcsma/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace coopcsma {

double distance(Vec2 a, Vec2 b)
{
  return std::hypot(a.x - b.x, a.y - b.y);
}

double Topology::distance_to_ap(NodeId k) const
{
  return distance(positions.at(k), Vec2{});
}

double Topology::distance_between(NodeId k, NodeId l) const
{
  return distance(positions.at(k), positions.at(l));
}

namespace {

void check_rate(double rate, const char* what)
{
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument(std::string(what) + " rate must be positive and finite, got " +
                                format_double(rate));
}

} // namespace

RateTable::RateTable(std::vector<double> direct, std::vector<double> pairwise, double tx_power)
    : direct_(std::move(direct)), pairwise_(std::move(pairwise)), tx_power_(tx_power)
{
  const std::size_t n = direct_.size();
  if (n == 0)
    throw std::invalid_argument("rate table needs at least one node");
  if (pairwise_.size() != n * n)
    throw std::invalid_argument("pairwise rate matrix must be n x n (" + std::to_string(n * n) +
                                " entries), got " + std::to_string(pairwise_.size()));
  if (!(tx_power_ > 0.0) || !std::isfinite(tx_power_))
    throw std::invalid_argument("transmit power must be positive and finite");
  for (double r : direct_)
    check_rate(r, "direct");
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      if (k == l)
        pairwise_[k * n + l] = 0.0;
      else
        check_rate(pairwise_[k * n + l], "pairwise");
    }
  }
}

RateTable RateTable::scaled(double factor) const
{
  auto direct = direct_;
  auto pairwise = pairwise_;
  for (double& r : direct)
    r *= factor;
  for (double& r : pairwise)
    r *= factor;
  return RateTable(std::move(direct), std::move(pairwise), tx_power_);
}

Topology generate_topology(std::size_t n_nodes, std::uint64_t seed, double gamma)
{
  if (n_nodes == 0)
    throw std::invalid_argument("generate_topology: n_nodes must be at least 1");
  Rng rng = make_rng(seed, static_cast<std::uint64_t>(RngStream::Topology));
  Topology topology;
  topology.pathloss_exponent = gamma;
  topology.positions.reserve(n_nodes);
  while (topology.positions.size() < n_nodes) {
    const double radius = std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    if (radius < kMinApDistance)
      continue;
    topology.positions.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return topology;
}

double snr(double tx_power, double dist, double gamma)
{
  return tx_power * std::pow(dist, gamma);
}

double calibrate_power(const Topology& topology, double target_snr_db)
{
  if (topology.n_nodes() == 0)
    throw std::invalid_argument("calibrate_power: empty topology");
  double farthest = 0.0;
  for (NodeId k = 0; k < topology.n_nodes(); ++k)
    farthest = std::max(farthest, topology.distance_to_ap(k));
  return std::pow(10.0, target_snr_db / 10.0) * std::pow(farthest, -topology.pathloss_exponent);
}

RateTable build_rate_table(const Topology& topology, double tx_power)
{
  if (!(tx_power > 0.0))
    throw std::invalid_argument("build_rate_table: transmit power must be positive");
  const std::size_t n = topology.n_nodes();
  const double gamma = topology.pathloss_exponent;
  auto rate = [&](double d, const std::string& link) {
    if (!(d > 0.0))
      throw std::invalid_argument("invalid topology: zero-length link " + link);
    const double r = std::log1p(snr(tx_power, d, gamma));
    if (!std::isfinite(r))
      throw std::invalid_argument("invalid topology: unbounded rate on link " + link);
    return r;
  };

  std::vector<double> direct(n);
  std::vector<double> pairwise(n * n, 0.0);
  for (NodeId k = 0; k < n; ++k) {
    direct[k] = rate(topology.distance_to_ap(k), std::to_string(k) + "->AP");
    for (NodeId l = k + 1; l < n; ++l) {
      const double r = rate(topology.distance_between(k, l),
                            std::to_string(k) + "<->" + std::to_string(l));
      pairwise[k * n + l] = r;
      pairwise[l * n + k] = r;
    }
  }
  return RateTable(std::move(direct), std::move(pairwise), tx_power);
}

RateTable load_rates(std::vector<double> direct, std::vector<double> pairwise, double tx_power)
{
  return RateTable(std::move(direct), std::move(pairwise), tx_power);
}

// ---------------------------------------------------------------------------
// Network file: '#' comments, `key = value` lines. Top section holds the
// placement, a `[rates]` line opens the explicit rate block.
//
//   n_nodes = 3
//   gamma = -3
//   position = 0.5,0.25        (one line per node, in id order)
//   [rates]
//   tx_power = 1
//   direct = 1,1,3
//   pairwise = 0,3,3           (one row per node; diagonal ignored)
// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_list(std::string_view value, std::string_view key)
{
  std::vector<double> out;
  for (auto item : split(value, ','))
    out.push_back(parse_double(item, key));
  return out;
}

std::string join(std::span<const double> values)
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i)
      out += ',';
    out += format_double(values[i]);
  }
  return out;
}

} // namespace

NetworkFile parse_network(std::string_view text)
{
  std::optional<long long> n_nodes;
  std::optional<double> gamma;
  std::vector<Vec2> positions;
  bool in_rates = false;
  bool saw_rates = false;
  double tx_power = 1.0;
  std::vector<double> direct;
  std::vector<double> pairwise;
  std::size_t pairwise_rows = 0;

  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty())
      continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line == "[rates]") {
      in_rates = saw_rates = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(where + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!in_rates && key == "n_nodes") {
      n_nodes = parse_integer(value, "n_nodes");
    } else if (!in_rates && key == "gamma") {
      gamma = parse_double(value, "gamma");
    } else if (!in_rates && key == "position") {
      auto xy = parse_list(value, "position");
      if (xy.size() != 2)
        throw std::invalid_argument(where + ": position needs x,y");
      positions.push_back({xy[0], xy[1]});
    } else if (in_rates && key == "tx_power") {
      tx_power = parse_double(value, "tx_power");
    } else if (in_rates && key == "direct") {
      direct = parse_list(value, "direct");
    } else if (in_rates && key == "pairwise") {
      auto row = parse_list(value, "pairwise");
      pairwise.insert(pairwise.end(), row.begin(), row.end());
      ++pairwise_rows;
    } else {
      throw std::invalid_argument(where + ": unknown key '" + std::string(key) + "'");
    }
  }

  if (!n_nodes || *n_nodes < 1)
    throw std::invalid_argument("network file: n_nodes missing or < 1");
  const auto n = static_cast<std::size_t>(*n_nodes);

  NetworkFile network;
  if (!positions.empty()) {
    if (positions.size() != n)
      throw std::invalid_argument("network file: n_nodes = " + std::to_string(n) + " but " +
                                  std::to_string(positions.size()) + " positions");
    Topology topology;
    topology.positions = std::move(positions);
    topology.pathloss_exponent = gamma.value_or(-3.0);
    for (const auto& p : topology.positions) {
      if (std::hypot(p.x, p.y) > 1.0 + 1e-12)
        throw std::invalid_argument("network file: position outside the unit disk");
    }
    network.topology = std::move(topology);
  }
  if (saw_rates) {
    if (direct.size() != n || pairwise_rows != n)
      throw std::invalid_argument("network file: rates block must have n direct rates and n rows");
    network.rates = load_rates(std::move(direct), std::move(pairwise), tx_power);
  }
  if (!network.topology && !network.rates)
    throw std::invalid_argument("network file: neither positions nor rates given");
  return network;
}

NetworkFile read_network_file(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open network file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_network(buffer.str());
}

std::string serialize_network(const NetworkFile& network)
{
  std::ostringstream out;
  const std::size_t n = network.topology ? network.topology->n_nodes()
                        : network.rates  ? network.rates->n_nodes()
                                         : 0;
  out << "n_nodes = " << n << '\n';
  if (network.topology) {
    out << "gamma = " << format_double(network.topology->pathloss_exponent) << '\n';
    for (const auto& p : network.topology->positions)
      out << "position = " << format_double(p.x) << ',' << format_double(p.y) << '\n';
  }
  if (network.rates) {
    const auto& rates = *network.rates;
    out << "[rates]\n";
    out << "tx_power = " << format_double(rates.tx_power()) << '\n';
    out << "direct = " << join(rates.direct_rates()) << '\n';
    for (std::size_t k = 0; k < n; ++k)
      out << "pairwise = " << join(rates.pairwise_rates().subspan(k * n, n)) << '\n';
  }
  return out.str();
}

void write_network_file(const std::filesystem::path& path, const NetworkFile& network)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write network file " + path.string());
  out << serialize_network(network);
}

} // namespace coopcsma
