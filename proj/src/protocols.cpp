#include "coopcsma/protocols.hpp"

#include <algorithm>
#include <stdexcept>

namespace coopcsma {

const char* to_string(ProtocolKind kind)
{
  switch (kind) {
  case ProtocolKind::DirectLink:
    return "direct";
  case ProtocolKind::CoopMac:
    return "coopmac";
  case ProtocolKind::FairMac:
    return "fairmac";
  }
  return "?";
}

ProtocolKind parse_protocol_kind(std::string_view text)
{
  if (text == "direct" || text == "directlink")
    return ProtocolKind::DirectLink;
  if (text == "coopmac")
    return ProtocolKind::CoopMac;
  if (text == "fairmac")
    return ProtocolKind::FairMac;
  throw std::invalid_argument("unknown protocol '" + std::string(text) +
                              "' (expected direct, coopmac or fairmac)");
}

void ProtocolConfig::validate() const
{
  if (kind != ProtocolKind::FairMac)
    return;
  if (max_pending < 0)
    throw std::invalid_argument("P must be non-negative");
  if (max_forward < 1)
    throw std::invalid_argument("Q must be at least 1");
}

std::string ProtocolConfig::label() const
{
  if (kind != ProtocolKind::FairMac)
    return to_string(kind);
  return "fairmac(H=" + max_helpers.to_string() + ",P=" + std::to_string(max_pending) +
         ",Q=" + std::to_string(max_forward) + ")";
}

std::optional<std::size_t> select_route(const SourceState& state, int max_pending)
{
  for (std::size_t l = 0; l < state.pending.size(); ++l) {
    if (state.pending[l] <= max_pending)
      return l;
  }
  return std::nullopt;
}

ProtocolNetwork::ProtocolNetwork(const RateTable& rates, ProtocolConfig config)
    : rates_(rates), config_(config)
{
  config_.validate();
  const auto n = static_cast<NodeId>(rates.n_nodes());
  nodes_.resize(n);
  const HelperCap cap =
      config_.kind == ProtocolKind::FairMac ? config_.max_helpers : HelperCap::at_most(1);
  for (NodeId k = 0; k < n; ++k) {
    auto& s = nodes_[k];
    s.id = k;
    if (config_.kind != ProtocolKind::DirectLink)
      s.helpers = rank_helpers(k, rates, cap);
    else
      s.helpers.source = k;
    s.pending.assign(s.helpers.size(), 0);
  }
}

TransmissionPlan ProtocolNetwork::direct_plan(const SourceState& s) const
{
  TransmissionPlan plan;
  plan.initiator = s.id;
  plan.segments.push_back({s.id, kAccessPoint, 1.0 / rates_.direct(s.id), {s.head_of_line()}});
  return plan;
}

TransmissionPlan ProtocolNetwork::plan_attempt(NodeId k)
{
  const SourceState& s = nodes_.at(k);
  switch (config_.kind) {
  case ProtocolKind::DirectLink:
    return direct_plan(s);

  case ProtocolKind::CoopMac: {
    if (s.helpers.empty())
      return direct_plan(s);
    const NodeId h = s.helpers.helpers.front();
    TransmissionPlan plan;
    plan.initiator = k;
    plan.segments.push_back({k, h, 1.0 / rates_.link(k, h), {s.head_of_line()}});
    plan.segments.push_back({h, kAccessPoint, 1.0 / rates_.direct(h), {s.head_of_line()}});
    return plan;
  }

  case ProtocolKind::FairMac: {
    if (const auto l = select_route(s, config_.max_pending)) {
      const NodeId h = s.helpers.helpers[*l];
      TransmissionPlan plan;
      plan.initiator = k;
      plan.segments.push_back({k, h, 1.0 / rates_.link(k, h), {s.head_of_line()}});
      return plan;
    }
    // joint packet: own head-of-line plus up to Q forwarded from the queue head
    const std::size_t q =
        std::min<std::size_t>(static_cast<std::size_t>(config_.max_forward), s.forward_queue.size());
    Segment joint{k, kAccessPoint, static_cast<double>(1 + q) / rates_.direct(k), {}};
    joint.payload.reserve(1 + q);
    joint.payload.push_back(s.head_of_line());
    joint.payload.insert(joint.payload.end(), s.forward_queue.begin(),
                         s.forward_queue.begin() + static_cast<std::ptrdiff_t>(q));
    TransmissionPlan plan;
    plan.initiator = k;
    plan.segments.push_back(std::move(joint));
    return plan;
  }
  }
  throw std::logic_error("unreachable protocol kind");
}

void ProtocolNetwork::on_success(const TransmissionPlan& plan)
{
  SourceState& src = nodes_.at(plan.initiator);
  const Segment& first = plan.segments.front();

  if (config_.kind != ProtocolKind::FairMac) {
    ++src.next_seq;
    return;
  }

  if (!first.to_ap()) {
    // preACK from the helper: the packet now sits in its forwarding queue
    const auto& hs = src.helpers.helpers;
    const auto it = std::find(hs.begin(), hs.end(), first.receiver);
    if (it == hs.end())
      throw std::logic_error("preACK from a node that is not a listed helper");
    nodes_.at(first.receiver).forward_queue.push_back(first.payload.front());
    ++src.pending[static_cast<std::size_t>(it - hs.begin())];
    ++src.next_seq;
    return;
  }

  // jointACK: own data plus every forwarded entry, in queue order
  if (first.payload.empty() || !(first.payload.front() == src.head_of_line()))
    throw std::logic_error("jointACK does not carry the owner's head-of-line packet");
  for (std::size_t i = 1; i < first.payload.size(); ++i) {
    const PacketTag& tag = first.payload[i];
    if (src.forward_queue.empty() || !(src.forward_queue.front() == tag))
      throw std::logic_error("jointACK names a packet missing from the forwarding queue");
    src.forward_queue.pop_front();
    SourceState& origin = nodes_.at(tag.origin);
    const auto& hs = origin.helpers.helpers;
    const auto it = std::find(hs.begin(), hs.end(), src.id);
    if (it == hs.end())
      throw std::logic_error("jointACK for an origin that never listed this helper");
    int& p = origin.pending[static_cast<std::size_t>(it - hs.begin())];
    if (p <= 0)
      throw std::logic_error("jointACK would drive a pending counter negative");
    --p;
  }
  ++src.next_seq;
}

void ProtocolNetwork::on_collision(std::span<const TransmissionPlan>)
{
  // no ACK, no preACK: every collider retries the same head-of-line data
}

std::uint64_t ProtocolNetwork::queued_for(NodeId origin) const
{
  std::uint64_t count = 0;
  for (const auto& s : nodes_)
    count += static_cast<std::uint64_t>(std::count_if(
        s.forward_queue.begin(), s.forward_queue.end(),
        [origin](const PacketTag& t) { return t.origin == origin; }));
  return count;
}

void ProtocolNetwork::check_invariants() const
{
  for (const auto& s : nodes_) {
    if (s.pending.size() != s.helpers.size())
      throw std::logic_error("pending counters do not match the helper list");
    for (std::size_t l = 0; l < s.pending.size(); ++l) {
      const int p = s.pending[l];
      if (p < 0 || p > config_.max_pending + 1)
        throw std::logic_error("pending counter of node " + std::to_string(s.id) +
                               " outside [0, P+1]");
      const auto& queue = nodes_[s.helpers.helpers[l]].forward_queue;
      const auto in_queue = std::count_if(queue.begin(), queue.end(), [&](const PacketTag& t) {
        return t.origin == s.id;
      });
      if (in_queue != p)
        throw std::logic_error("pending counter of node " + std::to_string(s.id) + " for helper " +
                               std::to_string(s.helpers.helpers[l]) + " is " + std::to_string(p) +
                               " but the queue holds " + std::to_string(in_queue));
    }
  }
}

} // namespace coopcsma
