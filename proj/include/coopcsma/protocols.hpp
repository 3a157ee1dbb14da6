#pragma once

#include "coopcsma/csma_engine.hpp"
#include "coopcsma/helper_selection.hpp"
#include "coopcsma/topology.hpp"

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coopcsma {

enum class ProtocolKind { DirectLink, CoopMac, FairMac };

const char* to_string(ProtocolKind kind);
ProtocolKind parse_protocol_kind(std::string_view text);

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::DirectLink;
  HelperCap max_helpers = HelperCap::at_most(1); ///< H
  int max_pending = 10;                          ///< P
  int max_forward = 1;                           ///< Q

  static ProtocolConfig direct_link() { return {ProtocolKind::DirectLink}; }
  static ProtocolConfig coopmac() { return {ProtocolKind::CoopMac}; }
  static ProtocolConfig fairmac(HelperCap h, int p, int q) { return {ProtocolKind::FairMac, h, p, q}; }

  /// Throws std::invalid_argument for P < 0 or Q < 1.
  void validate() const;
  /// e.g. "direct", "coopmac", "fairmac(H=inf,P=10,Q=3)"
  std::string label() const;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

/// Per-node protocol state. Every node is a saturated source and may also
/// hold a forwarding queue as someone else's helper.
struct SourceState {
  NodeId id = 0;
  HelperList helpers;
  std::vector<int> pending;             ///< p_l, one per listed helper
  std::uint64_t next_seq = 0;           ///< tag of the head-of-line own packet
  std::deque<PacketTag> forward_queue;  ///< data held for others (fairMAC)

  PacketTag head_of_line() const { return {id, next_seq}; }
};

/// Index of the first helper with p_l <= max_pending, or nullopt for direct.
std::optional<std::size_t> select_route(const SourceState& state, int max_pending);

/// All node state machines of one network running one protocol.
class ProtocolNetwork final : public PlanSource {
public:
  ProtocolNetwork(const RateTable& rates, ProtocolConfig config);

  std::size_t n_nodes() const override { return nodes_.size(); }
  TransmissionPlan plan_attempt(NodeId k) override;

  /// Collision-free execution of `plan`: preACK / jointACK / ACK handling.
  void on_success(const TransmissionPlan& plan);
  /// Lost attempts leave every queue and counter untouched.
  void on_collision(std::span<const TransmissionPlan> plans);

  const SourceState& node(NodeId k) const { return nodes_.at(k); }
  const ProtocolConfig& config() const { return config_; }
  const RateTable& rates() const { return rates_; }

  /// Own packets of `origin` currently waiting in some helper queue.
  std::uint64_t queued_for(NodeId origin) const;

  /// Throws std::logic_error if a pending counter disagrees with the helper
  /// queues or leaves [0, P+1].
  void check_invariants() const;

private:
  TransmissionPlan direct_plan(const SourceState& s) const;

  const RateTable& rates_;
  ProtocolConfig config_;
  std::vector<SourceState> nodes_;
};

} // namespace coopcsma
