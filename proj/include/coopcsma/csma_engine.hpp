#pragma once

#include "coopcsma/random.hpp"
#include "coopcsma/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace coopcsma {

inline constexpr NodeId kAccessPoint = std::numeric_limits<NodeId>::max();

/// One nat of some node's own data: (origin, per-origin sequence number).
struct PacketTag {
  NodeId origin = 0;
  std::uint64_t seq = 0;

  friend bool operator==(const PacketTag&, const PacketTag&) = default;
};

struct Segment {
  NodeId transmitter = 0;
  NodeId receiver = kAccessPoint;
  double duration = 0.0;
  std::vector<PacketTag> payload;

  bool to_ap() const { return receiver == kAccessPoint; }
};

/// Channel occupancy of one attempt. Segment i+1 runs only if segment i
/// was received, so a collision exposes only the first segment.
struct TransmissionPlan {
  NodeId initiator = 0;
  std::vector<Segment> segments;

  double collision_exposure() const { return segments.front().duration; }
  double total_duration() const;
};

struct CsmaParams {
  double sigma = 0.0088; ///< slot length
  double tau = 0.004;    ///< per-node attempt probability per slot

  /// Throws std::invalid_argument unless sigma > 0 and 0 < tau <= 1.
  void validate() const;
};

enum class EventKind {
  Idle,      ///< contention slot in which nobody attempted
  Sense,     ///< mandatory idle sensing slot after every busy period
  Success,   ///< exactly one attempt
  Collision, ///< two or more attempts
};

const char* to_string(EventKind kind);

struct ContentionOutcome {
  EventKind kind = EventKind::Idle;
  double elapsed = 0.0;
  std::vector<TransmissionPlan> plans;

  bool busy() const { return kind == EventKind::Success || kind == EventKind::Collision; }
  /// Transmit time charged to each transmitter in this event.
  std::vector<std::pair<NodeId, double>> charged_time() const;
};

/// Saturated nodes that build a plan when their coin flip says "attempt".
class PlanSource {
public:
  virtual ~PlanSource() = default;
  virtual std::size_t n_nodes() const = 0;
  virtual TransmissionPlan plan_attempt(NodeId k) = 0;
};

class ContentionEngine {
public:
  explicit ContentionEngine(CsmaParams params);

  /// Every node flips a tau-coin in id order from the single stream `rng`.
  ContentionOutcome contention_step(PlanSource& nodes, Rng& rng) const;
  ContentionOutcome sense_slot() const;

  const CsmaParams& params() const { return params_; }

private:
  bool attempts(Rng& rng) const;

  CsmaParams params_;
  std::uint64_t threshold_ = 0;
  bool always_ = false;
};

struct Accumulators {
  explicit Accumulators(std::size_t n_nodes = 0)
      : transmit_time(n_nodes, 0.0), delivered(n_nodes, 0)
  {
  }

  double clock = 0.0;
  std::vector<double> transmit_time;
  std::vector<std::uint64_t> delivered; ///< own nats received by the AP
  std::uint64_t idle_slots = 0;
  std::uint64_t sense_slots = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;

  std::size_t n_nodes() const { return delivered.size(); }
  std::uint64_t competitions() const { return successes + collisions; }
};

/// Advances the clock, charges transmit time, and on success credits every
/// packet carried by an AP-bound segment to its origin.
void account_event(const ContentionOutcome& outcome, Accumulators& acc);

/// Line-delimited event trace with a running FNV-1a hash of every record.
class TraceSink {
public:
  TraceSink() = default;
  explicit TraceSink(std::ostream& out) : out_(&out) {}

  void record(std::uint64_t index, const ContentionOutcome& outcome, double clock);
  std::uint64_t hash() const { return hash_; }
  std::uint64_t records() const { return records_; }

private:
  std::ostream* out_ = nullptr;
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
  std::uint64_t records_ = 0;
  std::string line_;
};

std::string format_trace_record(std::uint64_t index, const ContentionOutcome& outcome,
                                double clock);

} // namespace coopcsma
