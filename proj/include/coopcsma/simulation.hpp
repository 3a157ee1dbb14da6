#pragma once

#include "coopcsma/csma_engine.hpp"
#include "coopcsma/protocols.hpp"

#include <cstdint>
#include <functional>

namespace coopcsma {

struct SimulationOptions {
  CsmaParams csma;
  std::uint64_t competitions = 200'000; ///< busy events (success or collision)
  std::uint64_t seed = 0;
  TraceSink* trace = nullptr;
  /// Called after every event, once protocol state reflects it.
  std::function<void(const ProtocolNetwork&, const Accumulators&)> after_event;
};

struct SimulationResult {
  Accumulators totals;
  std::uint64_t events = 0;
  std::uint64_t trace_hash = 0; ///< meaningful only when a trace sink was given
};

/// Single-threaded saturated slotted-CSMA run. Every busy period is followed
/// by one sensing slot before the next contention slot.
SimulationResult simulate(const RateTable& rates, const ProtocolConfig& protocol,
                          const SimulationOptions& options);

} // namespace coopcsma
