#include "coopcsma/simulation.hpp"

#include <stdexcept>

namespace coopcsma {

SimulationResult simulate(const RateTable& rates, const ProtocolConfig& protocol,
                          const SimulationOptions& options)
{
  if (options.competitions == 0)
    throw std::invalid_argument("simulate: competition budget must be positive");
  const ContentionEngine engine(options.csma);
  ProtocolNetwork network(rates, protocol);
  Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(RngStream::Contention));

  SimulationResult result{Accumulators(rates.n_nodes())};
  auto finish = [&](const ContentionOutcome& outcome) {
    account_event(outcome, result.totals);
    if (options.trace)
      options.trace->record(result.events, outcome, result.totals.clock);
    ++result.events;
    if (options.after_event)
      options.after_event(network, result.totals);
  };

  while (result.totals.competitions() < options.competitions) {
    ContentionOutcome outcome = engine.contention_step(network, rng);
    if (outcome.kind == EventKind::Success)
      network.on_success(outcome.plans.front());
    else if (outcome.kind == EventKind::Collision)
      network.on_collision(outcome.plans);
    const bool busy = outcome.busy();
    finish(outcome);
    if (busy)
      finish(engine.sense_slot());
  }
  if (options.trace)
    result.trace_hash = options.trace->hash();
  return result;
}

} // namespace coopcsma
