#include "coopcsma/csma_engine.hpp"

#include "coopcsma/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace coopcsma {

double TransmissionPlan::total_duration() const
{
  double total = 0.0;
  for (const auto& s : segments)
    total += s.duration;
  return total;
}

void CsmaParams::validate() const
{
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("sigma must be positive");
  if (!(tau > 0.0) || tau > 1.0)
    throw std::invalid_argument("tau must lie in (0, 1]");
}

const char* to_string(EventKind kind)
{
  switch (kind) {
  case EventKind::Idle:
    return "idle";
  case EventKind::Sense:
    return "sense";
  case EventKind::Success:
    return "success";
  case EventKind::Collision:
    return "collision";
  }
  return "?";
}

std::vector<std::pair<NodeId, double>> ContentionOutcome::charged_time() const
{
  std::vector<std::pair<NodeId, double>> charged;
  if (kind == EventKind::Success) {
    for (const auto& s : plans.front().segments)
      charged.emplace_back(s.transmitter, s.duration);
  } else if (kind == EventKind::Collision) {
    for (const auto& p : plans)
      charged.emplace_back(p.segments.front().transmitter, p.collision_exposure());
  }
  return charged;
}

ContentionEngine::ContentionEngine(CsmaParams params) : params_(params)
{
  params_.validate();
  always_ = params_.tau >= 1.0;
  if (!always_)
    threshold_ = static_cast<std::uint64_t>(std::ldexp(params_.tau, 64));
}

bool ContentionEngine::attempts(Rng& rng) const
{
  const std::uint64_t draw = rng();
  return always_ || draw < threshold_;
}

ContentionOutcome ContentionEngine::contention_step(PlanSource& nodes, Rng& rng) const
{
  // flip all coins before building plans so plan construction never
  // observes a partially decided slot
  thread_local std::vector<NodeId> attempting;
  attempting.clear();
  const auto n = static_cast<NodeId>(nodes.n_nodes());
  for (NodeId k = 0; k < n; ++k) {
    if (attempts(rng))
      attempting.push_back(k);
  }

  ContentionOutcome outcome;
  if (attempting.empty()) {
    outcome.kind = EventKind::Idle;
    outcome.elapsed = params_.sigma;
    return outcome;
  }
  outcome.plans.reserve(attempting.size());
  for (NodeId k : attempting)
    outcome.plans.push_back(nodes.plan_attempt(k));
  if (outcome.plans.size() == 1) {
    outcome.kind = EventKind::Success;
    outcome.elapsed = outcome.plans.front().total_duration();
  } else {
    outcome.kind = EventKind::Collision;
    double longest = 0.0;
    for (const auto& p : outcome.plans)
      longest = std::max(longest, p.collision_exposure());
    outcome.elapsed = longest;
  }
  return outcome;
}

ContentionOutcome ContentionEngine::sense_slot() const
{
  ContentionOutcome outcome;
  outcome.kind = EventKind::Sense;
  outcome.elapsed = params_.sigma;
  return outcome;
}

void account_event(const ContentionOutcome& outcome, Accumulators& acc)
{
  acc.clock += outcome.elapsed;
  switch (outcome.kind) {
  case EventKind::Idle:
    ++acc.idle_slots;
    return;
  case EventKind::Sense:
    ++acc.sense_slots;
    return;
  case EventKind::Collision:
    ++acc.collisions;
    break;
  case EventKind::Success:
    ++acc.successes;
    for (const auto& s : outcome.plans.front().segments) {
      if (!s.to_ap())
        continue;
      for (const auto& tag : s.payload)
        ++acc.delivered.at(tag.origin);
    }
    break;
  }
  for (const auto& [node, time] : outcome.charged_time())
    acc.transmit_time.at(node) += time;
}

namespace {

void append_node(std::string& out, NodeId id)
{
  if (id == kAccessPoint)
    out += "AP";
  else
    out += std::to_string(id);
}

} // namespace

std::string format_trace_record(std::uint64_t index, const ContentionOutcome& outcome,
                                double clock)
{
  std::string line = std::to_string(index);
  line += ' ';
  line += to_string(outcome.kind);
  line += " elapsed=";
  line += format_double(outcome.elapsed);
  line += " clock=";
  line += format_double(clock);
  for (const auto& plan : outcome.plans) {
    line += ' ';
    for (std::size_t i = 0; i < plan.segments.size(); ++i) {
      const auto& s = plan.segments[i];
      if (i)
        line += '|';
      append_node(line, s.transmitter);
      line += '>';
      append_node(line, s.receiver);
      line += '@';
      line += format_double(s.duration);
      line += '[';
      for (std::size_t j = 0; j < s.payload.size(); ++j) {
        if (j)
          line += ',';
        line += std::to_string(s.payload[j].origin);
        line += '.';
        line += std::to_string(s.payload[j].seq);
      }
      line += ']';
    }
  }
  return line;
}

void TraceSink::record(std::uint64_t index, const ContentionOutcome& outcome, double clock)
{
  line_ = format_trace_record(index, outcome, clock);
  line_ += '\n';
  for (unsigned char c : line_) {
    hash_ ^= c;
    hash_ *= 0x100000001b3ULL;
  }
  ++records_;
  if (out_)
    *out_ << line_;
}

} // namespace coopcsma
