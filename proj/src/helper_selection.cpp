#include "coopcsma/helper_selection.hpp"

#include "coopcsma/text_format.hpp"

#include <algorithm>
#include <stdexcept>

namespace coopcsma {

HelperCap HelperCap::at_most(std::size_t n)
{
  if (n == 0)
    throw std::invalid_argument("helper cap must be positive");
  HelperCap cap;
  cap.unbounded_ = false;
  cap.bound_ = n;
  return cap;
}

std::size_t HelperCap::clamp(std::size_t count) const
{
  return unbounded_ ? count : std::min(count, bound_);
}

std::string HelperCap::to_string() const
{
  return unbounded_ ? "inf" : std::to_string(bound_);
}

HelperCap HelperCap::parse(std::string_view text)
{
  text = trim(text);
  if (text == "inf" || text == "infinity")
    return unbounded();
  const auto n = parse_integer(text, "H");
  if (n < 1)
    throw std::invalid_argument("H must be a positive integer or 'inf'");
  return at_most(static_cast<std::size_t>(n));
}

double two_hop_cost(NodeId k, NodeId l, const RateTable& rates)
{
  if (k == l)
    throw std::invalid_argument("two_hop_cost: source and helper must differ");
  return 1.0 / rates.link(k, l) + 1.0 / rates.direct(l);
}

bool is_eligible(NodeId k, NodeId h, const RateTable& rates)
{
  if (k == h)
    return false;
  return 1.0 / rates.direct(k) > two_hop_cost(k, h, rates);
}

HelperList rank_helpers(NodeId k, const RateTable& rates, HelperCap cap)
{
  HelperList list;
  list.source = k;
  std::vector<std::pair<double, NodeId>> eligible;
  for (NodeId h = 0; h < rates.n_nodes(); ++h) {
    if (is_eligible(k, h, rates))
      eligible.emplace_back(two_hop_cost(k, h, rates), h);
  }
  // pair ordering gives (cost, id): ties fall back to ascending id
  std::sort(eligible.begin(), eligible.end());
  eligible.resize(cap.clamp(eligible.size()));
  for (const auto& [cost, h] : eligible) {
    list.helpers.push_back(h);
    list.costs.push_back(cost);
  }
  return list;
}

std::vector<HelperList> rank_all_helpers(const RateTable& rates, HelperCap cap)
{
  std::vector<HelperList> lists;
  lists.reserve(rates.n_nodes());
  for (NodeId k = 0; k < rates.n_nodes(); ++k)
    lists.push_back(rank_helpers(k, rates, cap));
  return lists;
}

} // namespace coopcsma
