#include "coopcsma/helper_selection.hpp"

#include "support/rr_stepper.hpp"

#include <doctest.h>

#include <limits>

using namespace coopcsma;
using coopcsma::testing::toy_rates;

namespace {

// n1 = 0, n2 = 1, n3 = 2 in the toy network
constexpr NodeId n1 = 0, n2 = 1, n3 = 2;

} // namespace

TEST_CASE("two_hop_cost")
{
  CHECK(two_hop_cost(n1, n3, toy_rates()) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const auto unit = load_rates({1, 1}, {0, 1, 1, 0});
  CHECK(two_hop_cost(0, 1, unit) == 2.0);
  const auto mixed = load_rates({1, 2}, {0, 4, 4, 0});
  CHECK(two_hop_cost(0, 1, mixed) == 0.75);
  CHECK_THROWS_AS(two_hop_cost(1, 1, mixed), std::invalid_argument);
}

TEST_CASE("is_eligible uses the strict inequality")
{
  const auto toy = toy_rates();
  CHECK(is_eligible(n1, n3, toy));
  CHECK(is_eligible(n2, n3, toy));
  CHECK_FALSE(is_eligible(n3, n1, toy));
  CHECK_FALSE(is_eligible(n1, n2, toy));

  // 1/R_k = 1/2 + 1/2 exactly: no gain, not a helper
  const auto tie = load_rates({1, 2}, {0, 2, 2, 0});
  CHECK_FALSE(is_eligible(0, 1, tie));
}

TEST_CASE("rank_helpers on the toy network")
{
  const auto toy = toy_rates();
  const auto l1 = rank_helpers(n1, toy, HelperCap::at_most(1));
  REQUIRE(l1.helpers.size() == 1);
  CHECK(l1.helpers[0] == n3);
  CHECK(l1.costs[0] == doctest::Approx(2.0 / 3.0));
  CHECK(rank_helpers(n3, toy, HelperCap::unbounded()).empty());
}

TEST_CASE("rank_helpers breaks cost ties by ascending id")
{
  // node 0 far away; nodes 4 and 9 offer identical relays, others none
  const std::size_t n = 10;
  std::vector<double> direct(n, 0.5);
  direct[0] = 0.1;
  direct[4] = direct[9] = 10.0;
  std::vector<double> pairwise(n * n, 0.01);
  for (NodeId h : {4u, 9u}) {
    pairwise[0 * n + h] = pairwise[h * n + 0] = 5.0;
  }
  const auto rates = load_rates(direct, pairwise);
  const auto list = rank_helpers(0, rates, HelperCap::unbounded());
  REQUIRE(list.size() == 2);
  CHECK(list.helpers[0] == 4);
  CHECK(list.helpers[1] == 9);
  CHECK(list.costs[0] == list.costs[1]);
  CHECK(rank_helpers(0, rates, HelperCap::at_most(1)).helpers == std::vector<NodeId>{4});
}

TEST_CASE("HelperCap parsing")
{
  CHECK(HelperCap::parse("inf").is_unbounded());
  CHECK(HelperCap::parse("3").bound() == 3);
  CHECK(HelperCap::parse("3").to_string() == "3");
  CHECK(HelperCap::unbounded().to_string() == "inf");
  CHECK_THROWS_AS(HelperCap::parse("0"), std::invalid_argument);
  CHECK_THROWS_AS(HelperCap::parse("many"), std::invalid_argument);
  CHECK_THROWS_AS(HelperCap::at_most(0), std::invalid_argument);
}

TEST_CASE("helper lists satisfy their invariants on random networks")
{
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto t = generate_topology(20, seed, -3.0);
    const auto rates = build_rate_table(t, calibrate_power(t, -2.0 + 0.2 * seed));
    for (NodeId k = 0; k < rates.n_nodes(); ++k) {
      const auto all = rank_helpers(k, rates, HelperCap::unbounded());
      std::size_t eligible = 0;
      for (NodeId h = 0; h < rates.n_nodes(); ++h)
        eligible += is_eligible(k, h, rates) ? 1 : 0;
      CHECK(all.size() == eligible);
      for (std::size_t i = 0; i < all.size(); ++i) {
        const NodeId h = all.helpers[i];
        CHECK(h != k);
        CHECK(is_eligible(k, h, rates));
        CHECK(rates.direct(h) > rates.direct(k));
        if (i > 0) {
          CHECK(all.costs[i - 1] <= all.costs[i]);
          if (all.costs[i - 1] == all.costs[i])
            CHECK(all.helpers[i - 1] < h);
        }
      }

      // head of the H=1 list is the brute-force argmin over all nodes
      double best = std::numeric_limits<double>::infinity();
      std::optional<NodeId> argmin;
      for (NodeId l = 0; l < rates.n_nodes(); ++l) {
        if (l == k)
          continue;
        const double c = 1.0 / rates.link(k, l) + 1.0 / rates.direct(l);
        if (c < best) {
          best = c;
          argmin = l;
        }
      }
      const auto one = rank_helpers(k, rates, HelperCap::at_most(1));
      if (argmin && best < 1.0 / rates.direct(k)) {
        REQUIRE(one.size() == 1);
        CHECK(one.helpers[0] == *argmin);
      } else {
        CHECK(one.empty());
      }

      const auto capped = rank_helpers(k, rates, HelperCap::at_most(3));
      CHECK(capped.size() == std::min<std::size_t>(3, all.size()));
    }
  }
}

TEST_CASE("eligibility and ranking are invariant to a common rate scale")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto t = generate_topology(15, seed, -3.0);
    const auto rates = build_rate_table(t, calibrate_power(t, 0.0));
    for (double c : {0.125, 0.5, 2.0, 64.0}) {
      const auto scaled = rates.scaled(c);
      for (NodeId k = 0; k < rates.n_nodes(); ++k) {
        CHECK(rank_helpers(k, scaled, HelperCap::unbounded()).helpers ==
              rank_helpers(k, rates, HelperCap::unbounded()).helpers);
      }
    }
  }
}
