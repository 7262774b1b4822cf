// Copyright 2026 The corecut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <random>

#include "corecut/membership.hpp"
#include "corecut/oracle.hpp"
#include "support.hpp"

using namespace corecut;
using membership::ObjectionKind;
using membership::ObjectionMode;
using test_support::aversion_game;

namespace {

void check_certificate(const Game& game, const membership::Objection& objection,
                       const UtilityVector& u_star, const ObjectionMode& mode) {
  // The returned (S, x, u) must be self-consistent: plan feasible for the
  // coalition, utilities dominated by the plan, epsilon below every member's
  // gain.
  const auto system = design_space(game, objection.coalition);
  CHECK(test_support::satisfies(system, objection.plan.x, 1e-7));
  const auto& members = objection.coalition.members();
  for (std::size_t k = 0; k < members.size(); ++k) {
    const double vi = evaluate_utility(game, members[k], objection.plan);
    CHECK(objection.utilities[k] <= vi + 1e-7);
    const double gain = mode.kind == ObjectionKind::Additive
                            ? objection.utilities[k] - u_star.u[members[k]]
                            : objection.utilities[k] / u_star.u[members[k]];
    CHECK(objection.epsilon <= gain + 1e-7);
  }
}

}  // namespace

TEST_SUITE("membership") {

TEST_CASE("aversion game: least objection against (2,2,-2) is 7/3 via the third player") {
  const Game game = aversion_game();
  const UtilityVector u{{2.0, 2.0, -2.0}};
  const auto result = membership::least_objection(game, u, ObjectionMode{});
  CHECK(result.stats.exact);
  CHECK(result.objection.epsilon == doctest::Approx(7.0 / 3.0));
  CHECK(result.objection.coalition == Coalition({2}));
  check_certificate(game, result.objection, u, ObjectionMode{});
}

TEST_CASE("single player at its optimum has zero objection") {
  RationalMatrix a{{Rational(1), Rational(1)}};
  std::vector<RationalVec> b{{Rational(1)}};
  std::vector<RationalVec> v{{Rational(2), Rational(1)}};
  const Game game(a, b, v);
  const auto result = membership::least_objection(game, UtilityVector{{2.0}}, ObjectionMode{});
  CHECK(result.objection.epsilon == doctest::Approx(0.0));
  CHECK(membership::certifies_membership(result.objection, ObjectionMode{}));
}

TEST_CASE("additive baseline is nonnegative for achievable incumbents") {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Game game = test_support::random_game(seed, {4, 3, 2});
    const Vec x = test_support::random_grand_plan(game, rng);
    const auto u = test_support::utilities_of(game, x);
    const auto result = membership::least_objection(game, u, ObjectionMode{});
    CHECK(result.objection.epsilon >= -1e-9);
  }
}

TEST_CASE("agreement with the enumeration oracle on small games") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const Game game = test_support::random_game(seed);
    const bool tight = (seed % 2) == 0;
    const Vec x = test_support::random_grand_plan(game, rng, tight);
    const auto u = test_support::utilities_of(game, x);
    const auto verdict = oracle::is_blocked_exact(game, u);
    const auto result = membership::least_objection(game, u, ObjectionMode{});
    REQUIRE(result.stats.exact);
    CHECK(result.objection.epsilon ==
          doctest::Approx(std::max(0.0, verdict.max_least_objection)).epsilon(1e-6));
    CHECK(verdict.blocked == (result.objection.epsilon > 1e-6));
    check_certificate(game, result.objection, u, ObjectionMode{});
  }
}

TEST_CASE("pool seeding never lowers the incumbent") {
  const Game game = aversion_game();
  const UtilityVector u{{2.0, 2.0, -2.0}};
  const auto bare = membership::least_objection(game, u, ObjectionMode{});
  membership::CoalitionPool pool;
  pool.add(Coalition({0, 1}), 0.1);
  pool.add(Coalition({2}), 0.5);
  const auto seeded = membership::least_objection(game, u, ObjectionMode{}, &pool);
  CHECK(seeded.objection.epsilon >= bare.objection.epsilon - 1e-9);
}

TEST_CASE("multiplicative mode") {
  const Game game = aversion_game();
  SUBCASE("rejects nonpositive incumbents") {
    CHECK_THROWS_AS(
        membership::least_objection(game, UtilityVector{{1.0, 1.0, 0.0}},
                                    ObjectionMode{ObjectionKind::Multiplicative, 1e-3}),
        NonPositiveIncumbentUtility);
  }
  SUBCASE("ratio exceeds one where an additive gain exists") {
    // Modest positive incumbent: player 3 alone reaches 1/3 > 0.2.
    const UtilityVector u{{0.5, 0.5, 0.2}};
    const ObjectionMode mult{ObjectionKind::Multiplicative, 1e-3};
    const auto result = membership::least_objection(game, u, mult);
    CHECK(result.objection.epsilon > 1.0 + 1e-6);
    check_certificate(game, result.objection, u, mult);
    // Multiplicative/additive consistency.
    const auto additive = membership::least_objection(game, u, ObjectionMode{});
    CHECK(additive.objection.epsilon > 1e-6);
  }
  SUBCASE("floor-infeasible incumbents certify membership at ratio one") {
    // One player owning everything: nobody can improve by the floor.
    RationalMatrix a{{Rational(1)}};
    std::vector<RationalVec> b{{Rational(1)}};
    std::vector<RationalVec> v{{Rational(1)}};
    const Game solo(a, b, v);
    const ObjectionMode mult{ObjectionKind::Multiplicative, 1e-3};
    const auto result = membership::least_objection(solo, UtilityVector{{1.0}}, mult);
    CHECK(result.objection.epsilon == doctest::Approx(1.0));
    CHECK(membership::certifies_membership(result.objection, mult));
  }
  SUBCASE("floor must be positive") {
    CHECK_THROWS_AS(membership::least_objection(game, UtilityVector{{1.0, 1.0, 1.0}},
                                                ObjectionMode{ObjectionKind::Multiplicative, 0.0}),
                    Error);
  }
}

TEST_CASE("prefix heuristic") {
  const Game game = aversion_game();
  SUBCASE("second good's scan surfaces the third player") {
    const auto coalitions = membership::prefix_heuristic(game, UtilityVector{{2.0, 2.0, -2.0}});
    bool found = false;
    for (const auto& c : coalitions) found |= (c == Coalition({2}));
    CHECK(found);
  }
  SUBCASE("pooling doubles utility in a symmetric game") {
    RationalMatrix a{{Rational(1)}};
    std::vector<RationalVec> b{{Rational(1)}, {Rational(1)}};
    std::vector<RationalVec> v{{Rational(1)}, {Rational(1)}};
    const Game pair(a, b, v);
    const auto coalitions = membership::prefix_heuristic(pair, UtilityVector{{1.0, 1.0}});
    REQUIRE(coalitions.size() == 1);
    CHECK(coalitions[0] == Coalition({0, 1}));
  }
  SUBCASE("dominant incumbents leave nothing") {
    const auto coalitions = membership::prefix_heuristic(game, UtilityVector{{10.0, 10.0, 10.0}});
    CHECK(coalitions.empty());
  }
}

TEST_CASE("singleton lower bounds") {
  SUBCASE("single-budget-row form reduces to the best value-per-length ratio") {
    RationalMatrix a{{Rational(2), Rational(1)}};
    std::vector<RationalVec> b{{Rational(1)}};
    std::vector<RationalVec> v{{Rational(1, 2), Rational(1)}};
    const Game game(a, b, v);
    const auto bounds = membership::singleton_lower_bounds(game);
    CHECK(bounds[0] == doctest::Approx(1.0));
  }
  SUBCASE("aversion game third player") {
    const auto bounds = membership::singleton_lower_bounds(aversion_game());
    CHECK(bounds[2] == doctest::Approx(1.0 / 3.0));
    CHECK(bounds[0] == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("zero valuations give zero") {
    RationalMatrix a{{Rational(1)}};
    std::vector<RationalVec> b{{Rational(1)}};
    std::vector<RationalVec> v{{Rational(0)}};
    const Game game(a, b, v);
    CHECK(membership::singleton_lower_bounds(game)[0] == doctest::Approx(0.0));
  }
}

TEST_CASE("agreement holds above the small-game suite sizes") {
  std::mt19937_64 rng(67);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Game game = test_support::random_game(seed * 131, {8, 4, 2});
    const Vec x = test_support::random_grand_plan(game, rng, (seed % 2) == 0);
    const auto u = test_support::utilities_of(game, x);
    const auto verdict = oracle::is_blocked_exact(game, u);
    const auto result = membership::least_objection(game, u, ObjectionMode{});
    REQUIRE(result.stats.exact);
    CHECK(result.objection.epsilon ==
          doctest::Approx(std::max(0.0, verdict.max_least_objection)).epsilon(1e-6));
  }
}

TEST_CASE("agreement extends to games with aversions") {
  // Negative valuation entries (nonnegative endowments keep coalition design
  // spaces nested, which the node relaxations rely on).
  std::mt19937_64 rng(41);
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    std::mt19937_64 gen_rng(seed * 977);
    const int n = test_support::uniform_int(gen_rng, 2, 4);
    const int m = test_support::uniform_int(gen_rng, 1, 3);
    RationalMatrix a(1, RationalVec(m, Rational(1)));
    std::vector<RationalVec> b(n, RationalVec{Rational(1)});
    std::vector<RationalVec> v(n, RationalVec(m, Rational(0)));
    for (auto& row : v)
      for (auto& val : row)
        val = Rational(test_support::uniform_int(gen_rng, -3, 5), test_support::uniform_int(gen_rng, 1, 3));
    const Game game(a, b, v);
    const Vec x = test_support::random_grand_plan(game, rng);
    const auto u = test_support::utilities_of(game, x);
    const auto verdict = oracle::is_blocked_exact(game, u);
    const auto result = membership::least_objection(game, u, ObjectionMode{});
    REQUIRE(result.stats.exact);
    CHECK(result.objection.epsilon ==
          doctest::Approx(std::max(0.0, verdict.max_least_objection)).epsilon(1e-6));
  }
}

TEST_CASE("multiplicative search agrees with per-coalition brute force") {
  // Independent route: enumerate every coalition's best floor-respecting
  // ratio directly and take the maximum against the do-nothing baseline.
  std::mt19937_64 rng(43);
  const ObjectionMode mult{ObjectionKind::Multiplicative, 1e-3};
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Game game = test_support::random_blocking_game(seed);
    const auto bounds = membership::utility_bounds(game);
    UtilityVector u;
    u.u.resize(game.num_players());
    for (int i = 0; i < game.num_players(); ++i)
      u.u[i] = std::max(1e-2, test_support::uniform(rng, 0.2, 0.7) * bounds.upper[i]);

    double brute = 1.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << game.num_players()); ++mask) {
      const auto single = membership::coalition_objection(game, Coalition::from_mask(mask), u.u, mult);
      if (single) brute = std::max(brute, single->epsilon);
    }
    const auto searched = membership::least_objection(game, u, mult);
    REQUIRE(searched.stats.exact);
    CHECK(searched.objection.epsilon == doctest::Approx(brute).epsilon(1e-6));
  }
}

TEST_CASE("a multiplicative objection above one implies a positive additive one") {
  std::mt19937_64 rng(23);
  int mult_blocked = 0;
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const Game game = test_support::random_blocking_game(seed);
    // Positive incumbent strictly inside the utility bounds.
    const auto bounds = membership::utility_bounds(game);
    UtilityVector u;
    u.u.resize(game.num_players());
    for (int i = 0; i < game.num_players(); ++i)
      u.u[i] = std::max(1e-3, test_support::uniform(rng, 0.2, 0.6) * bounds.upper[i]);
    const ObjectionMode mult{ObjectionKind::Multiplicative, 1e-3};
    const auto ratio = membership::least_objection(game, u, mult);
    if (ratio.objection.epsilon > 1.0 + 1e-6) {
      ++mult_blocked;
      const auto additive = membership::least_objection(game, u, ObjectionMode{});
      CHECK(additive.objection.epsilon > 1e-6);
    }
  }
  CHECK(mult_blocked >= 3);
}

TEST_CASE("budget exhaustion returns the incumbent as a lower bound") {
  const Game game = test_support::random_game(5, {6, 4, 2});
  std::mt19937_64 rng(5);
  const Vec x = test_support::random_grand_plan(game, rng, true);
  const auto u = test_support::utilities_of(game, x);
  // A zero-second budget exhausts immediately after seeding.
  const auto result = membership::least_objection(game, u, ObjectionMode{}, nullptr, 0.0);
  CHECK(result.stats.timed_out);
  CHECK(!result.stats.exact);
  const auto full = membership::least_objection(game, u, ObjectionMode{});
  CHECK(result.objection.epsilon <= full.objection.epsilon + 1e-9);
}

}  // TEST_SUITE
