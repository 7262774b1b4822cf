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

#ifndef CORECUT_INSTANCES_HPP
#define CORECUT_INSTANCES_HPP

// Instance generators: the three-player aversion game with an empty core,
// the moment-curve family whose utility sets have cyclic-polytope facial
// structure, the three-dimensional-matching hardness gadget, and a transit
// frequency-setting model with synthetic grid cities.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/game.hpp"
#include "corecut/rational.hpp"

namespace corecut::gen {

/// Three players, two goods, one shared budget row; the third player is
/// averse to the first good.  The canonical empty-core instance.
inline Game empty_core_example() {
  RationalMatrix production{{Rational(1), Rational(1)}};
  std::vector<RationalVec> endowments{{Rational(1)}, {Rational(1)}, {Rational(1)}};
  std::vector<RationalVec> valuations{{Rational(2, 3), Rational(1, 3)},
                                      {Rational(2, 3), Rational(1, 3)},
                                      {Rational(-2, 3), Rational(1, 3)}};
  return Game(std::move(production), std::move(endowments), std::move(valuations),
              {"player-1", "player-2", "player-3"});
}

/// Moment-curve family: unit budgets over a single resource row of ones,
/// valuations v_j^i = t_j^(i+1) for 0-indexed players.  Design spaces dilate
/// a standard simplex; the utility images trace a cyclic polytope.
inline Game cyclic_family(int players, int goods, const std::vector<Rational>& t) {
  if (static_cast<int>(t.size()) != goods) throw BadMoments("need one moment per good");
  for (int j = 0; j < goods; ++j) {
    if (!(Rational(1) < t[static_cast<std::size_t>(j)]))
      throw BadMoments("moments must exceed one");
    if (j > 0 && !(t[static_cast<std::size_t>(j - 1)] < t[static_cast<std::size_t>(j)]))
      throw BadMoments("moments must be strictly increasing");
  }
  if (players < 1) throw BadMoments("need at least one player");
  RationalMatrix production{RationalVec(static_cast<std::size_t>(goods), Rational(1))};
  std::vector<RationalVec> endowments(static_cast<std::size_t>(players), RationalVec{Rational(1)});
  std::vector<RationalVec> valuations;
  valuations.reserve(static_cast<std::size_t>(players));
  for (int i = 0; i < players; ++i) {
    RationalVec row(static_cast<std::size_t>(goods), Rational(1));
    for (int j = 0; j < goods; ++j) {
      Rational power(1);
      for (int e = 0; e <= i; ++e) power *= t[static_cast<std::size_t>(j)];
      row[static_cast<std::size_t>(j)] = power;
    }
    valuations.push_back(std::move(row));
  }
  return Game(std::move(production), std::move(endowments), std::move(valuations));
}

/// Three-dimensional matching instance: axis-local indices in [0, n).
struct ThreeDMInstance {
  int n = 0;
  std::vector<std::array<int, 3>> triples;
};

struct GadgetGame {
  Game game;
  UtilityVector u_star;  // all ones; achievable by funding the last good
  int n = 0;             // nodes per axis
  int m = 0;             // triples after duplication
};

/// Hardness gadget: one player per node and per triple, one good per triple
/// plus a shared fallback good, unit budgets over a single row of ones.  An
/// arbitrary (here: lexicographically first) triple is duplicated until the
/// non-incident node valuation strictly exceeds the fallback valuation, so
/// the all-ones allocation is blocked exactly when a perfect matching
/// exists.
inline GadgetGame three_dm_gadget(const ThreeDMInstance& instance) {
  const int n = instance.n;
  if (n <= 1) throw BadInstance("gadget needs at least two nodes per axis");
  if (static_cast<int>(instance.triples.size()) < n)
    throw BadInstance("gadget needs at least n triples");
  for (const auto& t : instance.triples)
    for (int a = 0; a < 3; ++a)
      if (t[static_cast<std::size_t>(a)] < 0 || t[static_cast<std::size_t>(a)] >= n)
        throw BadInstance("triple index outside its axis");

  std::vector<std::array<int, 3>> triples = instance.triples;
  std::array<int, 3> first = triples.front();
  for (const auto& t : triples) first = std::min(first, t);
  const auto fallback_beats = [n](int m) {
    // (1/4n)(1 - 1/(2(n-1)(4n-1))) > 1/(3n+m)
    const Rational non_incident =
        Rational(1, 4 * n) * (Rational(1) - Rational(1, 2 * (n - 1) * (4 * n - 1)));
    return non_incident > Rational(1, 3 * n + m);
  };
  while (!fallback_beats(static_cast<int>(triples.size()))) triples.push_back(first);
  const int m = static_cast<int>(triples.size());

  const Rational incident(1, 4 * n - 1);
  const Rational non_incident =
      Rational(1, 4 * n) * (Rational(1) - Rational(1, 2 * (n - 1) * (4 * n - 1)));
  const Rational fallback(1, 3 * n + m);
  const Rational own_edge(n, 4 * n - 1);

  const int goods = m + 1;
  const int players = 3 * n + m;
  RationalMatrix production{RationalVec(static_cast<std::size_t>(goods), Rational(1))};
  std::vector<RationalVec> endowments(static_cast<std::size_t>(players), RationalVec{Rational(1)});
  std::vector<RationalVec> valuations;
  std::vector<std::string> labels;
  valuations.reserve(static_cast<std::size_t>(players));

  // Node players: axis-major order (X block, Y block, Z block).
  for (int axis = 0; axis < 3; ++axis) {
    for (int node = 0; node < n; ++node) {
      RationalVec row(static_cast<std::size_t>(goods), Rational(0));
      for (int j = 0; j < m; ++j) {
        const bool in_triple = triples[static_cast<std::size_t>(j)][static_cast<std::size_t>(axis)] == node;
        row[static_cast<std::size_t>(j)] = in_triple ? incident : non_incident;
      }
      row[static_cast<std::size_t>(m)] = fallback;
      valuations.push_back(std::move(row));
      labels.push_back("node-" + std::string(1, static_cast<char>('x' + axis)) + std::to_string(node));
    }
  }
  // Edge players, one per triple copy.
  for (int e = 0; e < m; ++e) {
    RationalVec row(static_cast<std::size_t>(goods), Rational(0));
    row[static_cast<std::size_t>(e)] = own_edge;
    row[static_cast<std::size_t>(m)] = fallback;
    valuations.push_back(std::move(row));
    labels.push_back("edge-" + std::to_string(e));
  }

  GadgetGame out{Game(std::move(production), std::move(endowments), std::move(valuations), std::move(labels)),
                 UtilityVector{Vec(static_cast<std::size_t>(players), 1.0)}, n, m};
  return out;
}

/// Random instance containing a planted perfect matching plus extra triples.
inline ThreeDMInstance random_yes_instance(std::uint64_t seed, int n, int extra_triples) {
  std::mt19937_64 rng(seed);
  ThreeDMInstance instance;
  instance.n = n;
  std::vector<int> py(static_cast<std::size_t>(n)), pz(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) py[static_cast<std::size_t>(i)] = pz[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(py[static_cast<std::size_t>(i)], py[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1))]);
    std::swap(pz[static_cast<std::size_t>(i)], pz[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(i + 1))]);
  }
  for (int i = 0; i < n; ++i)
    instance.triples.push_back({i, py[static_cast<std::size_t>(i)], pz[static_cast<std::size_t>(i)]});
  int added = 0;
  int guard = 0;
  while (added < extra_triples && ++guard < 1000) {
    const std::array<int, 3> t{static_cast<int>(rng() % static_cast<std::uint64_t>(n)),
                               static_cast<int>(rng() % static_cast<std::uint64_t>(n)),
                               static_cast<int>(rng() % static_cast<std::uint64_t>(n))};
    bool exists = false;
    for (const auto& s : instance.triples) exists |= (s == t);
    if (!exists) {
      instance.triples.push_back(t);
      ++added;
    }
  }
  return instance;
}

/// Random instance in which the first X-node appears in no triple, so no
/// perfect matching can exist.
inline ThreeDMInstance uncovered_no_instance(std::uint64_t seed, int n, int triples) {
  if (n <= 1) throw BadInstance("need at least two nodes per axis");
  std::mt19937_64 rng(seed);
  ThreeDMInstance instance;
  instance.n = n;
  int guard = 0;
  while (static_cast<int>(instance.triples.size()) < triples && ++guard < 2000) {
    const std::array<int, 3> t{1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1)),
                               static_cast<int>(rng() % static_cast<std::uint64_t>(n)),
                               static_cast<int>(rng() % static_cast<std::uint64_t>(n))};
    bool exists = false;
    for (const auto& s : instance.triples) exists |= (s == t);
    if (!exists) instance.triples.push_back(t);
  }
  if (static_cast<int>(instance.triples.size()) < triples)
    throw BadInstance("axis too small for the requested number of distinct triples");
  return instance;
}

/// Piecewise-linear walking accessibility of a stop at the given distance.
inline double accessibility(double distance_m) {
  if (distance_m < 0.0) throw NegativeDistance();
  if (distance_m < 400.0) return 1.0;
  if (distance_m <= 1600.0) return 1.0 - (distance_m - 400.0) / 1200.0;
  return 0.0;
}

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct TransitLine {
  std::vector<int> stops;  // node indices
  double length_km = 0.0;
};

struct TransitRider {
  int origin = 0;
  int destination = 0;
};

struct TransitScenario {
  std::vector<Point> nodes;     // coordinates in meters
  std::vector<TransitLine> lines;
  std::vector<TransitRider> riders;  // flat fare of one unit each

  void validate() const {
    for (const auto& line : lines) {
      if (line.length_km <= 0.0) throw Error("line length must be positive");
      if (line.stops.empty()) throw Error("line needs at least one stop");
      for (int s : line.stops)
        if (s < 0 || s >= static_cast<int>(nodes.size())) throw Error("stop index out of range");
    }
    for (const auto& rider : riders) {
      if (rider.origin == rider.destination) throw Error("rider origin equals destination");
      if (rider.origin < 0 || rider.origin >= static_cast<int>(nodes.size()) ||
          rider.destination < 0 || rider.destination >= static_cast<int>(nodes.size()))
        throw Error("rider endpoint out of range");
    }
  }
};

namespace detail {

inline double distance_m(const Point& a, const Point& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double stop_distance_m(const TransitScenario& scenario, int node, int line) {
  double best = kInf;
  for (int s : scenario.lines[static_cast<std::size_t>(line)].stops)
    best = std::min(best, distance_m(scenario.nodes[static_cast<std::size_t>(node)],
                                     scenario.nodes[static_cast<std::size_t>(s)]));
  return best;
}

}  // namespace detail

/// A rider values a line by the accessibility at the worse end of the trip.
inline double rider_valuation(const TransitScenario& scenario, int rider, int line) {
  const auto& r = scenario.riders[static_cast<std::size_t>(rider)];
  const double at_origin = accessibility(detail::stop_distance_m(scenario, r.origin, line));
  const double at_destination = accessibility(detail::stop_distance_m(scenario, r.destination, line));
  return std::min(at_origin, at_destination);
}

struct TransitGame {
  Game game;
  std::vector<int> rider_ids;  // scenario rider index per game player
};

/// Frequency-setting game: one budget row of line lengths, unit fares, and
/// valuation rows from the accessibility model.  Riders valuing no line are
/// dropped (they cannot affect or join any coalition).
inline TransitGame transit_game(const TransitScenario& scenario) {
  scenario.validate();
  const int lines = static_cast<int>(scenario.lines.size());
  RationalVec lengths(static_cast<std::size_t>(lines));
  for (int j = 0; j < lines; ++j)
    lengths[static_cast<std::size_t>(j)] = Rational::round_to(scenario.lines[static_cast<std::size_t>(j)].length_km, 1000);
  std::vector<RationalVec> valuations;
  std::vector<int> rider_ids;
  std::vector<std::string> labels;
  for (int r = 0; r < static_cast<int>(scenario.riders.size()); ++r) {
    RationalVec row(static_cast<std::size_t>(lines));
    bool nonzero = false;
    for (int j = 0; j < lines; ++j) {
      row[static_cast<std::size_t>(j)] = Rational::round_to(rider_valuation(scenario, r, j), 1000000);
      nonzero |= !(row[static_cast<std::size_t>(j)] == Rational(0));
    }
    if (!nonzero) continue;
    valuations.push_back(std::move(row));
    rider_ids.push_back(r);
    labels.push_back("rider-" + std::to_string(r));
  }
  if (valuations.empty()) throw EmptyScenario();
  std::vector<RationalVec> endowments(valuations.size(), RationalVec{Rational(1)});
  return TransitGame{Game(RationalMatrix{lengths}, std::move(endowments), std::move(valuations), std::move(labels)),
                     std::move(rider_ids)};
}

/// The motivating shape: one long line serving a suburban rider end to end,
/// one short downtown line serving the other two riders cheaply.
inline TransitScenario dilemma_scenario() {
  TransitScenario scenario;
  scenario.nodes = {{0.0, 0.0}, {5000.0, 0.0}, {10000.0, 0.0}, {4800.0, 0.0}, {5200.0, 0.0}};
  scenario.lines = {TransitLine{{0, 1, 2}, 10.0}, TransitLine{{3, 4}, 0.4}};
  scenario.riders = {TransitRider{0, 2}, TransitRider{3, 4}, TransitRider{4, 3}};
  scenario.validate();
  return scenario;
}

/// Synthetic grid city: intersections on a regular lattice, axis-aligned
/// lines with stops at every other intersection, and riders drawn with a
/// bias toward the center.  Deterministic in the seed.
inline TransitScenario grid_city(std::uint64_t seed, int width, int height, int lines, int riders) {
  if (width < 2 || height < 2 || lines < 1 || riders < 1)
    throw Error("grid city needs positive dimensions, lines, and riders");
  std::mt19937_64 rng(seed);
  constexpr double kSpacing = 250.0;  // meters between intersections
  TransitScenario scenario;
  const int nx = width + 1, ny = height + 1;
  scenario.nodes.reserve(static_cast<std::size_t>(nx * ny));
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      scenario.nodes.push_back(Point{ix * kSpacing, iy * kSpacing});
  const auto node_at = [nx](int ix, int iy) { return iy * nx + ix; };

  for (int l = 0; l < lines; ++l) {
    TransitLine line;
    if (l % 2 == 0) {
      const int iy = static_cast<int>(rng() % static_cast<std::uint64_t>(ny));
      for (int ix = 0; ix < nx; ix += 2) line.stops.push_back(node_at(ix, iy));
      line.length_km = width * kSpacing / 1000.0;
    } else {
      const int ix = static_cast<int>(rng() % static_cast<std::uint64_t>(nx));
      for (int iy = 0; iy < ny; iy += 2) line.stops.push_back(node_at(ix, iy));
      line.length_km = height * kSpacing / 1000.0;
    }
    scenario.lines.push_back(std::move(line));
  }

  const auto uniform01 = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1p-53; };
  const auto sample_node = [&]() {
    // Two-thirds of draws concentrate on the central third of the grid.
    const bool downtown = uniform01() < 2.0 / 3.0;
    const double lo = downtown ? 1.0 / 3.0 : 0.0, hi = downtown ? 2.0 / 3.0 : 1.0;
    const int ix = static_cast<int>((lo + (hi - lo) * uniform01()) * (nx - 1) + 0.5);
    const int iy = static_cast<int>((lo + (hi - lo) * uniform01()) * (ny - 1) + 0.5);
    return node_at(ix, iy);
  };
  for (int r = 0; r < riders; ++r) {
    const int origin = sample_node();
    int destination = sample_node();
    int guard = 0;
    while (destination == origin && ++guard < 64) destination = sample_node();
    if (destination == origin) destination = (origin + 1) % static_cast<int>(scenario.nodes.size());
    scenario.riders.push_back(TransitRider{origin, destination});
  }
  scenario.validate();
  return scenario;
}

}  // namespace corecut::gen

#endif  // CORECUT_INSTANCES_HPP
