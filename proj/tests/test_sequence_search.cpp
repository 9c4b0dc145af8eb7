#include "breakpoint_graph.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "sequence_search.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

using sbt::GraphState;

namespace {

oracle::Seq moved(const oracle::Seq& ext, const sbt::Transposition& t) {
  oracle::Seq body(ext.begin() + 1, ext.end());
  oracle::apply(body, t);
  oracle::Seq out{0};
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

bool three_permutation(const oracle::Seq& ext) {
  for (const auto& c : oracle::cycles_of(ext).cycles)
    if (c.size() != 1 && c.size() != 3) return false;
  return true;
}

// Replays seq and returns the final state; fails the test on a lost odd cycle
// or a wrong 2-move count.
oracle::Seq replay_checked(const oracle::Seq& ext, const sbt::MoveSequence& seq) {
  auto cur = ext;
  int twos = 0;
  for (const auto& t : seq.moves) {
    REQUIRE(oracle::valid(t, cur.size() - 1));
    int d = oracle::delta(cur, t);
    REQUIRE(d >= 0);
    twos += d == 2;
    cur = moved(cur, t);
  }
  REQUIRE(twos == seq.two_move_count);
  return cur;
}

// Every triple of cut positions on a state with N black edges.
std::vector<sbt::Transposition> all_moves(std::size_t N) {
  std::vector<sbt::Transposition> out;
  const auto n = static_cast<std::int32_t>(N);
  for (std::int32_t i = 1; i <= n; ++i)
    for (std::int32_t j = i + 1; j <= n; ++j)
      for (std::int32_t k = j + 1; k <= n; ++k) out.push_back({i, j, k});
  return out;
}

// Shortest nonempty all-2-move sequence (up to depth) ending in a
// 3-permutation.
int shortest_all_two(const oracle::Seq& ext, int depth, bool top = true) {
  if (!top && three_permutation(ext)) return 0;
  if (depth == 0) return -1;
  int best = -1;
  for (const auto& t : all_moves(ext.size())) {
    if (oracle::delta(ext, t) != 2) continue;
    int r = shortest_all_two(moved(ext, t), depth - 1, false);
    if (r >= 0 && (best < 0 || r + 1 < best)) best = r + 1;
  }
  return best;
}

// Three moves, none losing odd cycles, at least two 2-moves, ending in a
// 3-permutation.
bool exists_32(const oracle::Seq& ext) {
  auto moves = all_moves(ext.size());
  std::function<bool(const oracle::Seq&, int, int)> go = [&](const oracle::Seq& s, int left, int twos) {
    if (left == 0) return twos >= 2 && three_permutation(s);
    if (twos + left < 2) return false;
    for (const auto& t : moves) {
      int d = oracle::delta(s, t);
      if (d < 0) continue;
      if (go(moved(s, t), left - 1, twos + (d == 2))) return true;
    }
    return false;
  };
  return go(ext, 3, 0);
}

template <class F>
void for_each_permutation(std::size_t n, F f) {
  std::vector<std::int32_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do f(p);
  while (std::next_permutation(p.begin(), p.end()));
}

std::vector<sbt::CycleId> nontrivial(const GraphState& g) {
  std::vector<sbt::CycleId> out;
  for (auto c : g.live_cycles())
    if (g.cycle(c).length > 1) out.push_back(c);
  return out;
}

}  // namespace

TEST_SUITE("search") {
  TEST_CASE("2-move on a cycle") {
    // reversal of five: two intersecting unoriented 3-cycles
    auto unoriented = sbt::build_graph(sbt::Permutation({4, 3, 2, 1, 0}));
    REQUIRE(unoriented.three_cycles().size() == 2);
    CHECK_FALSE(sbt::find_2_move_on_cycle(unoriented, unoriented.three_cycles()[0]).has_value());
    auto oriented = sbt::build_graph(sbt::Permutation({1, 2, 0}));
    auto t = sbt::find_2_move_on_cycle(oriented, oriented.three_cycles()[0]);
    REQUIRE(t.has_value());
    CHECK(oriented.classify(*t) == 2);
  }

  TEST_CASE("2-move on every 3-cycle of simple permutations up to 7") {
    for (std::size_t n = 1; n <= 7; ++n)
      for_each_permutation(n, [](const std::vector<std::int32_t>& p) {
        auto ext = oracle::extend(p);
        if (!oracle::simple(ext)) return;
        GraphState g(ext);
        for (auto c : g.three_cycles()) {
          std::vector<std::int32_t> idx;
          for (auto e : g.cycle(c).edges()) idx.push_back(g.edge_index(e));
          auto t = sbt::find_2_move_on_cycle(g, c);
          REQUIRE(t.has_value() == oracle::oriented(ext, idx));
          if (t) REQUIRE(oracle::delta(ext, *t) == 2);
        }
      });
  }

  TEST_CASE("no (2,2) when every cycle is unoriented and there are no 2-cycles") {
    auto g = sbt::build_graph(sbt::Permutation({4, 3, 2, 1, 0}));
    sbt::Step2Trace trace;
    CHECK_FALSE(sbt::find_22_sequence(g, &trace).has_value());
    CHECK(trace.sub_step == 'd');
  }

  TEST_CASE("two intersecting 2-cycles give a (2,2)") {
    bool seen = false;
    for (std::size_t n = 2; n <= 6 && !seen; ++n)
      for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
        if (seen) return;
        auto ext = oracle::extend(p);
        auto oc = oracle::cycles_of(ext);
        std::vector<std::vector<std::int32_t>> twos;
        for (const auto& c : oc.cycles)
          if (c.size() == 2) twos.push_back(c);
          else if (c.size() != 1) return;
        if (twos.size() != 2) return;
        if (!oracle::alternate(twos[0][0], twos[0][1], twos[1][0], twos[1][1],
                               static_cast<std::int32_t>(ext.size())))
          return;
        GraphState g(ext);
        sbt::Step2Trace trace;
        auto seq = sbt::find_22_sequence(g, &trace);
        REQUIRE(seq.has_value());
        CHECK(trace.sub_step == 'b');
        CHECK(seq->size() == 2);
        CHECK(seq->two_move_count == 2);
        auto end = replay_checked(ext, *seq);
        CHECK(oracle::simple(end));
        seen = true;
      });
    CHECK(seen);
  }

  TEST_CASE("(2,2) detection against depth-2 brute force up to 6") {
    int yes = 0, no = 0;
    for (std::size_t n = 1; n <= 6; ++n)
      for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
        auto ext = oracle::extend(p);
        if (!oracle::simple(ext)) return;
        GraphState g(ext);
        auto seq = sbt::find_22_sequence(g);
        bool expect = oracle::has_22(ext);
        REQUIRE(seq.has_value() == expect);
        if (seq) {
          REQUIRE(seq->size() == 2);
          auto end = replay_checked(ext, *seq);
          REQUIRE(seq->two_move_count == 2);
          REQUIRE(oracle::simple(end));
          ++yes;
        } else {
          ++no;
        }
      });
    CHECK(yes > 0);
    CHECK(no > 0);
  }

  TEST_CASE("(2,2) check needs a simple permutation") {
    auto g = sbt::build_graph(sbt::Permutation({3, 2, 1, 0}));
    REQUIRE_FALSE(g.is_simple());
    CHECK_THROWS_AS(sbt::find_22_sequence(g), sbt::ContractError);
  }

  TEST_CASE("(3,2) search on all 3-permutations up to 7") {
    std::int64_t count = 0, single = 0;
    for (std::size_t n = 1; n <= 7; ++n)
      for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
        auto ext = oracle::extend(p);
        if (!three_permutation(ext) || oracle::odd_cycles(ext) == static_cast<int>(ext.size())) return;
        GraphState g(ext);
        for (auto c : std::vector<sbt::CycleId>(g.three_cycles().begin(), g.three_cycles().end())) {
          auto seq = sbt::find_32_sequence(g, c);
          auto end = replay_checked(ext, seq);
          REQUIRE(three_permutation(end));
          if (seq.size() == 1) {
            REQUIRE(seq.two_move_count == 1);
            ++single;
          } else {
            REQUIRE(seq.size() == 3);
            REQUIRE(seq.two_move_count >= 2);
          }
          ++count;
        }
      });
    CHECK(count > 0);
    CHECK(single > 0);
  }

  TEST_CASE("(3,2) on two intersecting unoriented 3-cycles") {
    bool seen = false;
    for (std::size_t n = 4; n <= 6 && !seen; ++n)
      for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
        if (seen) return;
        auto ext = oracle::extend(p);
        auto oc = oracle::cycles_of(ext);
        std::vector<std::vector<std::int32_t>> threes;
        for (const auto& c : oc.cycles)
          if (c.size() == 3) threes.push_back(c);
          else if (c.size() != 1) return;
        if (threes.size() != 2) return;
        if (oracle::oriented(ext, threes[0]) || oracle::oriented(ext, threes[1])) return;
        GraphState g(ext);
        if (!g.cycles_intersect(g.three_cycles()[0], g.three_cycles()[1])) return;
        REQUIRE(exists_32(ext));
        auto seq = sbt::find_32_sequence(g);
        CHECK(seq.size() == 3);
        CHECK(seq.two_move_count >= 2);
        CHECK(three_permutation(replay_checked(ext, seq)));
        seen = true;
      });
    CHECK(seen);
  }

  TEST_CASE("(3,2) preconditions") {
    auto id = sbt::build_graph(sbt::Permutation::identity(4));
    CHECK_THROWS_AS(sbt::find_32_sequence(id), sbt::ContractError);
  }

  TEST_CASE("oriented cycle is a depth-1 sequence") {
    auto g = sbt::build_graph(sbt::Permutation({1, 2, 0}));
    std::vector<sbt::CycleId> cycles{g.three_cycles()[0]};
    auto seq = sbt::find_xy_sequence(g, cycles);
    REQUIRE(seq.has_value());
    CHECK(seq->size() == 1);
    CHECK(seq->two_move_count == 1);
  }

  TEST_CASE("all-2-move search matches brute force on two intersecting cycles") {
    int shortest_two = 0, pairs = 0;
    for (std::size_t n = 2; n <= 7; ++n)
      for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
        auto ext = oracle::extend(p);
        if (!oracle::simple(ext)) return;
        GraphState g(ext);
        auto cyc = nontrivial(g);
        if (cyc.size() != 2 || !g.cycles_intersect(cyc[0], cyc[1])) return;
        int expect = shortest_all_two(ext, 2);
        auto seq = sbt::find_xy_sequence(g, cyc, 1, 1, 2, true);
        REQUIRE(seq.has_value() == (expect >= 0));
        if (seq) {
          REQUIRE(static_cast<int>(seq->size()) == expect);
          REQUIRE(seq->two_move_count == expect);
          REQUIRE(three_permutation(replay_checked(ext, *seq)));
        }
        // Depth 2 exactly: two 2-moves ending simple.
        sbt::SearchLimits two_two{2, {0, 2, 2}, sbt::EndState::Simple};
        auto pair = sbt::search_sequence(g, cyc, two_two);
        REQUIRE(pair.has_value() == oracle::has_22(ext));
        if (pair) {
          REQUIRE(pair->size() == 2);
          REQUIRE(oracle::simple(replay_checked(ext, *pair)));
          ++pairs;
        }
        shortest_two += expect == 2;
      });
    CHECK(pairs > 0);
    MESSAGE("pairs needing two moves for a 3-permutation: " << shortest_two);
  }

  TEST_CASE("exhausted cap returns nothing") {
    auto g = sbt::build_graph(sbt::Permutation({4, 3, 2, 1, 0}));
    std::vector<sbt::CycleId> cycles(g.three_cycles().begin(), g.three_cycles().end());
    CHECK_FALSE(sbt::find_xy_sequence(g, cycles, 1, 1, 1).has_value());
    CHECK_THROWS_AS(sbt::find_xy_sequence(g, cycles, 2, 1), sbt::InputError);
    CHECK_THROWS_AS(sbt::find_xy_sequence(g, cycles, 8, 11, 9), sbt::InputError);
  }

  TEST_CASE("search respects the ratio") {
    std::mt19937_64 rng(41);
    int found = 0;
    for (int r = 0; r < 300; ++r) {
      auto p = oracle::random_permutation(6 + rng() % 10, rng);
      auto ext = oracle::extend(p);
      if (!three_permutation(ext)) continue;
      GraphState g(ext);
      auto comps = g.components();
      if (comps.empty()) continue;
      auto& comp = comps[0];
      std::size_t edges = 0;
      for (auto c : comp) edges += g.cycle(c).length;
      if (edges > 24) continue;
      auto seq = sbt::find_xy_sequence(g, comp);
      if (!seq) continue;
      ++found;
      REQUIRE(11 * seq->two_move_count >= 8 * static_cast<int>(seq->size()));
      REQUIRE(three_permutation(replay_checked(ext, *seq)));
    }
    CHECK(found > 0);
  }
}
