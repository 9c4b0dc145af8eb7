#include "breakpoint_graph.hpp"
#include "doctest.h"
#include "eh_engine.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>

using sbt::DistanceTable;
using sbt::Permutation;

namespace {

// Plain BFS over vectors, keyed by the sequence itself.
std::map<oracle::Seq, int> bfs(std::size_t n) {
  oracle::Seq id(n);
  std::iota(id.begin(), id.end(), 0);
  std::map<oracle::Seq, int> dist{{id, 0}};
  std::queue<oracle::Seq> q;
  q.push(id);
  const auto N = static_cast<std::int32_t>(n);
  while (!q.empty()) {
    auto s = q.front();
    q.pop();
    for (std::int32_t i = 1; i <= N; ++i)
      for (std::int32_t j = i + 1; j <= N; ++j)
        for (std::int32_t k = j + 1; k <= N + 1; ++k) {
          auto t = s;
          oracle::apply(t, {i, j, k});
          if (dist.emplace(t, dist[s] + 1).second) q.push(t);
        }
  }
  return dist;
}

std::filesystem::path scratch_dir(const char* name) {
  auto d = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("trivial distances") {
    auto t2 = DistanceTable::build(2);
    CHECK(t2.distance(Permutation::identity(2)) == 0);
    CHECK(t2.distance(Permutation({1, 0})) == 1);
    CHECK(sbt::exact_distance(Permutation::identity(5)) == 0);
    CHECK(sbt::exact_distance(Permutation({1, 0})) == 1);
  }

  TEST_CASE("rank round trip") {
    CHECK(sbt::rank_permutation(std::vector<std::int32_t>{0, 1, 2, 3}) == 0);
    CHECK(sbt::rank_permutation(std::vector<std::int32_t>{3, 2, 1, 0}) == 23);
    for (std::uint64_t r = 0; r < 720; ++r) {
      auto p = sbt::unrank_permutation(r, 6);
      REQUIRE(sbt::rank_permutation(p) == r);
    }
  }

  TEST_CASE("tables match a plain BFS up to 7") {
    for (std::size_t n = 1; n <= 7; ++n) {
      auto table = DistanceTable::build(n);
      auto ref = bfs(n);
      REQUIRE(ref.size() == table.states());
      for (const auto& [p, d] : ref) REQUIRE(table.distance(Permutation(p)) == d);
    }
  }

  TEST_CASE("n = 8 histogram") {
    auto table = DistanceTable::build(8);
    CHECK(table.states() == 40320);
    CHECK(table.max_distance() == 5);
    CHECK(table.histogram() == std::vector<std::uint64_t>{1, 84, 1932, 13467, 22000, 2836});
  }

  TEST_CASE("BFS layers are consistent") {
    for (std::size_t n = 2; n <= 8; ++n) {
      auto table = DistanceTable::build(n);
      const auto N = static_cast<std::int32_t>(n);
      for (std::uint64_t r = 0; r < table.states(); ++r) {
        auto p = sbt::unrank_permutation(r, n);
        int d = table.distance_of_rank(r);
        bool below = d == 0;
        for (std::int32_t i = 1; i <= N; ++i)
          for (std::int32_t j = i + 1; j <= N; ++j)
            for (std::int32_t k = j + 1; k <= N + 1; ++k) {
              auto q = p;
              oracle::apply(q, {i, j, k});
              int e = table.distance_of_rank(sbt::rank_permutation(q));
              REQUIRE(std::abs(e - d) <= 1);
              below = below || e == d - 1;
            }
        REQUIRE(below);
      }
    }
  }

  TEST_CASE("distance is invariant under inversion up to 7") {
    for (std::size_t n = 1; n <= 7; ++n) {
      auto table = DistanceTable::build(n);
      for (std::uint64_t r = 0; r < table.states(); ++r) {
        Permutation p(sbt::unrank_permutation(r, n));
        REQUIRE(table.distance(p) == table.distance(p.inverse()));
      }
    }
  }

  TEST_CASE("lower bound below the exact distance up to 8") {
    auto table = DistanceTable::build(8);
    for (std::uint64_t r = 0; r < table.states(); ++r) {
      Permutation p(sbt::unrank_permutation(r, 8));
      REQUIRE(sbt::lower_bound(p) <= table.distance_of_rank(r));
    }
  }

  TEST_CASE("size guards") {
    CHECK_THROWS_AS(DistanceTable::build(0), sbt::ResourceError);
    CHECK_THROWS_AS(DistanceTable::build(11), sbt::ResourceError);
    CHECK_THROWS_AS(sbt::exact_distance(Permutation::identity(11)), sbt::ResourceError);
    auto t3 = DistanceTable::build(3);
    CHECK_THROWS_AS(t3.distance(Permutation::identity(4)), sbt::RangeError);
  }

  TEST_CASE("cache file round trip") {
    auto dir = scratch_dir("sbt_cache_test");
    auto built = DistanceTable::load_or_build(6, dir);
    auto file = DistanceTable::cache_file(dir, 6);
    REQUIRE(std::filesystem::exists(file));
    CHECK(std::filesystem::file_size(file) == 8 + 720);
    {
      std::ifstream in(file, std::ios::binary);
      char magic[4];
      in.read(magic, 4);
      CHECK(std::string(magic, 4) == "SBT1");
    }
    auto loaded = DistanceTable::load(file, 6);
    REQUIRE(loaded.has_value());
    CHECK(loaded->histogram() == built.histogram());
    CHECK_FALSE(DistanceTable::load(file, 5).has_value());
    // Truncated file is ignored and rebuilt.
    std::filesystem::resize_file(file, 100);
    CHECK_FALSE(DistanceTable::load(file, 6).has_value());
    auto rebuilt = DistanceTable::load_or_build(6, dir);
    CHECK(rebuilt.histogram() == built.histogram());
    CHECK(std::filesystem::file_size(file) == 8 + 720);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("sequence verification") {
    CHECK(sbt::verify_sequence(Permutation::identity(4), {}));
    CHECK(sbt::verify_sequence(Permutation(), {}));
    CHECK_FALSE(sbt::verify_sequence(Permutation({1, 0}), {}));
    std::vector<sbt::Transposition> one{{1, 2, 3}};
    CHECK(sbt::verify_sequence(Permutation({1, 0}), one));
    std::vector<sbt::Transposition> bad{{1, 2, 4}};
    CHECK_FALSE(sbt::verify_sequence(Permutation({1, 0}), bad));
  }

  TEST_CASE("sorter output replays up to 7") {
    for (std::size_t n = 1; n <= 7; ++n) {
      std::vector<std::int32_t> p(n);
      std::iota(p.begin(), p.end(), 0);
      do {
        auto rep = sbt::sort(Permutation(p), {.timing = false});
        REQUIRE(sbt::verify_sequence(Permutation(p), rep.moves));
        REQUIRE(static_cast<int>(rep.moves.size()) >= sbt::exact_distance(Permutation(p)));
      } while (std::next_permutation(p.begin(), p.end()));
    }
  }
}
