#include "doctest.h"
#include "errors.hpp"
#include "oracles.hpp"
#include "permutation.hpp"

using sbt::Permutation;
using sbt::Transposition;

TEST_SUITE("permutation") {
  TEST_CASE("parse one based") {
    auto p = Permutation::parse_one_based("3 1 2");
    CHECK(p.size() == 3);
    CHECK(p[0] == 2);
    CHECK(p[1] == 0);
    CHECK(p.to_one_based_string() == "3 1 2");
  }

  TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(Permutation::parse_one_based("1 1"), sbt::InputError);
    CHECK_THROWS_AS(Permutation::parse_one_based("1 x"), sbt::InputError);
    CHECK_THROWS_AS(Permutation::parse_one_based("0 1"), sbt::InputError);
    CHECK_THROWS_AS(Permutation::parse_one_based("1 3"), sbt::InputError);
    CHECK_THROWS_AS(Permutation(std::vector<std::int32_t>{0, 2}), sbt::InputError);
  }

  TEST_CASE("empty line is the empty permutation") {
    auto p = Permutation::parse_one_based("   ");
    CHECK(p.empty());
    CHECK(p.is_identity());
  }

  TEST_CASE("extended form") {
    Permutation p({1, 0});
    CHECK(p.extended() == std::vector<std::int32_t>{0, 2, 1});
  }

  TEST_CASE("inverse") {
    Permutation p({2, 0, 1});
    CHECK(p.inverse() == Permutation({1, 2, 0}));
    CHECK(Permutation::identity(4).is_identity());
  }

  TEST_CASE("transposition on sequences") {
    std::vector<std::int32_t> s{1, 0, 2};
    sbt::apply_to_sequence(s, {1, 2, 3});
    CHECK(s == std::vector<std::int32_t>{0, 1, 2});
    std::vector<std::int32_t> h{10, 11, 12, 13};
    sbt::apply_to_sequence(h, {1, 3, 5});
    CHECK(h == std::vector<std::int32_t>{12, 13, 10, 11});
    CHECK_THROWS_AS(sbt::apply_to_sequence(h, {1, 1, 3}), sbt::RangeError);
    CHECK_THROWS_AS(sbt::apply_to_sequence(h, {1, 2, 6}), sbt::RangeError);
    CHECK_THROWS_AS(sbt::apply_to_sequence(h, {0, 2, 3}), sbt::RangeError);
  }

  TEST_CASE("inverse transposition undoes the move") {
    std::mt19937_64 rng(3);
    for (int r = 0; r < 200; ++r) {
      std::size_t n = 3 + rng() % 20;
      auto s = oracle::random_permutation(n, rng);
      auto orig = s;
      std::int32_t i = 1 + rng() % (n - 1);
      std::int32_t j = i + 1 + rng() % (n - i);
      std::int32_t k = j + 1 + rng() % (n + 1 - j);
      Transposition t{i, j, k};
      sbt::apply_to_sequence(s, t);
      oracle::Seq o = orig;
      oracle::apply(o, t);
      CHECK(s == o);
      sbt::apply_to_sequence(s, sbt::inverse(t));
      CHECK(s == orig);
    }
  }
}
