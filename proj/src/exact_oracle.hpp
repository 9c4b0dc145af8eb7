#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "permutation.hpp"

namespace sbt {

// Lehmer-code rank of a permutation of 0..n-1, in 0..n!-1 (identity is 0).
std::uint64_t rank_permutation(std::span<const std::int32_t> p);
std::vector<std::int32_t> unrank_permutation(std::uint64_t rank, std::size_t n);

// Exact transposition distance of every permutation of size n, by
// breadth-first search from the identity.
class DistanceTable {
 public:
  static constexpr std::size_t kMaxN = 10;
  static constexpr std::uint8_t kUnreached = 0xff;

  // ResourceError unless 1 <= n <= kMaxN.
  static DistanceTable build(std::size_t n);
  // Reads dir/sbt_table_<n>.bin when it is valid, else builds and writes it.
  // An unwritable directory is not an error.
  static DistanceTable load_or_build(std::size_t n, const std::filesystem::path& dir);
  static std::optional<DistanceTable> load(const std::filesystem::path& file, std::size_t n);
  // IoError-free: returns false when the file cannot be written.
  bool save(const std::filesystem::path& file) const;
  static std::filesystem::path cache_file(const std::filesystem::path& dir, std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t states() const { return dist_.size(); }
  // RangeError when p has a different size.
  int distance(const Permutation& p) const;
  int distance_of_rank(std::uint64_t rank) const;
  int max_distance() const;
  std::vector<std::uint64_t> histogram() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> dist_;
};

// Distance via a per-process table for size p.size(), loaded from the
// directory named by SBT_TABLE_CACHE when set. ResourceError if too large.
int exact_distance(const Permutation& p);

// True iff the moves are valid in order and sort p.
bool verify_sequence(const Permutation& p, std::span<const Transposition> moves);

}  // namespace sbt
