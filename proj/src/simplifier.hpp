#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "permutation.hpp"

namespace sbt {

// Result of making a permutation simple by inserting elements. Sequences are
// in extended form (fixed 0 at index 0).
struct SimplificationMap {
  std::vector<std::int32_t> original;            // extended input
  std::vector<std::int32_t> padded;              // extended simple permutation
  std::vector<std::int32_t> value_remap;         // padded value -> original value, -1 if inserted
  std::vector<std::int32_t> inserted_positions;  // indices into `padded`, ascending

  std::size_t insertions() const { return inserted_positions.size(); }
  // Drops inserted elements and undoes the re-ranking.
  std::vector<std::int32_t> unpad() const;
};

// Splits every cycle with more than three black edges by repeatedly inserting
// one element that cuts a 3-cycle off the front of the cycle's traversal.
// Each insertion adds one cycle and one odd cycle, so the lower bound is
// unchanged. Linear time.
SimplificationMap simplify(const Permutation& p);
SimplificationMap simplify_extended(std::span<const std::int32_t> extended);

// Translates moves that sort the padded permutation into moves that sort the
// original one; moves that leave every original element in place are dropped.
// ContractError if `moves` does not sort the padded permutation.
std::vector<Transposition> mimic(const SimplificationMap& map, std::span<const Transposition> moves);

}  // namespace sbt
