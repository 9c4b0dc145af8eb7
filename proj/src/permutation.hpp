#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sbt {

// A permutation of {0, ..., n-1}. Construction validates the contents.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::int32_t> elems);

  static Permutation identity(std::size_t n);
  // Parses 1-based, whitespace-separated values (the external text format).
  static Permutation parse_one_based(const std::string& line);

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  std::int32_t operator[](std::size_t i) const { return elems_[i]; }
  std::span<const std::int32_t> elems() const { return elems_; }
  bool is_identity() const;
  Permutation inverse() const;

  // Circular extension: a fixed 0 is placed in front and every value shifted
  // up by one, giving n + 1 elements (and n + 1 black edges).
  std::vector<std::int32_t> extended() const;

  std::string to_one_based_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::int32_t> elems_;
};

// trans(i, j, k): exchange X = p[i..j-1] and Y = p[j..k-1] where p is the
// 1-based sequence (equivalently, the extended sequence with its fixed 0 at
// index 0). Valid iff 1 <= i < j < k <= n + 1.
struct Transposition {
  std::int32_t i = 0;
  std::int32_t j = 0;
  std::int32_t k = 0;

  friend bool operator==(const Transposition&, const Transposition&) = default;
  friend auto operator<=>(const Transposition&, const Transposition&) = default;
};

// Moves together with the number of them that are 2-moves when applied in
// order. For an (x, y)-sequence x = moves.size() and y <= two_move_count.
struct MoveSequence {
  std::vector<Transposition> moves;
  int two_move_count = 0;

  std::size_t size() const { return moves.size(); }
  bool empty() const { return moves.empty(); }
};

bool is_valid_transposition(const Transposition& t, std::size_t n);

// Applies t to a 1-based sequence stored 0-based in `seq` (so X = seq[i-1..j-2]).
// Throws RangeError when t is not valid for seq.size().
void apply_to_sequence(std::vector<std::int32_t>& seq, const Transposition& t);

Transposition inverse(const Transposition& t);

}  // namespace sbt
