#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sbt {

namespace detail {
class NodeStore;
}

// Height-balanced (AVL, balance bound 1) binary tree whose leaves spell a
// sequence of distinct non-negative integers. Every internal node has two
// children and caches its height, leaf count and interval maximum, so
// split/join/range-max run in O(log n). Each leaf also carries a 0/1 flag
// whose subtree sums support "leftmost flagged" and prefix-count queries.
//
// Positions are 1-based. A tree is move-only; split halves share node
// storage with the original so value lookups stay O(log n).
class PermTree {
 public:
  static constexpr int kBalanceBound = 1;

  PermTree();
  ~PermTree();
  PermTree(PermTree&&) noexcept;
  PermTree& operator=(PermTree&&) noexcept;
  PermTree(const PermTree&) = delete;
  PermTree& operator=(const PermTree&) = delete;

  // Linear time. Throws InputError on duplicates or negative values.
  static PermTree build(std::span<const std::int32_t> seq);

  // First tree holds the first m elements. Consumes t. RangeError if m > size.
  static std::pair<PermTree, PermTree> split(PermTree&& t, std::size_t m);

  // Concatenation. Trees built independently may be joined; their values must
  // then be disjoint (InputError otherwise).
  static PermTree join(PermTree&& left, PermTree&& right);

  std::size_t size() const;
  bool empty() const { return size() == 0; }
  int height() const;

  // Maximum over positions i..j (inclusive) and the position holding it.
  // Read-only descent. RangeError unless 1 <= i <= j <= size.
  std::pair<std::int32_t, std::size_t> range_max(std::size_t i, std::size_t j) const;
  std::int32_t range_max_value(std::size_t i, std::size_t j) const;

  bool contains(std::int32_t v) const;
  std::size_t position_of(std::int32_t v) const;  // LookupError if absent
  std::int32_t element_at(std::size_t p) const;   // LookupError if out of range
  // position_of for several values at once; the walks overlap in memory.
  void positions_of(std::span<const std::int32_t> vs, std::span<std::size_t> out) const;

  // Exchanges X = [i, j) and Y = [j, k) with three splits and three joins.
  // RangeError unless 1 <= i < j < k <= size + 1.
  // Reports, for the old positions i, j and k, the number of tagged leaves
  // before each and the element found there (-1 for k = size + 1).
  struct MoveTrace {
    std::array<std::size_t, 3> tagged_before{};
    std::array<std::int32_t, 3> heads{};
  };
  MoveTrace apply_transposition(std::size_t i, std::size_t j, std::size_t k);

  std::vector<std::int32_t> to_sequence() const;

  // "((3)(1 2))" style: a leaf is "(v)", a node over two leaves "(a b)", any
  // other internal node "(" left right ")". Empty tree is "()".
  std::string dump() const;

  void set_flag(std::int32_t v, bool on);
  bool flag(std::int32_t v) const;
  std::size_t flagged_count() const;
  // Position of the leftmost flagged leaf.
  std::optional<std::size_t> first_flagged() const;
  std::optional<std::int32_t> first_flagged_value() const;
  // Value of the k-th flagged leaf from the left (k >= 1).
  std::optional<std::int32_t> nth_flagged_value(std::size_t k) const;
  // Number of flagged leaves among positions 1..p.
  std::size_t flagged_prefix(std::size_t p) const;

  // Tags are a second counter, independent of flags. Only counted, never searched.
  void set_tag(std::int32_t v, bool on);
  bool tag(std::int32_t v) const;
  // Batch forms; a large batch costs O(n) instead of one leaf-to-root walk each.
  void set_flags(std::span<const std::int32_t> values, bool on);
  void set_tags(std::span<const std::int32_t> values, bool on);
  std::size_t tagged_count() const;

  // Full structural check: child/parent links, cached fields, AVL balance.
  // Returns an empty string when every invariant holds.
  std::string audit() const;

 private:
  PermTree(std::shared_ptr<detail::NodeStore> store, std::int32_t root);
  std::int32_t leaf_in_tree(std::int32_t v) const;
  void release_all();
  void set_counter(std::span<const std::int32_t> values, bool on, bool tags);

  std::shared_ptr<detail::NodeStore> store_;
  std::int32_t root_ = -1;
};

}  // namespace sbt
