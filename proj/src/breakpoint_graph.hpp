#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "huge_pages.hpp"
#include "permutation.hpp"
#include "permutation_tree.hpp"

namespace sbt {

// Black edges are identified by name: the element immediately to the right of
// the edge. Edge b_i of the extended sequence (between indices i-1 and i,
// circularly) is named seq[i]. A transposition keeps the three cut edges'
// names and only rewires their left endpoints, so names stay valid across
// moves while indices shift.
using EdgeName = std::int32_t;
using CycleId = std::int32_t;

struct AppliedMove {
  Transposition t;
  int delta_c_odd = 0;
  std::vector<CycleId> created;
};

// Breakpoint graph of an extended permutation (element 0 fixed at index 0)
// together with the permutation tree that locates edges. Cycles are kept
// decomposed at all times; a move recomputes only the cycles through its
// three cut edges.
class GraphState {
 public:
  struct Cycle {
    std::int32_t length = 0;
    std::uint32_t generation = 0;  // bumped whenever the slot is reused
    bool alive = false;
    bool marked = false;
    std::int32_t bucket_slot = -1;
    std::array<EdgeName, 3> inline_edges{};
    std::vector<EdgeName> long_edges;  // used when length > 3

    std::span<const EdgeName> edges() const {
      return length <= 3 ? std::span<const EdgeName>(inline_edges.data(), length)
                         : std::span<const EdgeName>(long_edges);
    }
  };

  // `extended` must be a permutation of 0..N-1 with extended[0] == 0.
  explicit GraphState(std::span<const std::int32_t> extended);

  std::int32_t edge_count() const { return n_; }
  std::int32_t c_odd() const { return c_odd_; }
  std::int32_t cycle_count() const { return cycle_count_; }
  std::int32_t lower_bound() const { return (n_ - c_odd_ + 1) / 2; }
  bool is_identity() const { return c_odd_ == n_; }
  bool is_simple() const { return long_cycles_ == 0; }
  std::int32_t long_cycle_count() const { return long_cycles_; }

  const PermTree& tree() const { return tree_; }
  std::vector<std::int32_t> sequence() const { return tree_.to_sequence(); }

  // Index b_i of an edge (0..N-1) and its linear cut position (1..N, the
  // wrap-around edge b_0 sitting at N).
  std::int32_t edge_index(EdgeName e) const;
  void edge_indices(std::span<const EdgeName> es, std::span<std::int32_t> out) const;
  std::int32_t edge_position(EdgeName e) const;
  EdgeName edge_at_position(std::int32_t p) const;
  EdgeName edge_at_index(std::int32_t i) const { return edge_at_position(i == 0 ? n_ : i); }

  // Left neighbour of element v (circular) and the grey successor used to walk
  // cycles: next(e) = pred(e) + 1 mod N.
  std::int32_t pred(std::int32_t v) const { return edges_[v].pred; }
  std::int32_t succ(std::int32_t v) const { return edges_[v].succ; }
  EdgeName next_edge(EdgeName e) const { return (edges_[e].pred + 1) % n_; }

  CycleId cycle_of(EdgeName e) const { return edges_[e].cycle; }
  const Cycle& cycle(CycleId c) const { return cycles_[c]; }
  bool alive(CycleId c) const { return c >= 0 && c < static_cast<CycleId>(cycles_.size()) && cycles_[c].alive; }
  // Cycle ids are recycled; a (id, generation) pair stays unambiguous.
  bool alive(CycleId c, std::uint32_t generation) const {
    return alive(c) && cycles_[c].generation == generation;
  }
  std::size_t cycle_slots() const { return cycles_.size(); }
  std::span<const CycleId> two_cycles() const { return buckets_[0]; }
  std::span<const CycleId> three_cycles() const { return buckets_[1]; }
  std::vector<CycleId> live_cycles() const;

  // 2-move available on three of the cycle's own black edges.
  bool is_oriented(CycleId c) const;

  // Transposition cutting at the three named edges (any order).
  Transposition transposition_for(EdgeName a, EdgeName b, EdgeName c) const;
  std::array<EdgeName, 3> cut_edges(const Transposition& t) const;

  // c_odd(after) - c_odd(before); always in {-2, 0, 2}. RangeError on an
  // invalid transposition.
  int classify(const Transposition& t) const;
  int classify_edges(EdgeName a, EdgeName b, EdgeName c) const;

  AppliedMove apply(const Transposition& t);

  // Intersecting-pair query: given two black edges of the same unoriented cycle, the
  // returned pair lies on one cycle and intersects the given pair. The cycle
  // must have at most three edges.
  std::pair<EdgeName, EdgeName> query_intersecting_pair(EdgeName a, EdgeName b) const;
  // Same query from the two edge indices, without checking its precondition.
  std::pair<EdgeName, EdgeName> query_at_indices(std::int32_t index_a, std::int32_t index_b) const;
  bool pairs_intersect(std::pair<EdgeName, EdgeName> p, std::pair<EdgeName, EdgeName> q) const;
  bool cycles_intersect(CycleId c, CycleId d) const;

  // Tagged elements form a subsequence; while any are tagged, every applied
  // move is also logged as the move it induces on that subsequence (dropped
  // when it leaves the subsequence unchanged).
  void set_tagged(std::span<const std::int32_t> elements, bool on) { tree_.set_tags(elements, on); }
  std::vector<Transposition> take_tagged_log() {
    std::vector<Transposition> out;
    out.swap(tagged_log_);
    return out;
  }

  void set_marked(CycleId c, bool on);
  void set_marked(std::span<const CycleId> cs, bool on);
  std::size_t marked_edge_count() const;
  // Marked cycle owning the leftmost marked black edge.
  std::optional<CycleId> first_marked() const;

  // Maximal connected sets (under intersection) of the given cycles, each list
  // ordered by leftmost edge, components ordered by their leftmost edge.
  std::vector<std::vector<CycleId>> components_of(std::span<const CycleId> cycles) const;
  std::vector<std::vector<CycleId>> components() const;

  // One "cycle k=.. oriented=.. edges=.." line per cycle, sorted by the
  // smallest edge index; edges listed by index in traversal order.
  std::string dump() const;

  // Structural audit against a from-scratch decomposition. Empty when consistent.
  std::string audit() const;

  // Accumulated wall time spent inside permutation-tree operations.
  void enable_tree_timing(bool on) { time_tree_ = on; }
  std::int64_t tree_ns() const { return tree_ns_; }

 private:
  CycleId new_cycle(std::span<const EdgeName> edges);
  void kill_cycle(CycleId c);
  void sync_flags() const;
  void bucket_add(CycleId c);
  void bucket_remove(CycleId c);
  std::array<EdgeName, 3> ordered_cut(EdgeName a, EdgeName b, EdgeName c,
                                      std::array<std::int32_t, 3>* positions) const;
  int delta_for_ordered(const std::array<EdgeName, 3>& cut) const;

  std::int32_t n_ = 0;
  // Mutable only so const queries can settle flags deferred by kill_cycle.
  mutable PermTree tree_;
  mutable std::vector<EdgeName> stale_flags_;
  std::vector<Transposition> tagged_log_;
  // Everything a move reads about one element, in a single 16-byte slot.
  struct EdgeSlot {
    std::int32_t pred = 0;
    std::int32_t succ = 0;
    CycleId cycle = -1;
    mutable std::uint32_t stamp = 0;  // scratch for const queries
  };
  detail::huge_vector<EdgeSlot> edges_;
  detail::huge_vector<Cycle> cycles_;
  std::vector<CycleId> free_cycles_;
  std::array<std::vector<CycleId>, 2> buckets_;  // 2-cycles, 3-cycles
  std::int32_t c_odd_ = 0;
  std::int32_t cycle_count_ = 0;
  std::int32_t long_cycles_ = 0;
  mutable std::uint32_t stamp_gen_ = 0;
  bool time_tree_ = false;
  mutable std::int64_t tree_ns_ = 0;
};

// Builds the graph for a plain 0-based permutation via its circular extension.
GraphState build_graph(const Permutation& p);

// Alternation of two pairs of black-edge indices in cyclic order. InputError
// if the four indices are not distinct.
bool pairs_intersect(std::pair<std::int32_t, std::int32_t> a, std::pair<std::int32_t, std::int32_t> b);

// ceil((#black edges - c_odd) / 2): every transposition changes c_odd by at
// most 2 and the identity has c_odd = #black edges.
std::int32_t lower_bound(const GraphState& g);
std::int32_t lower_bound(const Permutation& p);

}  // namespace sbt
