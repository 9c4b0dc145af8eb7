#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "breakpoint_graph.hpp"

namespace sbt {

// Snapshot of the black edges of a union of cycles, ordered by cut position.
// Since every cut of a search move lies on one of these edges, the cycle
// structure, orientation and the global cut positions of later moves can all
// be simulated here without touching the permutation tree.
class LocalGraph {
 public:
  static constexpr int kMaxEdges = 64;

  struct CycleInfo {
    std::int32_t length = 0;
    std::int32_t first = 0;  // offset into Analysis::members
    bool oriented = false;
  };
  struct Analysis {
    std::int32_t c_odd = 0;
    std::int32_t two_cycles = 0;
    std::int32_t max_length = 0;
    std::vector<CycleInfo> cycles;
    std::vector<std::int32_t> members;  // ranks, grouped per cycle in traversal order
  };

  // ContractError when the cycles do not form a closed edge set or exceed kMaxEdges.
  LocalGraph(const GraphState& g, std::span<const CycleId> cycles);
  // Same, with the edge indices of each cycle (in cycle edge order) supplied.
  LocalGraph(const GraphState& g, std::span<const CycleId> cycles,
             std::span<const std::vector<std::int32_t>> edge_indices);

  int size() const { return m_; }
  EdgeName name_at_rank(int r) const { return name_[order_[r]]; }
  std::int32_t position_at_rank(int r) const { return gpos_[order_[r]]; }
  // Rank of the named edge, -1 if it is not part of this graph.
  int rank_of(EdgeName e) const {
    for (int q = 0; q < m_; ++q)
      if (name_[q] == e) return rank_[q];
    return -1;
  }

  // Applies the transposition cutting at ranks ra < rb < rc and returns it in
  // global cut positions (as it must be applied to the real state).
  Transposition apply(int ra, int rb, int rc);

  // Change in odd-cycle count if apply(ra, rb, rc) were performed; walks only
  // the cycles through the three cut edges.
  int delta(int ra, int rb, int rc) const;

  std::int32_t c_odd() const;
  void analyze(Analysis& out) const;

 private:
  void init(const GraphState& g, std::vector<std::pair<std::int32_t, EdgeName>>& pe);
  int next_of(int e) const { return grey_[rslot_[e]]; }

  int m_ = 0;
  std::int32_t n_ = 0;
  std::array<EdgeName, kMaxEdges> name_{};
  std::array<std::int8_t, kMaxEdges> grey_{};   // r-end slot -> local edge
  std::array<std::int8_t, kMaxEdges> rslot_{};  // local edge -> r-end slot
  std::array<std::int8_t, kMaxEdges> order_{};  // rank -> local edge
  std::array<std::int8_t, kMaxEdges> rank_{};   // local edge -> rank
  std::array<std::int32_t, kMaxEdges> gpos_{};  // local edge -> global cut position
};

}  // namespace sbt
