#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "breakpoint_graph.hpp"
#include "permutation.hpp"

namespace sbt {

enum class EndState {
  Simple,       // every cycle has at most three black edges
  NoTwoCycles,  // only 1-cycles and 3-cycles
};

// Bounded search over transpositions cutting only black edges of a fixed set
// of cycles. A sequence of x moves is accepted when at least min_two_moves[x]
// of them are 2-moves, none is a -2-move and the end state holds. Shorter
// sequences are tried first; within one length, 2-moves come before 0-moves
// and each group is tried in increasing (i, j, k) order.
struct SearchLimits {
  int depth_cap = 4;
  std::vector<int> min_two_moves;  // indexed by x, size depth_cap + 1
  EndState end = EndState::NoTwoCycles;
};

std::optional<MoveSequence> search_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                            const SearchLimits& limits);
// With the cycles' edge indices already known (see LocalGraph).
std::optional<MoveSequence> search_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                            std::span<const std::vector<std::int32_t>> edge_indices,
                                            const SearchLimits& limits);

// A 2-move on three black edges of c, if c is oriented.
std::optional<Transposition> find_2_move_on_cycle(const GraphState& g, CycleId c);

struct Step2Trace {
  char sub_step = '-';       // 'a' four or more 2-cycles, 'b' two intersecting,
                             // 'c' two non-intersecting, 'd' no 2-cycles
  bool four_two_cycles_search_failed = false;
};

// A (2,2)-sequence ending in a simple permutation, if one exists. ContractError
// unless g is simple.
std::optional<MoveSequence> find_22_sequence(const GraphState& g, Step2Trace* trace = nullptr);

// Requires only 1- and 3-cycles and at least one 3-cycle. Starting from
// `start` (default: the 3-cycle with the leftmost edge) returns either a single
// 2-move on an oriented cycle or three moves of which at least two are
// 2-moves, leaving only 1- and 3-cycles.
MoveSequence find_32_sequence(const GraphState& g, std::optional<CycleId> start = std::nullopt);

// Shortest sequence of at most depth_cap moves over the given cycles with
// (#2-moves / #moves) >= ratio_num / ratio_den, ending in a permutation with
// only 1- and 3-cycles (or merely simple when forbid_two_cycles is false).
std::optional<MoveSequence> find_xy_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                             int ratio_num = 8, int ratio_den = 11, int depth_cap = 4,
                                             bool forbid_two_cycles = true);
std::optional<MoveSequence> find_xy_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                             std::span<const std::vector<std::int32_t>> edge_indices,
                                             int ratio_num = 8, int ratio_den = 11, int depth_cap = 4,
                                             bool forbid_two_cycles = true);

}  // namespace sbt
