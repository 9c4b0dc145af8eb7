#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "breakpoint_graph.hpp"
#include "permutation.hpp"

namespace sbt {

struct SortOptions {
  int search_depth = 4;
  bool timing = true;
  // Re-audits the graph after every phase (slow; for tests).
  bool audit_phases = false;
};

struct PhaseTimings {
  std::int64_t simplify_ns = 0;
  std::int64_t step2_ns = 0;
  std::int64_t step3_ns = 0;
  std::int64_t main_loop_ns = 0;
  std::int64_t step6_ns = 0;
  std::int64_t step7_ns = 0;
  std::int64_t mimic_ns = 0;
  std::int64_t total_ns = 0;
  std::int64_t tree_ns = 0;  // part of the above spent in tree operations
};

struct SortStats {
  std::size_t inserted_elements = 0;
  char step2_sub_step = '-';
  bool step2_applied = false;
  bool step2_four_search_failed = false;
  std::int64_t two_cycles_before_step3 = 0;
  std::int64_t step3_moves = 0;
  bool three_permutation_after_step3 = true;
  std::int64_t main_loop_iterations = 0;
  std::int64_t oriented_two_moves = 0;
  std::int64_t sufficient_sequences = 0;
  std::int64_t sufficient_search_failures = 0;
  std::int64_t small_component_sequences = 0;
  std::int64_t bad_small_components = 0;
  std::int64_t step6_sequences = 0;
  bool step6_fell_through = false;
  std::int64_t step7_sequences = 0;
  std::map<std::pair<int, int>, std::int64_t> shapes;  // (x, y) -> count, steps 5 to 7
};

struct SortReport {
  std::vector<Transposition> moves;  // sorts the input, in input coordinates
  std::int32_t lower_bound = 0;
  std::int64_t moves_on_simple = 0;
  double ratio = 0.0;  // moves / max(lower_bound, 1)
  PhaseTimings timing;
  SortStats stats;
};

SortReport sort(const Permutation& p, const SortOptions& options = {});

// Connected set of cycles grown by queries.
struct Configuration {
  std::vector<CycleId> cycles;
  std::vector<std::vector<std::int32_t>> edge_indices;  // parallel to cycles
  std::vector<char> gate_capable;                       // 2-cycle or unoriented 3-cycle
  std::size_t scan_cycle = 0, scan_pair = 0;            // type 2 queries already made

  Configuration() = default;
  Configuration(const GraphState& g, CycleId c) { add(g, c); }
  void add(const GraphState& g, CycleId c);

  std::size_t size() const { return cycles.size(); }
  bool contains(CycleId c) const;
  // Black-edge pairs of 2-cycles and unoriented 3-cycles that cross no other
  // cycle of the configuration.
  std::vector<std::pair<EdgeName, EdgeName>> open_gates(const GraphState& g) const;
  bool full(const GraphState& g) const { return open_gates(g).empty(); }
  bool all_unoriented() const;
};

// One extension step: query an open gate if there is one, otherwise query
// pairs of the configuration's cycles until a cycle outside it shows up.
// Returns false (configuration unchanged) when nothing new is reachable. The
// graph must not change between calls on the same configuration.
bool sufficient_extend(const GraphState& g, Configuration& cfg);

// Applies moves, checking that exactly `seq.two_move_count` of them are
// 2-moves and none loses odd cycles. New 3-cycles are marked when requested.
void apply_sequence(GraphState& g, const MoveSequence& seq, std::vector<Transposition>& out,
                    bool mark_new_three_cycles);

// Step 3: pairs up 2-cycles with 2-moves until none is left. InternalError on
// an odd number of 2-cycles or a pair without a 2-move.
MoveSequence eliminate_2cycles(GraphState& g);

// Step 5 over the marked 3-cycles of a 3-permutation. Updates stats.
MoveSequence main_loop(GraphState& g, int search_depth, SortStats& stats);

}  // namespace sbt
