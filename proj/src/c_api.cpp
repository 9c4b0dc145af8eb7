#include "sbt/sbt.h"

#include <new>
#include <string>
#include <vector>

#include "breakpoint_graph.hpp"
#include "eh_engine.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"

struct sbt_sorter {
  sbt::SortOptions options;
};

struct sbt_result {
  sbt::SortReport report;
};

struct sbt_oracle {
  sbt::DistanceTable table;
};

namespace {

thread_local std::string last_error;

sbt_status fail(sbt_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
sbt_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const sbt::InputError& e) {
    return fail(SBT_ERR_INVALID_INPUT, e.what());
  } catch (const sbt::RangeError& e) {
    return fail(SBT_ERR_RANGE, e.what());
  } catch (const sbt::LookupError& e) {
    return fail(SBT_ERR_RANGE, e.what());
  } catch (const sbt::ContractError& e) {
    return fail(SBT_ERR_CONTRACT, e.what());
  } catch (const sbt::ResourceError& e) {
    return fail(SBT_ERR_RESOURCE, e.what());
  } catch (const sbt::InternalError& e) {
    return fail(SBT_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SBT_ERR_RESOURCE, "out of memory");
  } catch (const std::exception& e) {
    return fail(SBT_ERR_INTERNAL, e.what());
  }
}

sbt::Permutation from_one_based(const int32_t* perm, size_t n) {
  std::vector<std::int32_t> v(n);
  for (size_t q = 0; q < n; ++q) v[q] = perm[q] - 1;
  return sbt::Permutation(std::move(v));
}

}  // namespace

extern "C" {

const char* sbt_last_error(void) { return last_error.c_str(); }

const char* sbt_status_string(sbt_status status) {
  switch (status) {
    case SBT_OK: return "ok";
    case SBT_ERR_INVALID_INPUT: return "invalid input";
    case SBT_ERR_RANGE: return "out of range";
    case SBT_ERR_CONTRACT: return "precondition violated";
    case SBT_ERR_RESOURCE: return "resource limit";
    case SBT_ERR_IO: return "i/o error";
    case SBT_ERR_INTERNAL: return "internal error";
    case SBT_ERR_NULL: return "null argument";
  }
  return "unknown status";
}

sbt_status sbt_sorter_create(sbt_sorter** out) {
  if (!out) return fail(SBT_ERR_NULL, "out is NULL");
  return guarded([&] {
    *out = new sbt_sorter{};
    return SBT_OK;
  });
}

void sbt_sorter_destroy(sbt_sorter* sorter) { delete sorter; }

sbt_status sbt_sorter_set_search_depth(sbt_sorter* sorter, int depth) {
  if (!sorter) return fail(SBT_ERR_NULL, "sorter is NULL");
  if (depth < 1 || depth > 8) return fail(SBT_ERR_INVALID_INPUT, "search depth must lie in 1..8");
  sorter->options.search_depth = depth;
  return SBT_OK;
}

sbt_status sbt_sorter_set_timing(sbt_sorter* sorter, int enabled) {
  if (!sorter) return fail(SBT_ERR_NULL, "sorter is NULL");
  sorter->options.timing = enabled != 0;
  return SBT_OK;
}

sbt_status sbt_sort(const sbt_sorter* sorter, const int32_t* perm, size_t n, sbt_result** out) {
  if (!sorter || !out || (!perm && n > 0)) return fail(SBT_ERR_NULL, "NULL argument");
  return guarded([&] {
    auto p = from_one_based(perm, n);
    *out = new sbt_result{sbt::sort(p, sorter->options)};
    return SBT_OK;
  });
}

void sbt_result_destroy(sbt_result* result) { delete result; }

size_t sbt_result_move_count(const sbt_result* result) { return result ? result->report.moves.size() : 0; }

sbt_status sbt_result_move(const sbt_result* result, size_t idx, int32_t* i, int32_t* j, int32_t* k) {
  if (!result || !i || !j || !k) return fail(SBT_ERR_NULL, "NULL argument");
  if (idx >= result->report.moves.size()) return fail(SBT_ERR_RANGE, "move index out of range");
  const auto& t = result->report.moves[idx];
  *i = t.i;
  *j = t.j;
  *k = t.k;
  return SBT_OK;
}

int32_t sbt_result_lower_bound(const sbt_result* result) { return result ? result->report.lower_bound : 0; }

double sbt_result_ratio(const sbt_result* result) { return result ? result->report.ratio : 0.0; }

int64_t sbt_result_phase_ns(const sbt_result* result, sbt_phase phase) {
  if (!result) return 0;
  const auto& t = result->report.timing;
  switch (phase) {
    case SBT_PHASE_SIMPLIFY: return t.simplify_ns;
    case SBT_PHASE_TWO_TWO: return t.step2_ns;
    case SBT_PHASE_TWO_CYCLES: return t.step3_ns;
    case SBT_PHASE_MAIN_LOOP: return t.main_loop_ns;
    case SBT_PHASE_POOLED: return t.step6_ns;
    case SBT_PHASE_DRAIN: return t.step7_ns;
    case SBT_PHASE_MIMIC: return t.mimic_ns;
    case SBT_PHASE_TOTAL: return t.total_ns;
    case SBT_PHASE_TREE: return t.tree_ns;
  }
  return 0;
}

int64_t sbt_result_stat(const sbt_result* result, sbt_stat stat) {
  if (!result) return 0;
  const auto& s = result->report.stats;
  switch (stat) {
    case SBT_STAT_INSERTED_ELEMENTS: return static_cast<int64_t>(s.inserted_elements);
    case SBT_STAT_STEP2_APPLIED: return s.step2_applied;
    case SBT_STAT_STEP2_SUB_STEP: return s.step2_sub_step;
    case SBT_STAT_TWO_CYCLES_BEFORE_STEP3: return s.two_cycles_before_step3;
    case SBT_STAT_THREE_PERMUTATION_AFTER_STEP3: return s.three_permutation_after_step3;
    case SBT_STAT_MAIN_LOOP_ITERATIONS: return s.main_loop_iterations;
    case SBT_STAT_ORIENTED_TWO_MOVES: return s.oriented_two_moves;
    case SBT_STAT_SUFFICIENT_SEQUENCES: return s.sufficient_sequences;
    case SBT_STAT_SUFFICIENT_SEARCH_FAILURES: return s.sufficient_search_failures;
    case SBT_STAT_SMALL_COMPONENT_SEQUENCES: return s.small_component_sequences;
    case SBT_STAT_BAD_SMALL_COMPONENTS: return s.bad_small_components;
    case SBT_STAT_STEP6_SEQUENCES: return s.step6_sequences;
    case SBT_STAT_STEP6_FELL_THROUGH: return s.step6_fell_through;
    case SBT_STAT_STEP7_SEQUENCES: return s.step7_sequences;
    case SBT_STAT_MOVES_ON_SIMPLE: return result->report.moves_on_simple;
    case SBT_STAT_STEP2_FOUR_SEARCH_FAILED: return s.step2_four_search_failed;
  }
  return 0;
}

sbt_status sbt_verify(const int32_t* perm, size_t n, const int32_t* moves, size_t move_count, int* sorted) {
  if (!sorted || (!perm && n > 0) || (!moves && move_count > 0)) return fail(SBT_ERR_NULL, "NULL argument");
  return guarded([&] {
    auto p = from_one_based(perm, n);
    std::vector<sbt::Transposition> ts(move_count);
    for (size_t q = 0; q < move_count; ++q) ts[q] = {moves[3 * q], moves[3 * q + 1], moves[3 * q + 2]};
    *sorted = sbt::verify_sequence(p, ts) ? 1 : 0;
    return SBT_OK;
  });
}

sbt_status sbt_lower_bound(const int32_t* perm, size_t n, int32_t* out) {
  if (!out || (!perm && n > 0)) return fail(SBT_ERR_NULL, "NULL argument");
  return guarded([&] {
    *out = sbt::lower_bound(from_one_based(perm, n));
    return SBT_OK;
  });
}

sbt_status sbt_oracle_create(size_t n, const char* cache_dir, sbt_oracle** out) {
  if (!out) return fail(SBT_ERR_NULL, "out is NULL");
  return guarded([&] {
    *out = new sbt_oracle{cache_dir ? sbt::DistanceTable::load_or_build(n, cache_dir) : sbt::DistanceTable::build(n)};
    return SBT_OK;
  });
}

void sbt_oracle_destroy(sbt_oracle* oracle) { delete oracle; }

sbt_status sbt_oracle_distance(const sbt_oracle* oracle, const int32_t* perm, size_t n, int32_t* out) {
  if (!oracle || !out || (!perm && n > 0)) return fail(SBT_ERR_NULL, "NULL argument");
  return guarded([&] {
    *out = oracle->table.distance(from_one_based(perm, n));
    return SBT_OK;
  });
}

size_t sbt_oracle_max_n(void) { return sbt::DistanceTable::kMaxN; }

}  // extern "C"
