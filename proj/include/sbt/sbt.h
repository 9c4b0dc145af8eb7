#ifndef SBT_SBT_H
#define SBT_SBT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(SBT_BUILDING_LIBRARY)
#define SBT_API __declspec(dllexport)
#else
#define SBT_API __declspec(dllimport)
#endif
#else
#define SBT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sbt_status {
  SBT_OK = 0,
  SBT_ERR_INVALID_INPUT = 1, /* not a permutation, bad option value */
  SBT_ERR_RANGE = 2,         /* index or cut point out of range */
  SBT_ERR_CONTRACT = 3,      /* precondition violated */
  SBT_ERR_RESOURCE = 4,      /* size guard exceeded, allocation failure */
  SBT_ERR_IO = 5,
  SBT_ERR_INTERNAL = 6, /* invariant failure: a bug */
  SBT_ERR_NULL = 7      /* required pointer argument was NULL */
} sbt_status;

typedef struct sbt_sorter sbt_sorter;
typedef struct sbt_result sbt_result;
typedef struct sbt_oracle sbt_oracle;

typedef enum sbt_phase {
  SBT_PHASE_SIMPLIFY = 0,
  SBT_PHASE_TWO_TWO = 1,
  SBT_PHASE_TWO_CYCLES = 2,
  SBT_PHASE_MAIN_LOOP = 3,
  SBT_PHASE_POOLED = 4,
  SBT_PHASE_DRAIN = 5,
  SBT_PHASE_MIMIC = 6,
  SBT_PHASE_TOTAL = 7,
  SBT_PHASE_TREE = 8 /* time inside tree operations, included in the others */
} sbt_phase;

typedef enum sbt_stat {
  SBT_STAT_INSERTED_ELEMENTS = 0,
  SBT_STAT_STEP2_APPLIED = 1,
  SBT_STAT_STEP2_SUB_STEP = 2, /* 'a'..'d' or '-' */
  SBT_STAT_TWO_CYCLES_BEFORE_STEP3 = 3,
  SBT_STAT_THREE_PERMUTATION_AFTER_STEP3 = 4,
  SBT_STAT_MAIN_LOOP_ITERATIONS = 5,
  SBT_STAT_ORIENTED_TWO_MOVES = 6,
  SBT_STAT_SUFFICIENT_SEQUENCES = 7,
  SBT_STAT_SUFFICIENT_SEARCH_FAILURES = 8,
  SBT_STAT_SMALL_COMPONENT_SEQUENCES = 9,
  SBT_STAT_BAD_SMALL_COMPONENTS = 10,
  SBT_STAT_STEP6_SEQUENCES = 11,
  SBT_STAT_STEP6_FELL_THROUGH = 12,
  SBT_STAT_STEP7_SEQUENCES = 13,
  SBT_STAT_MOVES_ON_SIMPLE = 14,
  SBT_STAT_STEP2_FOUR_SEARCH_FAILED = 15
} sbt_stat;

/* Message of the last failing call on this thread ("" if none). */
SBT_API const char* sbt_last_error(void);
SBT_API const char* sbt_status_string(sbt_status status);

SBT_API sbt_status sbt_sorter_create(sbt_sorter** out);
SBT_API void sbt_sorter_destroy(sbt_sorter* sorter);
/* Maximum length of searched sequences, 1..8 (default 4). */
SBT_API sbt_status sbt_sorter_set_search_depth(sbt_sorter* sorter, int depth);
SBT_API sbt_status sbt_sorter_set_timing(sbt_sorter* sorter, int enabled);

/* perm holds p_1..p_n, a permutation of 1..n. */
SBT_API sbt_status sbt_sort(const sbt_sorter* sorter, const int32_t* perm, size_t n, sbt_result** out);
SBT_API void sbt_result_destroy(sbt_result* result);
SBT_API size_t sbt_result_move_count(const sbt_result* result);
/* 1-based cut points of move idx on the permutation as it is at that point. */
SBT_API sbt_status sbt_result_move(const sbt_result* result, size_t idx, int32_t* i, int32_t* j, int32_t* k);
SBT_API int32_t sbt_result_lower_bound(const sbt_result* result);
SBT_API double sbt_result_ratio(const sbt_result* result);
SBT_API int64_t sbt_result_phase_ns(const sbt_result* result, sbt_phase phase);
SBT_API int64_t sbt_result_stat(const sbt_result* result, sbt_stat stat);

/* moves is 3 * move_count values (i, j, k per move). *sorted is 1 when the
   moves are valid in order and sort perm. */
SBT_API sbt_status sbt_verify(const int32_t* perm, size_t n, const int32_t* moves, size_t move_count,
                              int* sorted);
SBT_API sbt_status sbt_lower_bound(const int32_t* perm, size_t n, int32_t* out);

/* Exact distances for permutations of size n (n <= 10). cache_dir may be NULL;
   when given, tables are read from and written to it. */
SBT_API sbt_status sbt_oracle_create(size_t n, const char* cache_dir, sbt_oracle** out);
SBT_API void sbt_oracle_destroy(sbt_oracle* oracle);
SBT_API sbt_status sbt_oracle_distance(const sbt_oracle* oracle, const int32_t* perm, size_t n, int32_t* out);
SBT_API size_t sbt_oracle_max_n(void);

#ifdef __cplusplus
}
#endif

#endif
