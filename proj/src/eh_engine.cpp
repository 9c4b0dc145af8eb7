#include "eh_engine.hpp"

#include <algorithm>
#include <array>
#include <chrono>

#include "errors.hpp"
#include "sequence_search.hpp"
#include "simplifier.hpp"

namespace sbt {

namespace {

class PhaseClock {
 public:
  explicit PhaseClock(bool on) : on_(on) {
    if (on_) start_ = std::chrono::steady_clock::now();
  }
  std::int64_t lap() {
    if (!on_) return 0;
    auto now = std::chrono::steady_clock::now();
    auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(now - start_).count();
    start_ = now;
    return ns;
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

bool is_three_permutation(const GraphState& g) { return g.is_simple() && g.two_cycles().empty(); }

void audit_or_throw(const GraphState& g, const char* phase) {
  auto msg = g.audit();
  if (!msg.empty()) throw InternalError(std::string("graph audit after ") + phase + ": " + msg);
}

}  // namespace

void Configuration::add(const GraphState& g, CycleId c) {
  cycles.push_back(c);
  auto es = g.cycle(c).edges();
  std::vector<std::int32_t> idx(es.size());
  g.edge_indices(es, idx);
  bool capable = idx.size() == 2;
  if (idx.size() == 3) capable = (idx[0] > idx[1]) + (idx[1] > idx[2]) + (idx[2] > idx[0]) != 1;
  gate_capable.push_back(capable);
  edge_indices.push_back(std::move(idx));
}

bool Configuration::all_unoriented() const {
  for (std::size_t a = 0; a < cycles.size(); ++a)
    if (!gate_capable[a]) return false;
  return true;
}

bool Configuration::contains(CycleId c) const { return std::find(cycles.begin(), cycles.end(), c) != cycles.end(); }

std::vector<std::pair<EdgeName, EdgeName>> Configuration::open_gates(const GraphState& g) const {
  std::vector<std::pair<EdgeName, EdgeName>> gates;
  for (std::size_t a = 0; a < cycles.size(); ++a) {
    if (!gate_capable[a]) continue;
    auto es = g.cycle(cycles[a]).edges();
    const auto& ia = edge_indices[a];
    for (std::size_t p = 0; p < es.size(); ++p)
      for (std::size_t q = p + 1; q < es.size(); ++q) {
        std::int32_t lo = std::min(ia[p], ia[q]), hi = std::max(ia[p], ia[q]);
        bool crossed = false;
        for (std::size_t b = 0; b < cycles.size() && !crossed; ++b) {
          if (b == a) continue;
          std::size_t inside = 0;
          for (auto x : edge_indices[b]) inside += lo < x && x < hi;
          crossed = inside > 0 && inside < edge_indices[b].size();
        }
        if (!crossed) gates.push_back({es[p], es[q]});
      }
  }
  return gates;
}

bool sufficient_extend(const GraphState& g, Configuration& cfg) {
  auto index_in = [&](std::size_t a, EdgeName e) {
    auto es = g.cycle(cfg.cycles[a]).edges();
    return cfg.edge_indices[a][std::find(es.begin(), es.end(), e) - es.begin()];
  };
  auto gates = cfg.open_gates(g);
  if (!gates.empty()) {
    EdgeName a = gates.front().first, b = gates.front().second;
    std::size_t owner = std::find(cfg.cycles.begin(), cfg.cycles.end(), g.cycle_of(a)) - cfg.cycles.begin();
    auto hit = g.query_at_indices(index_in(owner, a), index_in(owner, b));
    CycleId d = g.cycle_of(hit.first);
    if (cfg.contains(d)) throw InternalError("open gate query returned a cycle of the configuration");
    cfg.add(g, d);
    return true;
  }
  // Pairs are visited in a fixed order; a query that found nothing new keeps
  // finding nothing while the graph is unchanged, so resume after it.
  static constexpr std::size_t kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (; cfg.scan_cycle < cfg.size(); ++cfg.scan_cycle, cfg.scan_pair = 0) {
    if (!cfg.gate_capable[cfg.scan_cycle]) continue;
    const auto& ia = cfg.edge_indices[cfg.scan_cycle];
    const std::size_t pairs = ia.size() == 2 ? 1 : 3;
    for (; cfg.scan_pair < pairs; ++cfg.scan_pair) {
      auto hit = g.query_at_indices(ia[kPairs[cfg.scan_pair][0]], ia[kPairs[cfg.scan_pair][1]]);
      CycleId d = g.cycle_of(hit.first);
      if (!cfg.contains(d)) {
        cfg.add(g, d);
        ++cfg.scan_pair;
        return true;
      }
    }
  }
  return false;
}

void apply_sequence(GraphState& g, const MoveSequence& seq, std::vector<Transposition>& out,
                    bool mark_new_three_cycles) {
  int twos = 0;
  for (const auto& t : seq.moves) {
    auto applied = g.apply(t);
    if (applied.delta_c_odd < 0) throw InternalError("search produced a move losing odd cycles");
    twos += applied.delta_c_odd == 2;
    if (mark_new_three_cycles)
      for (auto c : applied.created)
        if (g.alive(c) && g.cycle(c).length == 3) g.set_marked(c, true);
    out.push_back(t);
  }
  if (twos != seq.two_move_count) throw InternalError("claimed 2-move count differs from the applied one");
}

MoveSequence eliminate_2cycles(GraphState& g) {
  MoveSequence done;
  if (g.two_cycles().size() % 2 != 0) throw InternalError("odd number of 2-cycles");
  while (!g.two_cycles().empty()) {
    if (g.two_cycles().size() < 2) throw InternalError("odd number of 2-cycles");
    CycleId a = g.two_cycles()[0], b = g.two_cycles()[1];
    auto ae = g.cycle(a).edges();
    auto be = g.cycle(b).edges();
    std::optional<Transposition> move;
    const std::array<std::array<EdgeName, 3>, 4> triples{
        {{ae[0], ae[1], be[0]}, {ae[0], ae[1], be[1]}, {be[0], be[1], ae[0]}, {be[0], be[1], ae[1]}}};
    for (const auto& t : triples)
      if (g.classify_edges(t[0], t[1], t[2]) == 2) {
        move = g.transposition_for(t[0], t[1], t[2]);
        break;
      }
    if (!move) throw InternalError("two 2-cycles without a 2-move between them");
    apply_sequence(g, {{*move}, 1}, done.moves, false);
    done.two_move_count += 1;
  }
  return done;
}

MoveSequence main_loop(GraphState& g, int search_depth, SortStats& stats) {
  MoveSequence done;
  while (auto first = g.first_marked()) {
    ++stats.main_loop_iterations;
    Configuration cfg(g, *first);
    if (!cfg.gate_capable[0]) {
      // Oriented 3-cycle: its own three edges give the 2-move.
      std::array<std::int32_t, 3> p;
      for (int q = 0; q < 3; ++q) p[q] = cfg.edge_indices[0][q] == 0 ? g.edge_count() : cfg.edge_indices[0][q];
      std::sort(p.begin(), p.end());
      apply_sequence(g, {{{p[0], p[1], p[2]}}, 1}, done.moves, true);
      done.two_move_count += 1;
      ++stats.oriented_two_moves;
      ++stats.shapes[{1, 1}];
      continue;
    }
    // Extensions assume an all-unoriented configuration; an oriented cycle
    // ends them (the search below then finds its 2-move).
    for (int ext = 0; ext < 8 && cfg.size() < 9 && cfg.all_unoriented(); ++ext)
      if (!sufficient_extend(g, cfg)) break;
    const bool sufficient = cfg.size() >= 9;
    auto seq = find_xy_sequence(g, cfg.cycles, cfg.edge_indices, 8, 11, search_depth);
    if (seq) {
      apply_sequence(g, *seq, done.moves, true);
      done.two_move_count += seq->two_move_count;
      ++stats.shapes[{static_cast<int>(seq->size()), seq->two_move_count}];
      ++(sufficient ? stats.sufficient_sequences : stats.small_component_sequences);
    } else {
      for (auto d : cfg.cycles) g.set_marked(d, false);
      ++(sufficient ? stats.sufficient_search_failures : stats.bad_small_components);
    }
  }
  return done;
}

SortReport sort(const Permutation& p, const SortOptions& options) {
  if (options.search_depth < 1 || options.search_depth > 8) throw InputError("search depth must lie in 1..8");
  SortReport rep;
  auto& st = rep.stats;
  PhaseClock clock(options.timing);
  PhaseClock total(options.timing);

  // 1. simple permutation
  SimplificationMap map = simplify(p);
  GraphState g(map.padded);
  g.enable_tree_timing(options.timing);
  // Original elements are tagged so each move is mapped back as it is applied.
  {
    std::vector<std::int32_t> originals;
    for (auto v : map.padded)
      if (map.value_remap[v] >= 0) originals.push_back(v);
    g.set_tagged(originals, true);
  }
  st.inserted_elements = map.insertions();
  rep.lower_bound = g.lower_bound();
  rep.timing.simplify_ns = clock.lap();
  if (options.audit_phases) audit_or_throw(g, "simplification");

  std::vector<Transposition> moves;

  // 2. one (2,2)-sequence if available
  Step2Trace trace;
  if (auto seq = find_22_sequence(g, &trace)) {
    apply_sequence(g, *seq, moves, false);
    st.step2_applied = true;
  }
  st.step2_sub_step = trace.sub_step;
  st.step2_four_search_failed = trace.four_two_cycles_search_failed;
  rep.timing.step2_ns = clock.lap();

  // 3. no 2-cycles
  st.two_cycles_before_step3 = static_cast<std::int64_t>(g.two_cycles().size());
  auto step3 = eliminate_2cycles(g);
  moves.insert(moves.end(), step3.moves.begin(), step3.moves.end());
  st.step3_moves = static_cast<std::int64_t>(step3.size());
  st.three_permutation_after_step3 = is_three_permutation(g);
  if (!st.three_permutation_after_step3) throw InternalError("not a 3-permutation after 2-cycle elimination");
  rep.timing.step3_ns = clock.lap();
  if (options.audit_phases) audit_or_throw(g, "2-cycle elimination");

  // 4, 5
  {
    std::vector<CycleId> threes(g.three_cycles().begin(), g.three_cycles().end());
    g.set_marked(threes, true);
  }
  auto step5 = main_loop(g, options.search_depth, st);
  moves.insert(moves.end(), step5.moves.begin(), step5.moves.end());
  rep.timing.main_loop_ns = clock.lap();
  if (options.audit_phases) audit_or_throw(g, "main loop");

  // 6. pooled leftover components, at least 8 cycles per search
  {
    std::vector<CycleId> threes(g.three_cycles().begin(), g.three_cycles().end());
    auto comps = g.components_of(threes);
    std::vector<CycleId> pool;
    std::size_t pool_edges = 0;
    for (const auto& comp : comps) {
      if (3 * comp.size() > 64) continue;
      if (pool_edges + 3 * comp.size() > 64) pool.clear(), pool_edges = 0;
      pool.insert(pool.end(), comp.begin(), comp.end());
      pool_edges += 3 * comp.size();
      if (pool.size() < 8) continue;
      auto seq = find_xy_sequence(g, pool, 8, 11, options.search_depth);
      if (!seq) {
        st.step6_fell_through = true;
        break;
      }
      apply_sequence(g, *seq, moves, false);
      ++st.step6_sequences;
      ++st.shapes[{static_cast<int>(seq->size()), seq->two_move_count}];
      pool.clear();
      pool_edges = 0;
    }
  }
  rep.timing.step6_ns = clock.lap();

  // 7. drain with (3,2)-sequences
  {
    std::vector<CycleId> threes(g.three_cycles().begin(), g.three_cycles().end());
    g.set_marked(threes, true);
    while (auto first = g.first_marked()) {
      auto seq = find_32_sequence(g, *first);
      apply_sequence(g, seq, moves, true);
      ++st.step7_sequences;
      ++st.shapes[{static_cast<int>(seq.size()), seq.two_move_count}];
    }
  }
  rep.timing.step7_ns = clock.lap();
  if (!g.is_identity()) throw InternalError("padded permutation not sorted after the final phase");
  if (options.audit_phases) audit_or_throw(g, "final phase");

  // 8.
  rep.moves_on_simple = static_cast<std::int64_t>(moves.size());
  rep.moves = g.take_tagged_log();
  rep.timing.mimic_ns = clock.lap();
  rep.timing.tree_ns = g.tree_ns();
  rep.timing.total_ns = total.lap();
  rep.ratio = static_cast<double>(rep.moves.size()) / std::max<std::int32_t>(rep.lower_bound, 1);
  return rep;
}

}  // namespace sbt
