#include "sequence_search.hpp"

#include <algorithm>
#include <array>

#include "errors.hpp"
#include "local_graph.hpp"

namespace sbt {

namespace {

using Triple = std::array<std::int8_t, 3>;

Triple sorted_triple(int a, int b, int c) {
  Triple t{static_cast<std::int8_t>(a), static_cast<std::int8_t>(b), static_cast<std::int8_t>(c)};
  std::sort(t.begin(), t.end());
  return t;
}

class Searcher {
 public:
  explicit Searcher(const SearchLimits& lim)
      : lim_(lim), analysis_(lim.depth_cap + 1), candidates_(lim.depth_cap + 1) {}

  bool run(const LocalGraph& lg, int moves, int zero_budget) {
    path_.clear();
    twos_ = 0;
    return dfs(lg, moves, zero_budget, 0);
  }

  MoveSequence result() const { return {path_, twos_}; }

 private:
  bool end_ok(const LocalGraph& lg, int depth) {
    auto& an = analysis_[depth];
    lg.analyze(an);
    if (an.max_length > 3) return false;
    return lim_.end == EndState::Simple || an.two_cycles == 0;
  }

  bool dfs(const LocalGraph& lg, int left, int zeros_left, int depth) {
    if (left == 0) return end_ok(lg, depth);
    auto& an = analysis_[depth];
    lg.analyze(an);
    auto& cand = candidates_[depth];
    cand.clear();
    // A 2-move cuts three edges of one cycle, or two edges of an even cycle
    // and one of another even cycle.
    for (const auto& c : an.cycles) {
      const std::int32_t* r = &an.members[c.first];
      if (c.length >= 3)
        for (int p = 0; p < c.length; ++p)
          for (int q = p + 1; q < c.length; ++q)
            for (int s = q + 1; s < c.length; ++s) cand.push_back(sorted_triple(r[p], r[q], r[s]));
      if (c.length % 2 == 0)
        for (const auto& d : an.cycles) {
          if (&d == &c || d.length % 2 != 0) continue;
          const std::int32_t* rd = &an.members[d.first];
          for (int p = 0; p < c.length; ++p)
            for (int q = p + 1; q < c.length; ++q)
              for (int s = 0; s < d.length; ++s) cand.push_back(sorted_triple(r[p], r[q], rd[s]));
        }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    // candidates_[depth] may be reused by deeper levels only at depth + 1, so
    // iterating by index here is safe.
    for (std::size_t q = 0; q < cand.size(); ++q) {
      Triple t = candidates_[depth][q];
      if (lg.delta(t[0], t[1], t[2]) != 2) continue;
      if (step(lg, t, left, zeros_left, depth, true)) return true;
    }
    if (zeros_left > 0) {
      const int m = lg.size();
      for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
          for (int c = b + 1; c < m; ++c) {
            int d = lg.delta(a, b, c);
            if (d != 0) continue;
            if (step(lg, sorted_triple(a, b, c), left, zeros_left - 1, depth, false)) return true;
          }
    }
    return false;
  }

  bool step(const LocalGraph& lg, const Triple& t, int left, int zeros_left, int depth, bool two) {
    LocalGraph next = lg;
    path_.push_back(next.apply(t[0], t[1], t[2]));
    twos_ += two;
    if (dfs(next, left - 1, zeros_left, depth + 1)) return true;
    path_.pop_back();
    twos_ -= two;
    return false;
  }

  const SearchLimits& lim_;
  std::vector<LocalGraph::Analysis> analysis_;
  std::vector<std::vector<Triple>> candidates_;
  std::vector<Transposition> path_;
  int twos_ = 0;
};

// Exactly two moves, both 2-moves.
SearchLimits two_two_limits() { return {2, {0, 2, 2}, EndState::Simple}; }

std::int32_t leftmost_index(const GraphState& g, CycleId c) {
  std::int32_t best = g.edge_count();
  for (auto e : g.cycle(c).edges()) best = std::min(best, g.edge_index(e));
  return best;
}

}  // namespace

namespace {

std::optional<MoveSequence> run_search(const LocalGraph& lg, const SearchLimits& limits) {
  if (limits.depth_cap < 1 || limits.min_two_moves.size() != static_cast<std::size_t>(limits.depth_cap) + 1)
    throw InputError("search limits need one 2-move threshold per length");
  if (lg.size() < 3) return std::nullopt;
  Searcher s(limits);
  for (int x = 1; x <= limits.depth_cap; ++x) {
    int zero_budget = x - limits.min_two_moves[x];
    if (zero_budget < 0) continue;
    if (s.run(lg, x, zero_budget)) return s.result();
  }
  return std::nullopt;
}

SearchLimits ratio_limits(int ratio_num, int ratio_den, int depth_cap, bool forbid_two_cycles) {
  if (ratio_num <= 0 || ratio_den <= 0 || ratio_num > ratio_den) throw InputError("ratio must lie in (0, 1]");
  if (depth_cap < 1 || depth_cap > 8) throw InputError("search depth must lie in 1..8");
  SearchLimits limits;
  limits.depth_cap = depth_cap;
  limits.end = forbid_two_cycles ? EndState::NoTwoCycles : EndState::Simple;
  limits.min_two_moves.resize(depth_cap + 1);
  for (int x = 0; x <= depth_cap; ++x) limits.min_two_moves[x] = (ratio_num * x + ratio_den - 1) / ratio_den;
  return limits;
}

}  // namespace

std::optional<MoveSequence> search_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                            const SearchLimits& limits) {
  return run_search(LocalGraph(g, cycles), limits);
}

std::optional<MoveSequence> search_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                            std::span<const std::vector<std::int32_t>> edge_indices,
                                            const SearchLimits& limits) {
  return run_search(LocalGraph(g, cycles, edge_indices), limits);
}

std::optional<Transposition> find_2_move_on_cycle(const GraphState& g, CycleId c) {
  const auto& cyc = g.cycle(c);
  auto es = cyc.edges();
  if (cyc.length < 3) return std::nullopt;
  if (cyc.length == 3) {
    if (!g.is_oriented(c)) return std::nullopt;
    return g.transposition_for(es[0], es[1], es[2]);
  }
  for (std::size_t p = 0; p < es.size(); ++p)
    for (std::size_t q = p + 1; q < es.size(); ++q)
      for (std::size_t r = q + 1; r < es.size(); ++r)
        if (g.classify_edges(es[p], es[q], es[r]) == 2) return g.transposition_for(es[p], es[q], es[r]);
  return std::nullopt;
}

std::optional<MoveSequence> find_22_sequence(const GraphState& g, Step2Trace* trace) {
  if (!g.is_simple()) throw ContractError("(2,2) check needs a simple permutation");
  Step2Trace local;
  Step2Trace& tr = trace ? *trace : local;
  tr = Step2Trace{};
  const auto limits = two_two_limits();

  std::vector<CycleId> twos(g.two_cycles().begin(), g.two_cycles().end());
  std::vector<std::pair<std::int32_t, CycleId>> keyed;
  for (auto c : twos) keyed.push_back({leftmost_index(g, c), c});
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t q = 0; q < keyed.size(); ++q) twos[q] = keyed[q].second;

  if (twos.size() >= 4) {
    tr.sub_step = 'a';
    std::vector<CycleId> four(twos.begin(), twos.begin() + 4);
    if (auto seq = search_sequence(g, four, limits)) return seq;
    tr.four_two_cycles_search_failed = true;
  } else if (twos.size() >= 2) {
    tr.sub_step = g.cycles_intersect(twos[0], twos[1]) ? 'b' : 'c';
  } else {
    tr.sub_step = 'd';
  }

  // Exact check: the second move of a (2,2)-sequence is a 2-move on an
  // oriented 3-cycle or on two 2-cycles, so it suffices to know, for each
  // possible first 2-move, whether one of those is available afterwards.
  const std::int32_t n = g.edge_count();
  std::vector<std::int32_t> pos(n);
  {
    auto seq = g.sequence();
    for (std::int32_t q = 0; q < n; ++q) pos[seq[q]] = q == 0 ? n : q;
  }
  auto oriented_at = [&](CycleId c) {
    auto es = g.cycle(c).edges();
    std::int32_t a = pos[es[0]], b = pos[es[1]], d = pos[es[2]];
    return (a > b) + (b > d) + (d > a) == 1;
  };

  struct First {
    Transposition t;
    std::vector<CycleId> cycles;
  };
  std::vector<First> firsts;
  const std::size_t pair_pool = std::min<std::size_t>(twos.size(), 4);
  for (std::size_t p = 0; p < pair_pool; ++p)
    for (std::size_t q = 0; q < pair_pool; ++q) {
      if (p == q) continue;
      auto ae = g.cycle(twos[p]).edges();
      auto be = g.cycle(twos[q]).edges();
      for (auto b : be)
        if (g.classify_edges(ae[0], ae[1], b) == 2)
          firsts.push_back({g.transposition_for(ae[0], ae[1], b), {twos[p], twos[q]}});
    }
  std::vector<CycleId> threes(g.three_cycles().begin(), g.three_cycles().end());
  for (auto c : threes)
    if (oriented_at(c)) {
      auto es = g.cycle(c).edges();
      firsts.push_back({g.transposition_for(es[0], es[1], es[2]), {c}});
    }

  for (const auto& f : firsts) {
    LocalGraph lg(g, f.cycles);
    auto ra = lg.rank_of(g.edge_at_position(f.t.i));
    auto rb = lg.rank_of(g.edge_at_position(f.t.j));
    auto rc = lg.rank_of(g.edge_at_position(f.t.k));
    lg.apply(ra, rb, rc);
    LocalGraph::Analysis an;
    lg.analyze(an);
    bool local_oriented = false;
    for (const auto& c : an.cycles) local_oriented |= c.length == 3 && c.oriented;
    if (local_oriented)
      if (auto seq = search_sequence(g, f.cycles, limits)) return seq;

    std::int32_t twos_in_first = 0;
    for (auto c : f.cycles) twos_in_first += g.cycle(c).length == 2;
    std::int32_t twos_after = static_cast<std::int32_t>(twos.size()) - twos_in_first + an.two_cycles;
    if (twos_after >= 2) {
      std::vector<CycleId> region = f.cycles;
      std::int32_t need = 2 - an.two_cycles;
      for (auto c : twos) {
        if (need <= 0) break;
        if (std::find(region.begin(), region.end(), c) != region.end()) continue;
        region.push_back(c);
        --need;
      }
      if (auto seq = search_sequence(g, region, limits)) return seq;
    }

    // Untouched 3-cycles: orientation flips iff the move separates its three
    // edges into the three segments.
    auto segment = [&](std::int32_t p) { return p < f.t.i ? 0 : p < f.t.j ? 1 : p < f.t.k ? 2 : 0; };
    for (auto d : threes) {
      if (std::find(f.cycles.begin(), f.cycles.end(), d) != f.cycles.end()) continue;
      auto es = g.cycle(d).edges();
      int s0 = segment(pos[es[0]]), s1 = segment(pos[es[1]]), s2 = segment(pos[es[2]]);
      bool flipped = s0 != s1 && s1 != s2 && s0 != s2;
      if (oriented_at(d) == flipped) continue;
      std::vector<CycleId> region = f.cycles;
      region.push_back(d);
      if (auto seq = search_sequence(g, region, limits)) return seq;
    }
  }
  return std::nullopt;
}

MoveSequence find_32_sequence(const GraphState& g, std::optional<CycleId> start) {
  if (!g.two_cycles().empty() || !g.is_simple())
    throw ContractError("(3,2) search needs only 1-cycles and 3-cycles");
  CycleId c;
  if (start) {
    c = *start;
    if (!g.alive(c) || g.cycle(c).length != 3) throw ContractError("(3,2) search must start at a 3-cycle");
  } else {
    auto threes = g.three_cycles();
    if (threes.empty()) throw ContractError("(3,2) search needs a 3-cycle");
    c = threes[0];
    std::int32_t best = leftmost_index(g, c);
    for (auto d : threes) {
      std::int32_t li = leftmost_index(g, d);
      if (li < best) best = li, c = d;
    }
  }
  if (auto t = find_2_move_on_cycle(g, c)) return {{*t}, 1};

  const SearchLimits limits{3, {0, 1, 2, 2}, EndState::NoTwoCycles};
  std::vector<CycleId> region{c};
  constexpr std::size_t kMaxRegion = 6;
  while (region.size() < kMaxRegion) {
    bool grown = false;
    for (std::size_t q = 0; q < region.size() && !grown; ++q) {
      CycleId r = region[q];
      if (g.cycle(r).length != 3 || g.is_oriented(r)) continue;
      auto es = g.cycle(r).edges();
      const int pairs[3][2] = {{0, 1}, {1, 2}, {0, 2}};
      for (const auto& pr : pairs) {
        auto hit = g.query_intersecting_pair(es[pr[0]], es[pr[1]]);
        CycleId d = g.cycle_of(hit.first);
        if (std::find(region.begin(), region.end(), d) != region.end()) continue;
        region.push_back(d);
        grown = true;
        break;
      }
    }
    if (!grown) break;
    if (auto seq = search_sequence(g, region, limits)) return *seq;
  }
  throw InternalError("no (3,2)-sequence found around a 3-cycle");
}

std::optional<MoveSequence> find_xy_sequence(const GraphState& g, std::span<const CycleId> cycles, int ratio_num,
                                             int ratio_den, int depth_cap, bool forbid_two_cycles) {
  return search_sequence(g, cycles, ratio_limits(ratio_num, ratio_den, depth_cap, forbid_two_cycles));
}

std::optional<MoveSequence> find_xy_sequence(const GraphState& g, std::span<const CycleId> cycles,
                                             std::span<const std::vector<std::int32_t>> edge_indices,
                                             int ratio_num, int ratio_den, int depth_cap, bool forbid_two_cycles) {
  return search_sequence(g, cycles, edge_indices, ratio_limits(ratio_num, ratio_den, depth_cap, forbid_two_cycles));
}

}  // namespace sbt
