#include "local_graph.hpp"

#include <algorithm>

#include "errors.hpp"

namespace sbt {

LocalGraph::LocalGraph(const GraphState& g, std::span<const CycleId> cycles) : n_(g.edge_count()) {
  std::vector<std::pair<std::int32_t, EdgeName>> pe;
  for (CycleId c : cycles)
    for (EdgeName e : g.cycle(c).edges()) pe.push_back({g.edge_position(e), e});
  init(g, pe);
}

LocalGraph::LocalGraph(const GraphState& g, std::span<const CycleId> cycles,
                       std::span<const std::vector<std::int32_t>> edge_indices)
    : n_(g.edge_count()) {
  if (edge_indices.size() != cycles.size()) throw ContractError("one index list per cycle expected");
  std::vector<std::pair<std::int32_t, EdgeName>> pe;
  for (std::size_t q = 0; q < cycles.size(); ++q) {
    auto es = g.cycle(cycles[q]).edges();
    if (edge_indices[q].size() != es.size()) throw ContractError("index list does not match its cycle");
    for (std::size_t r = 0; r < es.size(); ++r) pe.push_back({edge_indices[q][r] == 0 ? n_ : edge_indices[q][r], es[r]});
  }
  init(g, pe);
}

void LocalGraph::init(const GraphState& g, std::vector<std::pair<std::int32_t, EdgeName>>& pe) {
  if (pe.size() > static_cast<std::size_t>(kMaxEdges))
    throw ContractError("search region exceeds " + std::to_string(kMaxEdges) + " black edges");
  std::sort(pe.begin(), pe.end());
  m_ = static_cast<int>(pe.size());
  for (int r = 0; r < m_; ++r) {
    name_[r] = pe[r].second;
    gpos_[r] = pe[r].first;
    order_[r] = static_cast<std::int8_t>(r);
    rank_[r] = static_cast<std::int8_t>(r);
  }
  // r-end slot of edge e is its left neighbour pred(e); the grey edge from
  // that slot leads to the edge named pred(e) + 1.
  for (int e = 0; e < m_; ++e) {
    rslot_[e] = static_cast<std::int8_t>(e);
    EdgeName target = (g.pred(name_[e]) + 1) % n_;
    int t = -1;
    for (int q = 0; q < m_; ++q)
      if (name_[q] == target) t = q;
    if (t < 0) throw ContractError("search region is not a union of whole cycles");
    grey_[e] = static_cast<std::int8_t>(t);
  }
}

Transposition LocalGraph::apply(int ra, int rb, int rc) {
  const int x = order_[ra], y = order_[rb], z = order_[rc];
  const std::int32_t i = gpos_[x], j = gpos_[y], k = gpos_[z];
  const std::int8_t sx = rslot_[x], sy = rslot_[y], sz = rslot_[z];
  rslot_[y] = sx;
  rslot_[x] = sz;
  rslot_[z] = sy;
  for (int r = ra; r < rb; ++r) gpos_[order_[r]] += k - j;
  for (int r = rb; r < rc; ++r) gpos_[order_[r]] -= j - i;
  std::rotate(order_.begin() + ra, order_.begin() + rb, order_.begin() + rc);
  for (int r = ra; r < rc; ++r) rank_[order_[r]] = static_cast<std::int8_t>(r);
  return {i, j, k};
}

int LocalGraph::delta(int ra, int rb, int rc) const {
  const int x = order_[ra], y = order_[rb], z = order_[rc];
  const int cut[3] = {x, y, z};
  int before = 0, after = 0;
  std::uint64_t seen = 0;
  for (int s : cut) {
    if (seen >> s & 1) continue;
    int len = 0, e = s;
    do {
      seen |= std::uint64_t{1} << e;
      ++len;
      e = next_of(e);
    } while (e != s);
    before += len & 1;
  }
  auto moved = [&](int e) {
    int slot = e == x ? rslot_[z] : e == y ? rslot_[x] : e == z ? rslot_[y] : rslot_[e];
    return static_cast<int>(grey_[slot]);
  };
  seen = 0;
  for (int s : cut) {
    if (seen >> s & 1) continue;
    int len = 0, e = s;
    do {
      seen |= std::uint64_t{1} << e;
      ++len;
      e = moved(e);
    } while (e != s);
    after += len & 1;
  }
  return after - before;
}

std::int32_t LocalGraph::c_odd() const {
  std::uint64_t seen = 0;
  std::int32_t odd = 0;
  for (int s = 0; s < m_; ++s) {
    if (seen >> s & 1) continue;
    int len = 0;
    int e = s;
    do {
      seen |= std::uint64_t{1} << e;
      ++len;
      e = next_of(e);
    } while (e != s);
    odd += len & 1;
  }
  return odd;
}

void LocalGraph::analyze(Analysis& out) const {
  out.c_odd = 0;
  out.two_cycles = 0;
  out.max_length = 0;
  out.cycles.clear();
  out.members.clear();
  std::uint64_t seen = 0;
  for (int sr = 0; sr < m_; ++sr) {
    int s = order_[sr];
    if (seen >> s & 1) continue;
    CycleInfo info;
    info.first = static_cast<std::int32_t>(out.members.size());
    int e = s;
    do {
      seen |= std::uint64_t{1} << e;
      out.members.push_back(rank_[e]);
      e = next_of(e);
    } while (e != s);
    info.length = static_cast<std::int32_t>(out.members.size()) - info.first;
    if (info.length == 3) {
      const std::int32_t* r = &out.members[info.first];
      info.oriented = ((r[0] > r[1]) + (r[1] > r[2]) + (r[2] > r[0])) == 1;
    }
    out.c_odd += info.length & 1;
    out.two_cycles += info.length == 2;
    out.max_length = std::max(out.max_length, info.length);
    out.cycles.push_back(info);
  }
}

}  // namespace sbt
