#include "breakpoint_graph.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace sbt {

namespace {

class TreeClock {
 public:
  TreeClock(bool on, std::int64_t& sink) : on_(on), sink_(sink) {
    if (on_) start_ = std::chrono::steady_clock::now();
  }
  ~TreeClock() {
    if (on_)
      sink_ += std::chrono::duration_cast<std::chrono::nanoseconds>(
                   std::chrono::steady_clock::now() - start_)
                   .count();
  }

 private:
  bool on_;
  std::int64_t& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

GraphState::GraphState(std::span<const std::int32_t> extended) {
  if (extended.empty()) throw InputError("extended permutation must contain the fixed 0");
  if (extended[0] != 0) throw InputError("extended permutation must start with 0");
  n_ = static_cast<std::int32_t>(extended.size());
  std::vector<char> seen(n_, 0);
  for (auto v : extended) {
    if (v < 0 || v >= n_) throw InputError("value " + std::to_string(v) + " outside 0..N-1");
    if (seen[v]) throw InputError("duplicate value " + std::to_string(v));
    seen[v] = 1;
  }
  tree_ = PermTree::build(extended);
  edges_.assign(n_, EdgeSlot{});
  for (std::int32_t i = 0; i < n_; ++i) {
    edges_[extended[i]].pred = extended[(i + n_ - 1) % n_];
    edges_[extended[i]].succ = extended[(i + 1) % n_];
  }
  std::vector<EdgeName> walk;
  for (std::int32_t i = 0; i < n_; ++i) {
    EdgeName start = extended[i];
    if (edges_[start].cycle >= 0) continue;
    walk.clear();
    EdgeName e = start;
    do {
      walk.push_back(e);
      edges_[e].cycle = -2;
      e = next_edge(e);
    } while (e != start);
    new_cycle(walk);
  }
}

GraphState build_graph(const Permutation& p) { return GraphState(p.extended()); }

CycleId GraphState::new_cycle(std::span<const EdgeName> edges) {
  CycleId id;
  if (!free_cycles_.empty()) {
    id = free_cycles_.back();
    free_cycles_.pop_back();
  } else {
    id = static_cast<CycleId>(cycles_.size());
    cycles_.emplace_back();
  }
  Cycle& c = cycles_[id];
  c.generation += 1;
  c.alive = true;
  c.marked = false;
  c.length = static_cast<std::int32_t>(edges.size());
  c.long_edges.clear();
  if (c.length <= 3)
    std::copy(edges.begin(), edges.end(), c.inline_edges.begin());
  else
    c.long_edges.assign(edges.begin(), edges.end());
  for (auto e : edges) edges_[e].cycle = id;
  cycle_count_ += 1;
  if (c.length % 2 == 1) c_odd_ += 1;
  if (c.length > 3) long_cycles_ += 1;
  bucket_add(id);
  return id;
}

void GraphState::kill_cycle(CycleId id) {
  Cycle& c = cycles_[id];
  if (c.marked) {
    // Leave the tree flags; most of these edges land in a new marked cycle.
    auto es = c.edges();
    stale_flags_.insert(stale_flags_.end(), es.begin(), es.end());
    c.marked = false;
  }
  bucket_remove(id);
  cycle_count_ -= 1;
  if (c.length % 2 == 1) c_odd_ -= 1;
  if (c.length > 3) long_cycles_ -= 1;
  c.alive = false;
  c.long_edges.clear();
  c.long_edges.shrink_to_fit();
  free_cycles_.push_back(id);
}

void GraphState::bucket_add(CycleId id) {
  Cycle& c = cycles_[id];
  if (c.length != 2 && c.length != 3) return;
  auto& b = buckets_[c.length - 2];
  c.bucket_slot = static_cast<std::int32_t>(b.size());
  b.push_back(id);
}

void GraphState::bucket_remove(CycleId id) {
  Cycle& c = cycles_[id];
  if (c.length != 2 && c.length != 3) return;
  auto& b = buckets_[c.length - 2];
  CycleId last = b.back();
  b[c.bucket_slot] = last;
  cycles_[last].bucket_slot = c.bucket_slot;
  b.pop_back();
  c.bucket_slot = -1;
}

std::vector<CycleId> GraphState::live_cycles() const {
  std::vector<CycleId> out;
  for (CycleId c = 0; c < static_cast<CycleId>(cycles_.size()); ++c)
    if (cycles_[c].alive) out.push_back(c);
  return out;
}

std::int32_t GraphState::edge_index(EdgeName e) const {
  if (e < 0 || e >= n_) throw LookupError("no black edge named " + std::to_string(e));
  TreeClock clock(time_tree_, tree_ns_);
  return static_cast<std::int32_t>(tree_.position_of(e)) - 1;
}

void GraphState::edge_indices(std::span<const EdgeName> es, std::span<std::int32_t> out) const {
  for (auto e : es)
    if (e < 0 || e >= n_) throw LookupError("no black edge named " + std::to_string(e));
  std::array<std::size_t, 8> pos;
  TreeClock clock(time_tree_, tree_ns_);
  for (std::size_t base = 0; base < es.size(); base += pos.size()) {
    const std::size_t m = std::min(pos.size(), es.size() - base);
    tree_.positions_of(es.subspan(base, m), std::span(pos).first(m));
    for (std::size_t q = 0; q < m; ++q) out[base + q] = static_cast<std::int32_t>(pos[q]) - 1;
  }
}

std::int32_t GraphState::edge_position(EdgeName e) const {
  std::int32_t idx = edge_index(e);
  return idx == 0 ? n_ : idx;
}

EdgeName GraphState::edge_at_position(std::int32_t p) const {
  if (p < 1 || p > n_) throw RangeError("cut position " + std::to_string(p) + " outside 1..N");
  TreeClock clock(time_tree_, tree_ns_);
  return tree_.element_at(static_cast<std::size_t>(p % n_) + 1);
}

std::array<EdgeName, 3> GraphState::ordered_cut(EdgeName a, EdgeName b, EdgeName c,
                                                std::array<std::int32_t, 3>* positions) const {
  if (a == b || b == c || a == c) throw RangeError("cut edges must be distinct");
  std::array<std::pair<std::int32_t, EdgeName>, 3> pe{
      {{edge_position(a), a}, {edge_position(b), b}, {edge_position(c), c}}};
  std::sort(pe.begin(), pe.end());
  if (positions) *positions = {pe[0].first, pe[1].first, pe[2].first};
  return {pe[0].second, pe[1].second, pe[2].second};
}

Transposition GraphState::transposition_for(EdgeName a, EdgeName b, EdgeName c) const {
  std::array<std::int32_t, 3> p{};
  ordered_cut(a, b, c, &p);
  return {p[0], p[1], p[2]};
}

std::array<EdgeName, 3> GraphState::cut_edges(const Transposition& t) const {
  if (!is_valid_transposition(t, static_cast<std::size_t>(n_ - 1)))
    throw RangeError("transposition (" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                     std::to_string(t.k) + ") invalid for " + std::to_string(n_) + " black edges");
  return {edge_at_position(t.i), edge_at_position(t.j), edge_at_position(t.k)};
}

// cut = edges at cut positions i < j < k. The move gives y the old left
// neighbour of x, x that of z and z that of y.
int GraphState::delta_for_ordered(const std::array<EdgeName, 3>& cut) const {
  const EdgeName x = cut[0], y = cut[1], z = cut[2];
  const std::int32_t px = edges_[x].pred, py = edges_[y].pred, pz = edges_[z].pred;
  auto npred = [&](EdgeName e) {
    if (e == x) return pz;
    if (e == y) return px;
    if (e == z) return py;
    return edges_[e].pred;
  };
  std::array<CycleId, 3> touched{edges_[x].cycle, edges_[y].cycle, edges_[z].cycle};
  int old_odd = 0;
  for (int q = 0; q < 3; ++q) {
    bool dup = false;
    for (int r = 0; r < q; ++r) dup |= touched[r] == touched[q];
    if (!dup && cycles_[touched[q]].length % 2 == 1) ++old_odd;
  }
  if (++stamp_gen_ == 0) {
    for (auto& slot : edges_) slot.stamp = 0;
    stamp_gen_ = 1;
  }
  int new_odd = 0;
  for (int q = 0; q < 3; ++q) {
    bool dup = false;
    for (int r = 0; r < q; ++r) dup |= touched[r] == touched[q];
    if (dup) continue;
    for (EdgeName s : cycles_[touched[q]].edges()) {
      if (edges_[s].stamp == stamp_gen_) continue;
      std::int32_t len = 0;
      EdgeName e = s;
      do {
        edges_[e].stamp = stamp_gen_;
        ++len;
        e = (npred(e) + 1) % n_;
      } while (e != s);
      if (len % 2 == 1) ++new_odd;
    }
  }
  return new_odd - old_odd;
}

int GraphState::classify(const Transposition& t) const { return delta_for_ordered(cut_edges(t)); }

int GraphState::classify_edges(EdgeName a, EdgeName b, EdgeName c) const {
  return delta_for_ordered(ordered_cut(a, b, c, nullptr));
}

AppliedMove GraphState::apply(const Transposition& t) {
  if (!is_valid_transposition(t, static_cast<std::size_t>(n_ - 1)))
    throw RangeError("transposition (" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                     std::to_string(t.k) + ") invalid for " + std::to_string(n_) + " black edges");
  PermTree::MoveTrace trace;
  {
    TreeClock clock(time_tree_, tree_ns_);
    trace = tree_.apply_transposition(t.i + 1, t.j + 1, t.k + 1);
    const auto& pre = trace.tagged_before;
    if (pre[0] < pre[1] && pre[1] < pre[2])
      tagged_log_.push_back({static_cast<std::int32_t>(pre[0]), static_cast<std::int32_t>(pre[1]),
                             static_cast<std::int32_t>(pre[2])});
  }
  // Cut position N is index 0, which always holds edge 0.
  const EdgeName x = trace.heads[0], y = trace.heads[1], z = t.k == n_ ? 0 : trace.heads[2];
  const std::int32_t px = edges_[x].pred, py = edges_[y].pred, pz = edges_[z].pred;
  std::array<CycleId, 3> touched{edges_[x].cycle, edges_[y].cycle, edges_[z].cycle};
  std::vector<EdgeName> edges;
  int old_odd = c_odd_;
  for (int q = 0; q < 3; ++q) {
    bool dup = false;
    for (int r = 0; r < q; ++r) dup |= touched[r] == touched[q];
    if (dup) continue;
    auto es = cycles_[touched[q]].edges();
    edges.insert(edges.end(), es.begin(), es.end());
    kill_cycle(touched[q]);
  }
  edges_[y].pred = px;
  edges_[x].pred = pz;
  edges_[z].pred = py;
  edges_[px].succ = y;
  edges_[pz].succ = x;
  edges_[py].succ = z;

  AppliedMove out;
  out.t = t;
  for (auto e : edges) edges_[e].cycle = -1;
  std::vector<EdgeName> walk;
  for (EdgeName s : edges) {
    if (edges_[s].cycle != -1) continue;
    walk.clear();
    EdgeName e = s;
    do {
      walk.push_back(e);
      edges_[e].cycle = -2;
      e = next_edge(e);
    } while (e != s);
    out.created.push_back(new_cycle(walk));
  }
  out.delta_c_odd = c_odd_ - old_odd;
  return out;
}

bool GraphState::is_oriented(CycleId id) const {
  const Cycle& c = cycles_[id];
  auto es = c.edges();
  if (c.length < 3) return false;
  if (c.length == 3) {
    // Oriented iff the traversal visits the edges in increasing cyclic order.
    std::int32_t a = edge_index(es[0]), b = edge_index(es[1]), d = edge_index(es[2]);
    int descents = (a > b) + (b > d) + (d > a);
    return descents == 1;
  }
  for (std::size_t p = 0; p < es.size(); ++p)
    for (std::size_t q = p + 1; q < es.size(); ++q)
      for (std::size_t r = q + 1; r < es.size(); ++r)
        if (classify_edges(es[p], es[q], es[r]) == 2) return true;
  return false;
}

std::pair<EdgeName, EdgeName> GraphState::query_intersecting_pair(EdgeName a, EdgeName b) const {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_)
    throw ContractError("query needs two distinct black edges");
  if (edges_[a].cycle != edges_[b].cycle) throw ContractError("query edges lie on different cycles");
  if (is_oriented(edges_[a].cycle)) throw ContractError("query edges lie on an oriented cycle");
  // Longer cycles can meet the wrap-around edge with nothing to cross it.
  if (cycles_[edges_[a].cycle].length > 3) throw ContractError("query needs a cycle of at most three edges");
  return query_at_indices(edge_index(a), edge_index(b));
}

std::pair<EdgeName, EdgeName> GraphState::query_at_indices(std::int32_t index_a, std::int32_t index_b) const {
  std::int32_t p = index_a == 0 ? n_ : index_a, q = index_b == 0 ? n_ : index_b;
  if (p > q) std::swap(p, q);
  // Elements strictly between the two cuts occupy indices p..q-1.
  std::int32_t vmax;
  {
    TreeClock clock(time_tree_, tree_ns_);
    vmax = tree_.range_max_value(static_cast<std::size_t>(p) + 1, static_cast<std::size_t>(q));
  }
  return {edges_[vmax].succ, (vmax + 1) % n_};
}

bool pairs_intersect(std::pair<std::int32_t, std::int32_t> a, std::pair<std::int32_t, std::int32_t> b) {
  auto [p, q] = a;
  auto [r, s] = b;
  if (p == q || p == r || p == s || q == r || q == s || r == s)
    throw InputError("intersection needs four distinct black edges");
  if (p > q) std::swap(p, q);
  bool r_in = p < r && r < q;
  bool s_in = p < s && s < q;
  return r_in != s_in;
}

bool GraphState::pairs_intersect(std::pair<EdgeName, EdgeName> p, std::pair<EdgeName, EdgeName> q) const {
  return sbt::pairs_intersect({edge_index(p.first), edge_index(p.second)},
                              {edge_index(q.first), edge_index(q.second)});
}

bool GraphState::cycles_intersect(CycleId c, CycleId d) const {
  if (c == d) return false;
  auto ce = cycles_[c].edges();
  auto de = cycles_[d].edges();
  if (ce.size() < 2 || de.size() < 2) return false;
  std::vector<std::int32_t> cpos;
  for (auto e : ce) cpos.push_back(edge_index(e));
  std::sort(cpos.begin(), cpos.end());
  // d intersects c iff its edges fall into at least two arcs cut out by c.
  std::int32_t first_arc = -1;
  for (auto e : de) {
    std::int32_t x = edge_index(e);
    std::int32_t arc = static_cast<std::int32_t>(std::lower_bound(cpos.begin(), cpos.end(), x) - cpos.begin());
    if (arc == static_cast<std::int32_t>(cpos.size())) arc = 0;
    if (first_arc < 0) first_arc = arc;
    else if (arc != first_arc) return true;
  }
  return false;
}

void GraphState::set_marked(CycleId id, bool on) {
  Cycle& c = cycles_[id];
  if (c.marked == on) return;
  TreeClock clock(time_tree_, tree_ns_);
  tree_.set_flags(c.edges(), on);
  c.marked = on;
}

void GraphState::set_marked(std::span<const CycleId> cs, bool on) {
  std::vector<EdgeName> edges;
  for (auto id : cs) {
    Cycle& c = cycles_[id];
    if (c.marked == on) continue;
    auto es = c.edges();
    edges.insert(edges.end(), es.begin(), es.end());
    c.marked = on;
  }
  TreeClock clock(time_tree_, tree_ns_);
  tree_.set_flags(edges, on);
}

void GraphState::sync_flags() const {
  if (stale_flags_.empty()) return;
  TreeClock clock(time_tree_, tree_ns_);
  for (auto e : stale_flags_) {
    CycleId c = edges_[e].cycle;
    tree_.set_flag(e, c >= 0 && cycles_[c].marked);  // no walk when unchanged
  }
  stale_flags_.clear();
}

std::size_t GraphState::marked_edge_count() const {
  sync_flags();
  return tree_.flagged_count();
}

std::optional<CycleId> GraphState::first_marked() const {
  sync_flags();
  std::optional<std::int32_t> e;
  {
    TreeClock clock(time_tree_, tree_ns_);
    e = tree_.first_flagged_value();
    // Edge 0 sits at tree position 1 but is the rightmost cut.
    if (e == 0 && tree_.flagged_count() > 1) e = tree_.nth_flagged_value(2);
  }
  if (!e) return std::nullopt;
  return edges_[*e].cycle;
}

namespace {

struct DisjointSets {
  std::vector<std::int32_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int32_t find(std::int32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
};

}  // namespace

std::vector<std::vector<CycleId>> GraphState::components_of(std::span<const CycleId> cycles) const {
  // Points (edge index, local cycle number), swept left to right. A stack of
  // open blocks is kept; revisiting an open block merges every block opened
  // after it that is still unfinished, since those cross it.
  std::vector<std::pair<std::int32_t, std::int32_t>> points;
  std::vector<std::int32_t> local;  // cycles with at least two edges
  std::vector<std::int32_t> minidx;
  for (CycleId c : cycles) {
    const auto& cy = cycles_[c];
    if (!cy.alive || cy.length < 2) continue;
    std::int32_t li = static_cast<std::int32_t>(local.size());
    local.push_back(c);
    std::int32_t mn = n_;
    for (auto e : cy.edges()) {
      std::int32_t x = edge_index(e);
      points.push_back({x, li});
      mn = std::min(mn, x);
    }
    minidx.push_back(mn);
  }
  std::sort(points.begin(), points.end());
  DisjointSets sets(local.size());
  std::vector<std::int32_t> remaining(local.size());
  for (auto& [x, li] : points) remaining[li] += 1;
  std::vector<char> on_stack(local.size(), 0);
  std::vector<std::int32_t> stack;
  for (auto& [x, li] : points) {
    std::int32_t root = sets.find(li);
    if (!on_stack[root]) {
      stack.push_back(root);
      on_stack[root] = 1;
    } else {
      while (stack.back() != root) {
        std::int32_t top = stack.back();
        stack.pop_back();
        on_stack[top] = 0;
        sets.parent[top] = root;
        remaining[root] += remaining[top];
      }
    }
    if (--remaining[root] == 0) {
      stack.pop_back();
      on_stack[root] = 0;
    }
  }
  std::vector<std::vector<std::int32_t>> groups(local.size());
  for (std::int32_t li = 0; li < static_cast<std::int32_t>(local.size()); ++li)
    groups[sets.find(li)].push_back(li);
  std::vector<std::vector<CycleId>> out;
  std::vector<std::int32_t> keys;
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end(), [&](std::int32_t a, std::int32_t b) { return minidx[a] < minidx[b]; });
    std::vector<CycleId> comp;
    for (auto li : g) comp.push_back(local[li]);
    keys.push_back(minidx[g.front()]);
    out.push_back(std::move(comp));
  }
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::vector<CycleId>> sorted;
  for (auto o : order) sorted.push_back(std::move(out[o]));
  return sorted;
}

std::vector<std::vector<CycleId>> GraphState::components() const {
  auto all = live_cycles();
  return components_of(all);
}

std::string GraphState::dump() const {
  auto seq = sequence();
  std::vector<std::int32_t> index_of(n_);
  for (std::int32_t i = 0; i < n_; ++i) index_of[seq[i]] = i;
  std::vector<std::pair<std::int32_t, std::vector<std::int32_t>>> rows;
  std::vector<char> oriented;
  for (CycleId c = 0; c < static_cast<CycleId>(cycles_.size()); ++c) {
    if (!cycles_[c].alive) continue;
    std::vector<std::int32_t> idx;
    for (auto e : cycles_[c].edges()) idx.push_back(index_of[e]);
    auto mn = std::min_element(idx.begin(), idx.end());
    std::rotate(idx.begin(), mn, idx.end());
    rows.push_back({idx.front(), idx});
    oriented.push_back(is_oriented(c) ? 1 : 0);
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rows[a].first < rows[b].first; });
  std::ostringstream out;
  for (auto o : order) {
    const auto& idx = rows[o].second;
    out << "cycle k=" << idx.size() << " oriented=" << int(oriented[o]) << " edges=";
    for (std::size_t q = 0; q < idx.size(); ++q) out << (q ? "," : "") << idx[q];
    out << '\n';
  }
  return out.str();
}

std::string GraphState::audit() const {
  sync_flags();
  std::string terr = tree_.audit();
  if (!terr.empty()) return "tree: " + terr;
  auto seq = sequence();
  if (static_cast<std::int32_t>(seq.size()) != n_) return "tree size mismatch";
  if (seq[0] != 0) return "element 0 moved";
  for (std::int32_t i = 0; i < n_; ++i) {
    if (edges_[seq[i]].pred != seq[(i + n_ - 1) % n_]) return "pred stale at index " + std::to_string(i);
    if (edges_[seq[i]].succ != seq[(i + 1) % n_]) return "succ stale at index " + std::to_string(i);
  }
  std::int32_t odd = 0, count = 0, longc = 0;
  std::array<std::size_t, 2> bucket_sizes{0, 0};
  std::size_t marked_edges = 0;
  for (CycleId c = 0; c < static_cast<CycleId>(cycles_.size()); ++c) {
    const auto& cy = cycles_[c];
    if (!cy.alive) continue;
    ++count;
    if (cy.length % 2) ++odd;
    if (cy.length > 3) ++longc;
    if (cy.length == 2 || cy.length == 3) {
      ++bucket_sizes[cy.length - 2];
      if (buckets_[cy.length - 2][cy.bucket_slot] != c) return "bucket slot stale";
    }
    auto es = cy.edges();
    if (static_cast<std::int32_t>(es.size()) != cy.length) return "cycle length mismatch";
    for (std::size_t q = 0; q < es.size(); ++q) {
      if (edges_[es[q]].cycle != c) return "edge map stale";
      if (next_edge(es[q]) != es[(q + 1) % es.size()]) return "cycle order broken";
      if (tree_.flag(es[q]) != cy.marked) return "mark flag mismatch";
    }
    if (cy.marked) marked_edges += es.size();
  }
  if (odd != c_odd_ || count != cycle_count_ || longc != long_cycles_) return "counts stale";
  if (bucket_sizes[0] != buckets_[0].size() || bucket_sizes[1] != buckets_[1].size())
    return "bucket size stale";
  if (marked_edges != tree_.flagged_count()) return "stray mark flags";
  return {};
}

std::int32_t lower_bound(const GraphState& g) { return g.lower_bound(); }

std::int32_t lower_bound(const Permutation& p) { return build_graph(p).lower_bound(); }

}  // namespace sbt
