#include "simplifier.hpp"

#include "errors.hpp"
#include "permutation_tree.hpp"

namespace sbt {

std::vector<std::int32_t> SimplificationMap::unpad() const {
  std::vector<std::int32_t> out;
  out.reserve(original.size());
  for (auto v : padded)
    if (value_remap[v] >= 0) out.push_back(value_remap[v]);
  return out;
}

SimplificationMap simplify(const Permutation& p) { return simplify_extended(p.extended()); }

SimplificationMap simplify_extended(std::span<const std::int32_t> ext) {
  const std::int32_t n = static_cast<std::int32_t>(ext.size());
  if (n == 0 || ext[0] != 0) throw InputError("extended permutation must start with 0");
  {
    std::vector<char> seen(n, 0);
    for (auto v : ext) {
      if (v < 0 || v >= n || seen[v]) throw InputError("not a permutation of 0..N-1");
      seen[v] = 1;
    }
  }
  // Node ids: original values 0..n-1, inserted elements n, n+1, ...
  // Position order is a circular doubly linked list, value order a circular
  // singly linked list; both start at node 0.
  const std::size_t cap = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<std::int32_t> pos_prev(cap), pos_next(cap), val_next(cap);
  for (std::int32_t i = 0; i < n; ++i) {
    pos_prev[ext[i]] = ext[(i + n - 1) % n];
    pos_next[ext[i]] = ext[(i + 1) % n];
    val_next[i] = (i + 1) % n;
  }
  std::int32_t next_id = n;
  auto walk = [&](std::int32_t e) { return val_next[pos_prev[e]]; };

  std::vector<char> visited(n, 0);
  for (std::int32_t idx = 0; idx < n; ++idx) {
    const std::int32_t anchor = ext[idx];
    if (visited[anchor]) continue;
    std::int32_t len = 0;
    std::int32_t e = anchor;
    do {
      visited[e] = 1;
      ++len;
      e = walk(e);
    } while (e != anchor);
    while (len > 3) {
      // anchor -> a -> b -> c ...: insert w after pred(b) in value order and
      // just left of the anchor, leaving the 3-cycle (a b w) and anchor -> c.
      std::int32_t a = walk(anchor);
      std::int32_t b = walk(a);
      std::int32_t u = pos_prev[b];
      std::int32_t w = next_id++;
      val_next[w] = val_next[u];
      val_next[u] = w;
      std::int32_t left = pos_prev[anchor];
      pos_prev[w] = left;
      pos_next[w] = anchor;
      pos_next[left] = w;
      pos_prev[anchor] = w;
      len -= 2;
    }
  }

  const std::int32_t total = next_id;
  std::vector<std::int32_t> rank(total);
  SimplificationMap map;
  map.original.assign(ext.begin(), ext.end());
  map.value_remap.resize(total);
  {
    std::int32_t v = 0, r = 0;
    do {
      rank[v] = r;
      map.value_remap[r] = v < n ? v : -1;
      ++r;
      v = val_next[v];
    } while (v != 0);
  }
  map.padded.reserve(total);
  {
    std::int32_t v = 0;
    do {
      if (v >= n) map.inserted_positions.push_back(static_cast<std::int32_t>(map.padded.size()));
      map.padded.push_back(rank[v]);
      v = pos_next[v];
    } while (v != 0);
  }
  return map;
}

std::vector<Transposition> mimic(const SimplificationMap& map, std::span<const Transposition> moves) {
  const std::size_t n = map.padded.size();
  PermTree tree = PermTree::build(map.padded);
  for (auto v : map.padded)
    if (map.value_remap[v] >= 0) tree.set_flag(v, true);
  std::vector<Transposition> out;
  out.reserve(moves.size());
  for (const auto& t : moves) {
    if (!is_valid_transposition(t, n - 1))
      throw RangeError("move (" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
                       std::to_string(t.k) + ") invalid for the padded permutation");
    // Cut before padded index c keeps the original elements at indices < c on
    // its left: that count is the cut in the original permutation.
    auto ci = static_cast<std::int32_t>(tree.flagged_prefix(t.i));
    auto cj = static_cast<std::int32_t>(tree.flagged_prefix(t.j));
    auto ck = static_cast<std::int32_t>(tree.flagged_prefix(t.k));
    tree.apply_transposition(t.i + 1, t.j + 1, t.k + 1);
    if (ci < cj && cj < ck) out.push_back({ci, cj, ck});
  }
  auto final_seq = tree.to_sequence();
  for (std::size_t q = 0; q < final_seq.size(); ++q)
    if (final_seq[q] != static_cast<std::int32_t>(q))
      throw ContractError("moves do not sort the padded permutation");
  return out;
}

}  // namespace sbt
