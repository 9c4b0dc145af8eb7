#include "permutation_tree.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "errors.hpp"
#include "huge_pages.hpp"

namespace sbt {
namespace detail {

struct alignas(32) Node {
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::int32_t parent = -1;
  std::int32_t height = 0;
  std::int32_t size = 1;
  std::int32_t max = 0;  // leaf label for leaves
  std::int32_t flags = 0;
  std::int32_t tags = 0;  // second independent 0/1 counter
};

class NodeStore {
 public:
  huge_vector<Node> nodes;
  std::vector<std::int32_t> free_ids;
  huge_vector<std::int32_t> leaf_of;  // value -> leaf id, -1 when absent
  // Values below this own leaf id == value, so lookups skip leaf_of. Set by
  // build on 0..m-1 and dropped as soon as any leaf is released.
  std::int32_t dense = 0;

  std::int32_t leaf_id(std::int32_t v) const {
    if (v < dense) return v;
    return static_cast<std::size_t>(v) < leaf_of.size() ? leaf_of[v] : -1;
  }

  bool is_leaf(std::int32_t t) const { return nodes[t].left < 0; }
  std::int32_t height(std::int32_t t) const { return t < 0 ? -1 : nodes[t].height; }
  std::int32_t size(std::int32_t t) const { return t < 0 ? 0 : nodes[t].size; }

  void reserve_values(std::int32_t max_value) {
    if (static_cast<std::size_t>(max_value) >= leaf_of.size()) leaf_of.resize(max_value + 1, -1);
  }

  std::int32_t alloc() {
    if (!free_ids.empty()) {
      std::int32_t id = free_ids.back();
      free_ids.pop_back();
      nodes[id] = Node{};
      return id;
    }
    nodes.emplace_back();
    return static_cast<std::int32_t>(nodes.size() - 1);
  }

  void release(std::int32_t t) { free_ids.push_back(t); }

  std::int32_t make_leaf(std::int32_t v, bool flagged) {
    std::int32_t id = alloc();
    Node& n = nodes[id];
    n.max = v;
    n.flags = flagged ? 1 : 0;
    leaf_of[v] = id;
    return id;
  }

  void pull(std::int32_t t) {
    Node& n = nodes[t];
    const Node& l = nodes[n.left];
    const Node& r = nodes[n.right];
    n.height = 1 + std::max(l.height, r.height);
    n.size = l.size + r.size;
    n.max = std::max(l.max, r.max);
    n.flags = l.flags + r.flags;
    n.tags = l.tags + r.tags;
    nodes[n.left].parent = t;
    nodes[n.right].parent = t;
  }

  std::int32_t make_node(std::int32_t l, std::int32_t r) {
    std::int32_t id = alloc();
    nodes[id].left = l;
    nodes[id].right = r;
    pull(id);
    return id;
  }

  std::int32_t rotate_left(std::int32_t x) {
    std::int32_t y = nodes[x].right;
    nodes[x].right = nodes[y].left;
    pull(x);
    nodes[y].left = x;
    pull(y);
    return y;
  }

  std::int32_t rotate_right(std::int32_t x) {
    std::int32_t y = nodes[x].left;
    nodes[x].left = nodes[y].right;
    pull(x);
    nodes[y].right = x;
    pull(y);
    return y;
  }

  // height(tl) > height(tr) + 1
  std::int32_t join_right(std::int32_t tl, std::int32_t tr) {
    std::int32_t l = nodes[tl].left;
    std::int32_t c = nodes[tl].right;
    if (height(c) <= height(tr) + 1) {
      std::int32_t t1 = make_node(c, tr);
      if (height(t1) <= height(l) + 1) {
        nodes[tl].right = t1;
        pull(tl);
        return tl;
      }
      t1 = rotate_right(t1);
      nodes[tl].right = t1;
      pull(tl);
      return rotate_left(tl);
    }
    std::int32_t t1 = join_right(c, tr);
    nodes[tl].right = t1;
    pull(tl);
    if (height(t1) <= height(l) + 1) return tl;
    return rotate_left(tl);
  }

  // height(tr) > height(tl) + 1
  std::int32_t join_left(std::int32_t tl, std::int32_t tr) {
    std::int32_t c = nodes[tr].left;
    std::int32_t r = nodes[tr].right;
    if (height(c) <= height(tl) + 1) {
      std::int32_t t1 = make_node(tl, c);
      if (height(t1) <= height(r) + 1) {
        nodes[tr].left = t1;
        pull(tr);
        return tr;
      }
      t1 = rotate_left(t1);
      nodes[tr].left = t1;
      pull(tr);
      return rotate_right(tr);
    }
    std::int32_t t1 = join_left(tl, c);
    nodes[tr].left = t1;
    pull(tr);
    if (height(t1) <= height(r) + 1) return tr;
    return rotate_right(tr);
  }

  std::int32_t join(std::int32_t a, std::int32_t b) {
    if (a < 0) return b;
    if (b < 0) return a;
    std::int32_t ha = nodes[a].height, hb = nodes[b].height;
    std::int32_t t;
    if (ha > hb + 1)
      t = join_right(a, b);
    else if (hb > ha + 1)
      t = join_left(a, b);
    else
      t = make_node(a, b);
    nodes[t].parent = -1;
    return t;
  }

  // Roots of the first m leaves and of the rest; either may be -1.
  std::pair<std::int32_t, std::int32_t> split(std::int32_t t, std::int32_t m) {
    if (t < 0) return {-1, -1};
    if (m <= 0) return {-1, t};
    if (m >= nodes[t].size) return {t, -1};
    std::int32_t l = nodes[t].left, r = nodes[t].right;
    nodes[l].parent = -1;
    nodes[r].parent = -1;
    release(t);
    std::int32_t lsize = nodes[l].size;
    if (m <= lsize) {
      auto [a, b] = split(l, m);
      return {a, join(b, r)};
    }
    auto [a, b] = split(r, m - lsize);
    return {join(l, a), b};
  }

  std::int32_t build(std::span<const std::int32_t> seq, std::size_t lo, std::size_t hi,
                     bool leaves_placed = false) {
    if (hi - lo == 1) return leaves_placed ? seq[lo] : make_leaf(seq[lo], false);
    std::size_t mid = lo + (hi - lo) / 2;
    std::int32_t l = build(seq, lo, mid, leaves_placed);
    std::int32_t r = build(seq, mid, hi, leaves_placed);
    return make_node(l, r);
  }

  void release_subtree(std::int32_t root) {
    if (root < 0) return;
    dense = 0;
    std::vector<std::int32_t> stack{root};
    while (!stack.empty()) {
      std::int32_t t = stack.back();
      stack.pop_back();
      if (is_leaf(t)) {
        leaf_of[nodes[t].max] = -1;
      } else {
        stack.push_back(nodes[t].left);
        stack.push_back(nodes[t].right);
      }
      release(t);
    }
  }

  void collect(std::int32_t root, std::vector<std::int32_t>& values,
               std::vector<char>* flags) const {
    if (root < 0) return;
    std::vector<std::int32_t> stack;
    std::int32_t t = root;
    while (t >= 0 || !stack.empty()) {
      while (t >= 0) {
        stack.push_back(t);
        t = is_leaf(t) ? -1 : nodes[t].left;
      }
      t = stack.back();
      stack.pop_back();
      if (is_leaf(t)) {
        values.push_back(nodes[t].max);
        if (flags) flags->push_back(static_cast<char>(nodes[t].flags | (nodes[t].tags << 1)));
        t = -1;
      } else {
        t = nodes[t].right;
      }
    }
  }
};

}  // namespace detail

using detail::NodeStore;

PermTree::PermTree() : store_(std::make_shared<NodeStore>()) {}

PermTree::PermTree(std::shared_ptr<NodeStore> store, std::int32_t root)
    : store_(std::move(store)), root_(root) {}

PermTree::~PermTree() { release_all(); }

PermTree::PermTree(PermTree&& o) noexcept : store_(std::move(o.store_)), root_(o.root_) {
  o.root_ = -1;
}

PermTree& PermTree::operator=(PermTree&& o) noexcept {
  if (this != &o) {
    release_all();
    store_ = std::move(o.store_);
    root_ = o.root_;
    o.root_ = -1;
  }
  return *this;
}

void PermTree::release_all() {
  // Nodes only need returning to the store when another tree still uses it.
  if (store_ && root_ >= 0 && store_.use_count() > 1) store_->release_subtree(root_);
  root_ = -1;
}

PermTree PermTree::build(std::span<const std::int32_t> seq) {
  auto store = std::make_shared<NodeStore>();
  if (seq.empty()) return PermTree(std::move(store), -1);
  std::int32_t maxv = -1;
  for (auto v : seq) {
    if (v < 0) throw InputError("negative element " + std::to_string(v));
    maxv = std::max(maxv, v);
  }
  store->reserve_values(maxv);
  std::vector<char> seen(static_cast<std::size_t>(maxv) + 1, 0);
  for (auto v : seq) {
    if (seen[v]) throw InputError("duplicate element " + std::to_string(v));
    seen[v] = 1;
  }
  store->nodes.reserve(2 * seq.size());
  const bool dense = static_cast<std::size_t>(maxv) + 1 == seq.size();
  if (dense) {
    store->nodes.resize(seq.size());
    for (std::int32_t v = 0; v <= maxv; ++v) {
      store->nodes[v].max = v;
      store->leaf_of[v] = v;
    }
    store->dense = maxv + 1;
  }
  std::int32_t root = store->build(seq, 0, seq.size(), dense);
  store->nodes[root].parent = -1;
  return PermTree(std::move(store), root);
}

std::pair<PermTree, PermTree> PermTree::split(PermTree&& t, std::size_t m) {
  if (m > t.size())
    throw RangeError("split point " + std::to_string(m) + " beyond size " +
                     std::to_string(t.size()));
  auto store = t.store_;
  std::int32_t root = t.root_;
  t.root_ = -1;
  auto [a, b] = store->split(root, static_cast<std::int32_t>(m));
  if (a >= 0) store->nodes[a].parent = -1;
  if (b >= 0) store->nodes[b].parent = -1;
  return {PermTree(store, a), PermTree(store, b)};
}

PermTree PermTree::join(PermTree&& left, PermTree&& right) {
  if (right.root_ < 0) return std::move(left);
  if (left.root_ < 0) return std::move(right);
  if (left.store_ != right.store_) {
    // Move the smaller tree's leaves into the other tree's storage.
    bool move_right = right.size() <= left.size();
    PermTree& src = move_right ? right : left;
    PermTree& dst = move_right ? left : right;
    std::vector<std::int32_t> values;
    std::vector<char> flags;
    src.store_->collect(src.root_, values, &flags);
    NodeStore& ds = *dst.store_;
    std::int32_t maxv = *std::max_element(values.begin(), values.end());
    ds.reserve_values(maxv);
    for (auto v : values)
      if (ds.leaf_of[v] >= 0) throw InputError("joined trees share element " + std::to_string(v));
    std::int32_t copy = ds.build(values, 0, values.size());
    for (std::size_t q = 0; q < values.size(); ++q)
      if (flags[q]) {
        // Rebuilt leaves start unflagged; restore flags and tags bottom-up.
        int f = flags[q] & 1, g = flags[q] >> 1;
        std::int32_t t = ds.leaf_of[values[q]];
        ds.nodes[t].flags = f;
        ds.nodes[t].tags = g;
        for (std::int32_t p = ds.nodes[t].parent; p >= 0 && t != copy; t = p, p = ds.nodes[p].parent) {
          ds.nodes[p].flags += f;
          ds.nodes[p].tags += g;
        }
      }
    ds.nodes[copy].parent = -1;
    src.release_all();
    src.root_ = -1;
    std::int32_t joined = move_right ? ds.join(dst.root_, copy) : ds.join(copy, dst.root_);
    dst.root_ = -1;
    return PermTree(dst.store_, joined);
  }
  auto store = left.store_;
  std::int32_t joined = store->join(left.root_, right.root_);
  left.root_ = -1;
  right.root_ = -1;
  return PermTree(std::move(store), joined);
}

std::size_t PermTree::size() const { return root_ < 0 ? 0 : store_->nodes[root_].size; }

int PermTree::height() const { return root_ < 0 ? -1 : store_->nodes[root_].height; }

std::pair<std::int32_t, std::size_t> PermTree::range_max(std::size_t i, std::size_t j) const {
  std::int32_t best = range_max_value(i, j);
  return {best, position_of(best)};
}

std::int32_t PermTree::range_max_value(std::size_t i, std::size_t j) const {
  if (i < 1 || i > j || j > size())
    throw RangeError("range_max bounds [" + std::to_string(i) + ", " + std::to_string(j) +
                     "] invalid for size " + std::to_string(size()));
  const auto& nodes = store_->nodes;
  // Descend to the split node, then walk the two boundary paths.
  std::int32_t best = -1;
  std::int32_t t = root_;
  std::size_t lo = 1;
  while (true) {
    const auto& n = nodes[t];
    std::size_t hi = lo + n.size - 1;
    if (i <= lo && hi <= j) {
      best = n.max;
      break;
    }
    std::size_t mid = lo + nodes[n.left].size;  // first position of the right child
    if (j < mid) {
      t = n.left;
    } else if (i >= mid) {
      t = n.right;
      lo = mid;
    } else {
      // Left boundary path: suffix of the left child from i.
      std::int32_t u = n.left;
      std::size_t ulo = lo;
      while (true) {
        const auto& un = nodes[u];
        if (i <= ulo) {
          best = std::max(best, un.max);
          break;
        }
        std::size_t umid = ulo + nodes[un.left].size;
        if (i < umid) {
          best = std::max(best, nodes[un.right].max);
          u = un.left;
        } else {
          u = un.right;
          ulo = umid;
        }
      }
      // Right boundary path: prefix of the right child up to j.
      u = n.right;
      ulo = mid;
      while (true) {
        const auto& un = nodes[u];
        std::size_t uhi = ulo + un.size - 1;
        if (j >= uhi) {
          best = std::max(best, un.max);
          break;
        }
        std::size_t umid = ulo + nodes[un.left].size;
        if (j >= umid) {
          best = std::max(best, nodes[un.left].max);
          u = un.right;
          ulo = umid;
        } else {
          u = un.left;
        }
      }
      break;
    }
  }
  return best;
}

std::int32_t PermTree::leaf_in_tree(std::int32_t v) const {
  const auto& s = *store_;
  std::int32_t leaf = root_ < 0 || v < 0 ? -1 : s.leaf_id(v);
  if (leaf < 0) throw LookupError("element " + std::to_string(v) + " not in tree");
  if (store_.use_count() > 1) {
    std::int32_t t = leaf;
    while (s.nodes[t].parent >= 0) t = s.nodes[t].parent;
    if (t != root_) throw LookupError("element " + std::to_string(v) + " not in tree");
  }
  return leaf;
}

bool PermTree::contains(std::int32_t v) const {
  const auto& s = *store_;
  std::int32_t t = root_ < 0 || v < 0 ? -1 : s.leaf_id(v);
  if (t < 0) return false;
  while (s.nodes[t].parent >= 0) t = s.nodes[t].parent;
  return t == root_;
}

std::size_t PermTree::position_of(std::int32_t v) const {
  const auto& s = *store_;
  std::int32_t t = root_ < 0 || v < 0 ? -1 : s.leaf_id(v);
  if (t < 0) throw LookupError("element " + std::to_string(v) + " not in tree");
  const auto& nodes = s.nodes;
  std::size_t pos = 1;
  for (std::int32_t p = nodes[t].parent; p >= 0; t = p, p = nodes[p].parent)
    if (nodes[p].right == t) pos += nodes[p].size - nodes[t].size;
  if (t != root_) throw LookupError("element " + std::to_string(v) + " not in tree");
  return pos;
}

void PermTree::positions_of(std::span<const std::int32_t> vs, std::span<std::size_t> out) const {
  if (out.size() < vs.size()) throw RangeError("output span shorter than input");
  const auto& s = *store_;
  const auto& nodes = s.nodes;
  // Walk up to kLanes leaves in lockstep; the chains are independent, so
  // their cache misses overlap.
  constexpr std::size_t kLanes = 4;
  for (std::size_t base = 0; base < vs.size(); base += kLanes) {
    const std::size_t m = std::min(kLanes, vs.size() - base);
    std::int32_t t[kLanes], p[kLanes];
    std::size_t pos[kLanes];
    for (std::size_t q = 0; q < m; ++q) {
      std::int32_t v = vs[base + q];
      t[q] = root_ < 0 || v < 0 ? -1 : s.leaf_id(v);
      if (t[q] < 0) throw LookupError("element " + std::to_string(v) + " not in tree");
      p[q] = nodes[t[q]].parent;
      pos[q] = 1;
    }
    for (bool active = true; active;) {
      active = false;
      for (std::size_t q = 0; q < m; ++q) {
        if (p[q] < 0) continue;
        const auto& np = nodes[p[q]];
        if (np.right == t[q]) pos[q] += np.size - nodes[t[q]].size;
        t[q] = p[q];
        p[q] = np.parent;
        active = true;
      }
    }
    for (std::size_t q = 0; q < m; ++q) {
      if (t[q] != root_) throw LookupError("element " + std::to_string(vs[base + q]) + " not in tree");
      out[base + q] = pos[q];
    }
  }
}

std::int32_t PermTree::element_at(std::size_t p) const {
  if (p < 1 || p > size())
    throw LookupError("position " + std::to_string(p) + " outside 1.." + std::to_string(size()));
  const auto& nodes = store_->nodes;
  std::int32_t t = root_;
  while (nodes[t].left >= 0) {
    std::size_t ls = nodes[nodes[t].left].size;
    if (p <= ls) {
      t = nodes[t].left;
    } else {
      p -= ls;
      t = nodes[t].right;
    }
  }
  return nodes[t].max;
}

PermTree::MoveTrace PermTree::apply_transposition(std::size_t i, std::size_t j, std::size_t k) {
  if (!(1 <= i && i < j && j < k && k <= size() + 1))
    throw RangeError("transposition cut points (" + std::to_string(i) + "," + std::to_string(j) +
                     "," + std::to_string(k) + ") invalid for size " + std::to_string(size()));
  NodeStore& s = *store_;
  auto [t1, rest] = s.split(root_, static_cast<std::int32_t>(i - 1));
  auto [t2, rest2] = s.split(rest, static_cast<std::int32_t>(j - i));
  auto [t3, t4] = s.split(rest2, static_cast<std::int32_t>(k - j));
  auto tags = [&](std::int32_t t) { return t < 0 ? std::size_t{0} : std::size_t(s.nodes[t].tags); };
  // The split just walked these left spines, so they are cheap to reread.
  auto head = [&](std::int32_t t) {
    if (t < 0) return std::int32_t{-1};
    while (s.nodes[t].left >= 0) t = s.nodes[t].left;
    return s.nodes[t].max;
  };
  MoveTrace out;
  out.tagged_before = {tags(t1), 0, 0};
  out.tagged_before[1] = out.tagged_before[0] + tags(t2);
  out.tagged_before[2] = out.tagged_before[1] + tags(t3);
  out.heads = {head(t2), head(t3), head(t4)};
  root_ = s.join(s.join(s.join(t1, t3), t2), t4);
  s.nodes[root_].parent = -1;
  return out;
}

std::vector<std::int32_t> PermTree::to_sequence() const {
  std::vector<std::int32_t> out;
  out.reserve(size());
  store_->collect(root_, out, nullptr);
  return out;
}

namespace {

void dump_node(const NodeStore& s, std::int32_t t, std::string& out) {
  const auto& n = s.nodes[t];
  if (n.left < 0) {
    out += '(' + std::to_string(n.max) + ')';
    return;
  }
  if (s.is_leaf(n.left) && s.is_leaf(n.right)) {
    out += '(' + std::to_string(s.nodes[n.left].max) + ' ' + std::to_string(s.nodes[n.right].max) +
           ')';
    return;
  }
  out += '(';
  dump_node(s, n.left, out);
  dump_node(s, n.right, out);
  out += ')';
}

}  // namespace

std::string PermTree::dump() const {
  if (root_ < 0) return "()";
  std::string out;
  dump_node(*store_, root_, out);
  return out;
}

void PermTree::set_flag(std::int32_t v, bool on) {
  std::int32_t t = leaf_in_tree(v);
  auto& nodes = store_->nodes;
  std::int32_t delta = (on ? 1 : 0) - nodes[t].flags;
  if (delta == 0) return;
  for (; t >= 0; t = nodes[t].parent) nodes[t].flags += delta;
}

void PermTree::set_tag(std::int32_t v, bool on) {
  std::int32_t t = leaf_in_tree(v);
  auto& nodes = store_->nodes;
  std::int32_t delta = (on ? 1 : 0) - nodes[t].tags;
  if (delta == 0) return;
  for (; t >= 0; t = nodes[t].parent) nodes[t].tags += delta;
}

void PermTree::set_counter(std::span<const std::int32_t> values, bool on, bool tags) {
  auto& nodes = store_->nodes;
  auto field = tags ? &detail::Node::tags : &detail::Node::flags;
  // Few values: walk each leaf up. Many: write the leaves, then one O(n) recount.
  if (values.size() * static_cast<std::size_t>(height() + 1) < size()) {
    // Lockstep walks, as in positions_of. The leaf is written first, so a
    // repeated value sees delta 0 on its second visit.
    constexpr std::size_t kLanes = 4;
    for (std::size_t base = 0; base < values.size(); base += kLanes) {
      const std::size_t m = std::min(kLanes, values.size() - base);
      std::int32_t t[kLanes], delta[kLanes];
      for (std::size_t q = 0; q < m; ++q) {
        t[q] = leaf_in_tree(values[base + q]);
        delta[q] = (on ? 1 : 0) - nodes[t[q]].*field;
        nodes[t[q]].*field = on ? 1 : 0;
        if (delta[q] == 0) t[q] = -1;
        else t[q] = nodes[t[q]].parent;
      }
      for (bool active = true; active;) {
        active = false;
        for (std::size_t q = 0; q < m; ++q) {
          if (t[q] < 0) continue;
          nodes[t[q]].*field += delta[q];
          t[q] = nodes[t[q]].parent;
          active = true;
        }
      }
    }
    return;
  }
  for (auto v : values) nodes[leaf_in_tree(v)].*field = on ? 1 : 0;
  std::vector<std::pair<std::int32_t, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    detail::Node& n = nodes[t];
    if (n.left < 0) continue;
    if (expanded) {
      n.*field = nodes[n.left].*field + nodes[n.right].*field;
      continue;
    }
    stack.push_back({t, true});
    stack.push_back({n.right, false});
    stack.push_back({n.left, false});
  }
}

void PermTree::set_flags(std::span<const std::int32_t> values, bool on) {
  if (root_ >= 0) set_counter(values, on, false);
}

void PermTree::set_tags(std::span<const std::int32_t> values, bool on) {
  if (root_ >= 0) set_counter(values, on, true);
}

bool PermTree::tag(std::int32_t v) const { return store_->nodes[leaf_in_tree(v)].tags != 0; }

std::size_t PermTree::tagged_count() const {
  return root_ < 0 ? 0 : static_cast<std::size_t>(store_->nodes[root_].tags);
}

bool PermTree::flag(std::int32_t v) const { return store_->nodes[leaf_in_tree(v)].flags != 0; }

std::size_t PermTree::flagged_count() const {
  return root_ < 0 ? 0 : static_cast<std::size_t>(store_->nodes[root_].flags);
}

std::optional<std::size_t> PermTree::first_flagged() const {
  if (flagged_count() == 0) return std::nullopt;
  const auto& nodes = store_->nodes;
  std::int32_t t = root_;
  std::size_t pos = 1;
  while (nodes[t].left >= 0) {
    std::int32_t l = nodes[t].left;
    if (nodes[l].flags > 0) {
      t = l;
    } else {
      pos += nodes[l].size;
      t = nodes[t].right;
    }
  }
  return pos;
}

std::optional<std::int32_t> PermTree::first_flagged_value() const { return nth_flagged_value(1); }

std::optional<std::int32_t> PermTree::nth_flagged_value(std::size_t k) const {
  if (k == 0 || flagged_count() < k) return std::nullopt;
  const auto& nodes = store_->nodes;
  std::int32_t t = root_;
  while (nodes[t].left >= 0) {
    std::int32_t l = nodes[t].left;
    std::size_t lf = nodes[l].flags;
    if (k <= lf) {
      t = l;
    } else {
      k -= lf;
      t = nodes[t].right;
    }
  }
  return nodes[t].max;
}

std::size_t PermTree::flagged_prefix(std::size_t p) const {
  if (p > size()) throw RangeError("prefix length " + std::to_string(p) + " beyond size");
  const auto& nodes = store_->nodes;
  std::size_t count = 0;
  std::int32_t t = root_;
  while (p > 0) {
    if (static_cast<std::size_t>(nodes[t].size) == p) return count + nodes[t].flags;
    std::int32_t l = nodes[t].left;
    std::size_t ls = nodes[l].size;
    if (p <= ls) {
      t = l;
    } else {
      count += nodes[l].flags;
      p -= ls;
      t = nodes[t].right;
    }
  }
  return count;
}

std::string PermTree::audit() const {
  if (root_ < 0) return {};
  const NodeStore& s = *store_;
  if (s.nodes[root_].parent != -1) return "root has a parent";
  std::string err;
  // Post-order over an explicit stack; returns on the first violation.
  std::vector<std::pair<std::int32_t, bool>> stack{{root_, false}};
  while (!stack.empty() && err.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    const auto& n = s.nodes[t];
    if (n.left < 0) {
      if (n.right >= 0) err = "leaf with a right child";
      else if (n.height != 0 || n.size != 1) err = "leaf height/size wrong";
      else if (n.flags != 0 && n.flags != 1) err = "leaf flag not 0/1";
      else if (n.tags != 0 && n.tags != 1) err = "leaf tag not 0/1";
      else if (s.leaf_of[n.max] != t) err = "leaf index stale for " + std::to_string(n.max);
      continue;
    }
    if (n.right < 0) {
      err = "internal node with one child";
      continue;
    }
    if (!expanded) {
      stack.push_back({t, true});
      stack.push_back({n.right, false});
      stack.push_back({n.left, false});
      continue;
    }
    const auto& l = s.nodes[n.left];
    const auto& r = s.nodes[n.right];
    if (l.parent != t || r.parent != t) err = "parent link broken";
    else if (n.height != 1 + std::max(l.height, r.height)) err = "height cache wrong";
    else if (std::abs(l.height - r.height) > kBalanceBound) err = "balance bound violated";
    else if (n.size != l.size + r.size) err = "size cache wrong";
    else if (n.max != std::max(l.max, r.max)) err = "max cache wrong";
    else if (n.flags != l.flags + r.flags) err = "flag count wrong";
    else if (n.tags != l.tags + r.tags) err = "tag count wrong";
  }
  return err;
}

}  // namespace sbt
