#include "exact_oracle.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

#include "errors.hpp"

namespace sbt {

namespace {

constexpr char kMagic[4] = {'S', 'B', 'T', '1'};

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t q = 2; q <= n; ++q) f *= q;
  return f;
}

}  // namespace

std::uint64_t rank_permutation(std::span<const std::int32_t> p) {
  const std::size_t n = p.size();
  std::uint64_t r = 0;
  for (std::size_t a = 0; a < n; ++a) {
    std::uint64_t smaller = 0;
    for (std::size_t b = a + 1; b < n; ++b) smaller += p[b] < p[a];
    r = r * (n - a) + smaller;
  }
  return r;
}

std::vector<std::int32_t> unrank_permutation(std::uint64_t rank, std::size_t n) {
  std::vector<std::int32_t> digits(n);
  for (std::size_t a = n; a-- > 0;) {
    std::uint64_t base = n - a;
    digits[a] = static_cast<std::int32_t>(rank % base);
    rank /= base;
  }
  std::vector<std::int32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<std::int32_t> out(n);
  for (std::size_t a = 0; a < n; ++a) {
    out[a] = pool[digits[a]];
    pool.erase(pool.begin() + digits[a]);
  }
  return out;
}

DistanceTable DistanceTable::build(std::size_t n) {
  if (n < 1 || n > kMaxN)
    throw ResourceError("exact distance table limited to 1 <= n <= " + std::to_string(kMaxN));
  DistanceTable t;
  t.n_ = n;
  const std::uint64_t total = factorial(n);
  t.dist_.assign(total, kUnreached);
  std::vector<Transposition> gens;
  for (std::int32_t i = 1; i <= static_cast<std::int32_t>(n); ++i)
    for (std::int32_t j = i + 1; j <= static_cast<std::int32_t>(n); ++j)
      for (std::int32_t k = j + 1; k <= static_cast<std::int32_t>(n) + 1; ++k) gens.push_back({i, j, k});

  // Layer by layer; the generator set is closed under inverses, so distances
  // from the identity equal distances to it.
  std::vector<std::uint32_t> frontier{0};
  t.dist_[0] = 0;
  std::vector<std::int32_t> seq(n), next(n);
  for (std::uint8_t d = 0; !frontier.empty(); ++d) {
    std::vector<std::uint32_t> upcoming;
    for (auto r : frontier) {
      seq = unrank_permutation(r, n);
      for (const auto& g : gens) {
        next = seq;
        std::rotate(next.begin() + (g.i - 1), next.begin() + (g.j - 1), next.begin() + (g.k - 1));
        auto nr = rank_permutation(next);
        if (t.dist_[nr] != kUnreached) continue;
        t.dist_[nr] = static_cast<std::uint8_t>(d + 1);
        upcoming.push_back(static_cast<std::uint32_t>(nr));
      }
    }
    frontier.swap(upcoming);
  }
  return t;
}

std::filesystem::path DistanceTable::cache_file(const std::filesystem::path& dir, std::size_t n) {
  return dir / ("sbt_table_" + std::to_string(n) + ".bin");
}

std::optional<DistanceTable> DistanceTable::load(const std::filesystem::path& file, std::size_t n) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[4];
  std::array<unsigned char, 4> nb{};
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) return std::nullopt;
  if (!in.read(reinterpret_cast<char*>(nb.data()), 4)) return std::nullopt;
  std::uint32_t stored = nb[0] | nb[1] << 8 | nb[2] << 16 | static_cast<std::uint32_t>(nb[3]) << 24;
  if (stored != n || n < 1 || n > kMaxN) return std::nullopt;
  DistanceTable t;
  t.n_ = n;
  t.dist_.resize(factorial(n));
  if (!in.read(reinterpret_cast<char*>(t.dist_.data()), static_cast<std::streamsize>(t.dist_.size())))
    return std::nullopt;
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  if (t.dist_[0] != 0) return std::nullopt;
  return t;
}

bool DistanceTable::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  const auto n = static_cast<std::uint32_t>(n_);
  const unsigned char nb[4] = {static_cast<unsigned char>(n), static_cast<unsigned char>(n >> 8),
                               static_cast<unsigned char>(n >> 16), static_cast<unsigned char>(n >> 24)};
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(nb), 4);
  out.write(reinterpret_cast<const char*>(dist_.data()), static_cast<std::streamsize>(dist_.size()));
  return static_cast<bool>(out);
}

DistanceTable DistanceTable::load_or_build(std::size_t n, const std::filesystem::path& dir) {
  auto file = cache_file(dir, n);
  if (auto t = load(file, n)) return std::move(*t);
  auto t = build(n);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  t.save(file);
  return t;
}

int DistanceTable::distance(const Permutation& p) const {
  if (p.size() != n_)
    throw RangeError("table holds size " + std::to_string(n_) + ", permutation has size " + std::to_string(p.size()));
  return dist_[rank_permutation(p.elems())];
}

int DistanceTable::distance_of_rank(std::uint64_t rank) const {
  if (rank >= dist_.size()) throw RangeError("rank outside the table");
  return dist_[rank];
}

int DistanceTable::max_distance() const {
  int m = 0;
  for (auto d : dist_) m = std::max<int>(m, d);
  return m;
}

std::vector<std::uint64_t> DistanceTable::histogram() const {
  std::vector<std::uint64_t> h(max_distance() + 1, 0);
  for (auto d : dist_) ++h[d];
  return h;
}

int exact_distance(const Permutation& p) {
  if (p.size() <= 1) return 0;
  if (p.size() > DistanceTable::kMaxN)
    throw ResourceError("exact distance limited to n <= " + std::to_string(DistanceTable::kMaxN));
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const DistanceTable>> tables;
  std::shared_ptr<const DistanceTable> table;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = tables[p.size()];
    if (!slot) {
      const char* dir = std::getenv("SBT_TABLE_CACHE");
      slot = std::make_shared<const DistanceTable>(dir && *dir ? DistanceTable::load_or_build(p.size(), dir)
                                                               : DistanceTable::build(p.size()));
    }
    table = slot;
  }
  return table->distance(p);
}

bool verify_sequence(const Permutation& p, std::span<const Transposition> moves) {
  std::vector<std::int32_t> seq(p.elems().begin(), p.elems().end());
  for (const auto& t : moves) {
    if (!is_valid_transposition(t, seq.size())) return false;
    std::rotate(seq.begin() + (t.i - 1), seq.begin() + (t.j - 1), seq.begin() + (t.k - 1));
  }
  for (std::size_t q = 0; q < seq.size(); ++q)
    if (seq[q] != static_cast<std::int32_t>(q)) return false;
  return true;
}

}  // namespace sbt
