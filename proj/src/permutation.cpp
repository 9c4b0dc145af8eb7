#include "permutation.hpp"

#include <algorithm>
#include <sstream>

#include "errors.hpp"

namespace sbt {

Permutation::Permutation(std::vector<std::int32_t> elems) : elems_(std::move(elems)) {
  std::vector<char> seen(elems_.size(), 0);
  for (auto v : elems_) {
    if (v < 0 || static_cast<std::size_t>(v) >= elems_.size())
      throw InputError("permutation value " + std::to_string(v) + " outside 0.." +
                       std::to_string(static_cast<long long>(elems_.size()) - 1));
    if (seen[v]) throw InputError("duplicate permutation value " + std::to_string(v));
    seen[v] = 1;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::int32_t> e(n);
  for (std::size_t i = 0; i < n; ++i) e[i] = static_cast<std::int32_t>(i);
  return Permutation(std::move(e));
}

Permutation Permutation::parse_one_based(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::int32_t> e;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw InputError("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) throw InputError("not an integer: '" + tok + "'");
    if (v < 1 || v > (1LL << 30)) throw InputError("value out of range: " + tok);
    e.push_back(static_cast<std::int32_t>(v - 1));
  }
  return Permutation(std::move(e));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < elems_.size(); ++i)
    if (elems_[i] != static_cast<std::int32_t>(i)) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::int32_t> inv(elems_.size());
  for (std::size_t i = 0; i < elems_.size(); ++i) inv[elems_[i]] = static_cast<std::int32_t>(i);
  return Permutation(std::move(inv));
}

std::vector<std::int32_t> Permutation::extended() const {
  std::vector<std::int32_t> ext(elems_.size() + 1);
  ext[0] = 0;
  for (std::size_t i = 0; i < elems_.size(); ++i) ext[i + 1] = elems_[i] + 1;
  return ext;
}

std::string Permutation::to_one_based_string() const {
  std::string s;
  for (std::size_t i = 0; i < elems_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(elems_[i] + 1);
  }
  return s;
}

bool is_valid_transposition(const Transposition& t, std::size_t n) {
  return t.i >= 1 && t.i < t.j && t.j < t.k && static_cast<std::size_t>(t.k) <= n + 1;
}

void apply_to_sequence(std::vector<std::int32_t>& seq, const Transposition& t) {
  if (!is_valid_transposition(t, seq.size()))
    throw RangeError("invalid transposition (" + std::to_string(t.i) + "," + std::to_string(t.j) +
                     "," + std::to_string(t.k) + ") for length " + std::to_string(seq.size()));
  std::rotate(seq.begin() + (t.i - 1), seq.begin() + (t.j - 1), seq.begin() + (t.k - 1));
}

Transposition inverse(const Transposition& t) { return {t.i, t.i + (t.k - t.j), t.k}; }

}  // namespace sbt
