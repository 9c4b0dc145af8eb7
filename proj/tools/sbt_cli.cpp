// Command-line front end over the C API: sort, verify, distance, bench.
#include <algorithm>
#include <chrono>
#include <cerrno>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbt/sbt.h"

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitBudget = 3;

struct SorterDeleter {
  void operator()(sbt_sorter* s) const { sbt_sorter_destroy(s); }
};
struct ResultDeleter {
  void operator()(sbt_result* r) const { sbt_result_destroy(r); }
};
struct OracleDeleter {
  void operator()(sbt_oracle* o) const { sbt_oracle_destroy(o); }
};
using SorterPtr = std::unique_ptr<sbt_sorter, SorterDeleter>;
using ResultPtr = std::unique_ptr<sbt_result, ResultDeleter>;
using OraclePtr = std::unique_ptr<sbt_oracle, OracleDeleter>;

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

// Whitespace-separated integers; false on anything else.
bool parse_ints(const std::string& line, std::vector<int32_t>& out) {
  out.clear();
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(tok.c_str(), &end, 10);
    if (*end != '\0' || errno != 0 || v < INT32_MIN || v > INT32_MAX) return false;
    out.push_back(static_cast<int32_t>(v));
  }
  return true;
}

std::string fmt_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", r);
  return buf;
}

std::string error_text(sbt_status s) {
  std::string msg = sbt_last_error();
  return msg.empty() ? sbt_status_string(s) : msg;
}

SorterPtr make_sorter(int depth, bool timing) {
  sbt_sorter* raw = nullptr;
  if (sbt_sorter_create(&raw) != SBT_OK) throw std::runtime_error("cannot create sorter");
  SorterPtr s(raw);
  if (auto st = sbt_sorter_set_search_depth(raw, depth); st != SBT_OK) throw std::runtime_error(error_text(st));
  sbt_sorter_set_timing(raw, timing ? 1 : 0);
  return s;
}

std::istream& open_input(const std::string& path, std::ifstream& file) {
  if (path.empty() || path == "-") return std::cin;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return file;
}

int cmd_sort(std::istream& in, int depth, bool echo) {
  auto sorter = make_sorter(depth, false);
  std::string line;
  std::vector<int32_t> perm;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (!parse_ints(line, perm)) {
      std::cerr << "line " << lineno << ": expected whitespace-separated integers\n";
      return kExitBadInput;
    }
    sbt_result* raw = nullptr;
    if (auto st = sbt_sort(sorter.get(), perm.data(), perm.size(), &raw); st != SBT_OK) {
      std::cerr << "line " << lineno << ": " << error_text(st) << "\n";
      return kExitBadInput;
    }
    ResultPtr res(raw);
    if (echo) {
      for (std::size_t q = 0; q < perm.size(); ++q) std::cout << (q ? " " : "") << perm[q];
      std::cout << "\n";
    }
    const std::size_t m = sbt_result_move_count(res.get());
    for (std::size_t q = 0; q < m; ++q) {
      int32_t i, j, k;
      sbt_result_move(res.get(), q, &i, &j, &k);
      std::cout << "t " << i << ' ' << j << ' ' << k << '\n';
    }
    std::cout << "moves=" << m << " lb=" << sbt_result_lower_bound(res.get())
              << " ratio=" << fmt_ratio(sbt_result_ratio(res.get())) << '\n';
  }
  return 0;
}

// Blocks of: permutation line, "t i j k" lines, optional "moves=..." line.
int cmd_verify(std::istream& in) {
  struct Block {
    std::vector<int32_t> perm;
    std::vector<int32_t> moves;
    std::optional<long> claimed;
    std::size_t line = 0;
  };
  std::vector<Block> blocks;
  std::string line;
  std::size_t lineno = 0;
  std::vector<int32_t> nums;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto start = line.find_first_not_of(" \t");
    if (line.compare(start, 2, "t ") == 0) {
      if (blocks.empty() || !parse_ints(line.substr(start + 2), nums) || nums.size() != 3) {
        std::cerr << "line " << lineno << ": malformed move line\n";
        return kExitBadInput;
      }
      blocks.back().moves.insert(blocks.back().moves.end(), nums.begin(), nums.end());
    } else if (line.compare(start, 6, "moves=") == 0) {
      if (blocks.empty()) {
        std::cerr << "line " << lineno << ": summary before any permutation\n";
        return kExitBadInput;
      }
      blocks.back().claimed = std::strtol(line.c_str() + start + 6, nullptr, 10);
    } else {
      if (!parse_ints(line, nums)) {
        std::cerr << "line " << lineno << ": malformed permutation line\n";
        return kExitBadInput;
      }
      blocks.push_back({nums, {}, std::nullopt, lineno});
    }
  }
  bool all_ok = true;
  for (const auto& b : blocks) {
    int sorted = 0;
    const std::size_t count = b.moves.size() / 3;
    auto st = sbt_verify(b.perm.data(), b.perm.size(), b.moves.data(), count, &sorted);
    if (st != SBT_OK) {
      std::cout << "line " << b.line << ": invalid (" << error_text(st) << ")\n";
      all_ok = false;
      continue;
    }
    bool count_ok = !b.claimed || *b.claimed == static_cast<long>(count);
    std::cout << "line " << b.line << ": " << (sorted && count_ok ? "sorted" : sorted ? "sorted, move count mismatch" : "not sorted")
              << " moves=" << count << '\n';
    all_ok &= sorted && count_ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_distance(std::istream& in, int depth) {
  auto sorter = make_sorter(depth, false);
  const char* cache = std::getenv("SBT_TABLE_CACHE");
  std::map<std::size_t, OraclePtr> oracles;
  std::string line;
  std::vector<int32_t> perm;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    if (!parse_ints(line, perm)) {
      std::cerr << "line " << lineno << ": expected whitespace-separated integers\n";
      return kExitBadInput;
    }
    int32_t lb = 0;
    if (auto st = sbt_lower_bound(perm.data(), perm.size(), &lb); st != SBT_OK) {
      std::cerr << "line " << lineno << ": " << error_text(st) << "\n";
      return kExitBadInput;
    }
    std::string exact = "NA";
    if (perm.size() >= 1 && perm.size() <= sbt_oracle_max_n()) {
      auto& o = oracles[perm.size()];
      if (!o) {
        sbt_oracle* raw = nullptr;
        if (auto st = sbt_oracle_create(perm.size(), cache && *cache ? cache : nullptr, &raw); st != SBT_OK) {
          std::cerr << error_text(st) << "\n";
          return 1;
        }
        o.reset(raw);
      }
      int32_t d = 0;
      sbt_oracle_distance(o.get(), perm.data(), perm.size(), &d);
      exact = std::to_string(d);
    }
    sbt_result* raw = nullptr;
    if (auto st = sbt_sort(sorter.get(), perm.data(), perm.size(), &raw); st != SBT_OK) {
      std::cerr << "line " << lineno << ": " << error_text(st) << "\n";
      return kExitBadInput;
    }
    ResultPtr res(raw);
    std::cout << "n=" << perm.size() << " lb=" << lb << " exact=" << exact
              << " eh=" << sbt_result_move_count(res.get()) << '\n';
  }
  return 0;
}

struct BenchOptions {
  std::size_t min_n = 1024;
  std::size_t max_n = std::size_t{1} << 20;
  int seeds = 5;
  double budget_seconds = 600;
  std::string csv;
  int depth = 4;
};

std::vector<int32_t> random_permutation(std::size_t n, int seed) {
  std::vector<int32_t> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed) * 0x9e3779b97f4a7c15ULL + n);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

int cmd_bench(const BenchOptions& opt) {
  if (opt.min_n < 2 || opt.max_n < opt.min_n || opt.seeds < 1) {
    std::cerr << "bench: need 2 <= min-n <= max-n and seeds >= 1\n";
    return kExitBadInput;
  }
  auto sorter = make_sorter(opt.depth, true);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!opt.csv.empty() && opt.csv != "-") {
    file.open(opt.csv);
    if (!file) {
      std::cerr << "bench: cannot write " << opt.csv << "\n";
      return 1;
    }
    out = &file;
  }
  *out << "n,seed,moves,lb,ratio,ns_total,ns_tree,ns_graph\n";
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  std::vector<double> xs, ys;
  std::map<std::size_t, double> mean_ns;
  double last_cell = 0;
  std::size_t last_n = 0;
  int status = 0;
  for (std::size_t n = opt.min_n; n <= opt.max_n; n *= 2) {
    if (last_n) {
      double scale = static_cast<double>(n) / last_n;
      double projected = last_cell * scale * 1.1 * opt.seeds;
      if (elapsed() + projected > opt.budget_seconds) {
        std::cerr << "bench: budget of " << opt.budget_seconds << " s would be exceeded at n=" << n
                  << " (projected " << projected << " s more); skipping n >= " << n << "\n";
        status = kExitBudget;
        break;
      }
    }
    double sum = 0;
    for (int seed = 1; seed <= opt.seeds; ++seed) {
      auto perm = random_permutation(n, seed);
      auto t0 = std::chrono::steady_clock::now();
      sbt_result* raw = nullptr;
      if (auto st = sbt_sort(sorter.get(), perm.data(), perm.size(), &raw); st != SBT_OK) {
        std::cerr << "bench: n=" << n << " seed=" << seed << ": " << error_text(st) << "\n";
        return 1;
      }
      ResultPtr res(raw);
      double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const int64_t total = sbt_result_phase_ns(res.get(), SBT_PHASE_TOTAL);
      const int64_t tree = sbt_result_phase_ns(res.get(), SBT_PHASE_TREE);
      *out << n << ',' << seed << ',' << sbt_result_move_count(res.get()) << ',' << sbt_result_lower_bound(res.get())
           << ',' << fmt_ratio(sbt_result_ratio(res.get())) << ',' << total << ',' << tree << ',' << total - tree
           << '\n';
      out->flush();
      xs.push_back(std::log(static_cast<double>(n)));
      ys.push_back(std::log(static_cast<double>(std::max<int64_t>(total, 1))));
      sum += static_cast<double>(total);
      last_cell = wall;
    }
    mean_ns[n] = sum / opt.seeds;
    last_n = n;
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      sxy += (xs[q] - mx) * (ys[q] - my);
      sxx += (xs[q] - mx) * (xs[q] - mx);
    }
    std::vector<double> ratios;
    for (auto it = mean_ns.begin(); std::next(it) != mean_ns.end(); ++it)
      ratios.push_back(std::next(it)->second / it->second);
    std::cerr << "slope=" << (sxx > 0 ? sxy / sxx : 0.0);
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      std::size_t h = ratios.size() / 2;
      double median = ratios.size() % 2 ? ratios[h] : (ratios[h - 1] + ratios[h]) / 2;
      std::cerr << " median_doubling_ratio=" << median;
    }
    std::cerr << " elapsed_s=" << elapsed() << "\n";
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sorting by transpositions (1.375-approximation on a permutation tree)"};
  app.require_subcommand(1);
  int depth = 4;
  app.add_option("--search-depth", depth, "Longest searched move sequence")->check(CLI::Range(1, 8));

  std::string input;
  bool echo = false;
  auto* sort = app.add_subcommand("sort", "Sort 1-based permutations, one per line");
  sort->add_option("input", input, "Input file (default stdin)");
  sort->add_flag("--echo-input", echo, "Print each permutation before its moves");
  sort->add_option("--search-depth", depth, "Longest searched move sequence")->check(CLI::Range(1, 8));

  auto* verify = app.add_subcommand("verify", "Check permutation/move blocks as printed by sort --echo-input");
  verify->add_option("input", input, "Input file (default stdin)");

  auto* distance = app.add_subcommand("distance", "Lower bound, exact distance (n <= 10) and algorithm length");
  distance->add_option("input", input, "Input file (default stdin)");
  distance->add_option("--search-depth", depth, "Longest searched move sequence")->check(CLI::Range(1, 8));

  BenchOptions bopt;
  auto* bench = app.add_subcommand("bench", "Time random instances for doubling n and write CSV");
  bench->add_option("--min-n", bopt.min_n, "Smallest n");
  bench->add_option("--max-n", bopt.max_n, "Largest n");
  bench->add_option("--seeds", bopt.seeds, "Instances per n");
  bench->add_option("--budget-seconds", bopt.budget_seconds, "Skip sizes projected to exceed this total");
  bench->add_option("--csv", bopt.csv, "Output CSV file (default stdout)");
  bench->add_option("--search-depth", depth, "Longest searched move sequence")->check(CLI::Range(1, 8));

  CLI11_PARSE(app, argc, argv);
  std::ios::sync_with_stdio(false);
  try {
    std::ifstream file;
    if (*sort) return cmd_sort(open_input(input, file), depth, echo);
    if (*verify) return cmd_verify(open_input(input, file));
    if (*distance) return cmd_distance(open_input(input, file), depth);
    if (*bench) {
      bopt.depth = depth;
      return cmd_bench(bopt);
    }
  } catch (const std::exception& e) {
    std::cerr << "sbt: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
