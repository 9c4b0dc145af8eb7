// Acceptance runner: one PASS/FAIL line per criterion.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "breakpoint_graph.hpp"
#include "eh_engine.hpp"
#include "exact_oracle.hpp"
#include "oracles.hpp"
#include "permutation_tree.hpp"
#include "sequence_search.hpp"
#include "simplifier.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Context {
  std::string sbt;
  std::filesystem::path work_dir;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool replay_sorts(const oracle::Seq& p, const std::vector<sbt::Transposition>& moves) {
  return p.size() <= 2000 ? oracle::sorts(p, moves) : oracle::treap_sorts(p, moves);
}

template <class F>
void for_each_permutation(std::size_t n, F f) {
  std::vector<std::int32_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do f(p);
  while (std::next_permutation(p.begin(), p.end()));
}

Outcome sorting_correctness(const Context&) {
  std::int64_t cases = 0, bad = 0;
  for_each_permutation(8, [&](const std::vector<std::int32_t>& p) {
    auto rep = sbt::sort(sbt::Permutation(p), {.timing = false});
    ++cases;
    bad += !oracle::sorts(p, rep.moves);
  });
  for (std::size_t n : {50, 500, 5000, 50000}) {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1000 + n);
    for (int r = 0; r < 10000; ++r) {
      auto p = oracle::random_permutation(n, rng);
      auto rep = sbt::sort(sbt::Permutation(p), {.timing = false});
      ++cases;
      bad += !replay_sorts(p, rep.moves);
    }
    std::cerr << "  n=" << n << " done in " << seconds_since(t0) << " s\n";
  }
  std::ostringstream d;
  d << cases << " inputs, " << bad << " not sorted";
  return {bad == 0, d.str()};
}

Outcome approximation_quality(const Context&) {
  std::int64_t total = 0, within = 0, low = 0, high = 0;
  double worst = 1.0;
  std::string worst_perm;
  for (std::size_t n = 1; n <= 8; ++n) {
    auto table = sbt::DistanceTable::build(n);
    for (std::uint64_t r = 0; r < table.states(); ++r) {
      auto p = sbt::unrank_permutation(r, n);
      auto rep = sbt::sort(sbt::Permutation(p), {.timing = false});
      auto m = static_cast<std::int64_t>(rep.moves.size());
      int d = table.distance_of_rank(r);
      ++total;
      low += m < d;
      high += 2 * m > 3 * d;
      within += 8 * m <= 11 * d;
      if (d > 0 && static_cast<double>(m) / d > worst) {
        worst = static_cast<double>(m) / d;
        worst_perm = sbt::Permutation(p).to_one_based_string();
      }
    }
  }
  std::ostringstream d;
  d << total << " permutations n<=8, below exact " << low << ", above 1.5x " << high << ", within 1.375x "
    << within << " (" << 100.0 * within / total << "%), worst ratio " << worst;
  if (!worst_perm.empty()) d << " at [" << worst_perm << "]";
  return {low == 0 && high == 0, d.str()};
}

Outcome query_property(const Context&) {
  std::mt19937_64 rng(3);
  std::int64_t done = 0, bad = 0, disagree = 0;
  while (done < 10000) {
    std::size_t n = 5 + rng() % 300;
    auto m = sbt::simplify(sbt::Permutation(oracle::random_permutation(n, rng)));
    const auto& ext = m.padded;
    auto oc = oracle::cycles_of(ext);
    std::vector<std::size_t> eligible;
    for (std::size_t c = 0; c < oc.cycles.size(); ++c) {
      const auto& cy = oc.cycles[c];
      if (cy.size() == 2 || (cy.size() == 3 && !oracle::oriented(ext, cy))) eligible.push_back(c);
    }
    if (eligible.empty()) continue;
    const auto& cy = oc.cycles[eligible[rng() % eligible.size()]];
    std::size_t a = rng() % cy.size(), b = rng() % (cy.size() - 1);
    if (b >= a) ++b;
    sbt::GraphState g(ext);
    auto ea = ext[cy[a]], eb = ext[cy[b]];
    if (g.is_oriented(g.cycle_of(ea))) {
      ++disagree;
      ++done;
      continue;
    }
    auto [x, y] = g.query_intersecting_pair(ea, eb);
    auto ix = g.edge_index(x), iy = g.edge_index(y);
    bool same = oc.cycle_of[ix] == oc.cycle_of[iy];
    bool cross = ix != iy && oracle::alternate(cy[a], cy[b], ix, iy, static_cast<std::int32_t>(ext.size()));
    bad += !(same && cross);
    ++done;
  }
  std::ostringstream d;
  d << done << " queries on random simple permutations, " << bad << " violations, " << disagree
    << " orientation disagreements";
  return {bad == 0 && disagree == 0, d.str()};
}

Outcome tree_equivalence(const Context&) {
  std::mt19937_64 rng(4);
  const std::size_t n = 10000;
  auto arr = oracle::random_permutation(n, rng);
  auto tree = sbt::PermTree::build(arr);
  std::int64_t mismatches = 0, audit_failures = 0, ops = 0;
  std::map<std::string, std::int64_t> counts;
  auto height_ok = [](const sbt::PermTree& t) {
    return t.size() < 2 || t.height() <= 1.4405 * std::log2(static_cast<double>(t.size()) + 2.0);
  };
  for (; ops < 100000; ++ops) {
    int kind = static_cast<int>(rng() % 4);
    if (kind == 0 && rng() % 50 == 0) {
      arr = oracle::random_permutation(n, rng);
      tree = sbt::PermTree::build(arr);
      ++counts["build"];
    } else if (kind == 0 || kind == 1) {
      std::size_t m = rng() % (n + 1);
      auto [a, b] = sbt::PermTree::split(std::move(tree), m);
      auto sa = a.to_sequence(), sb = b.to_sequence();
      if (!std::equal(sa.begin(), sa.end(), arr.begin()) || !std::equal(sb.begin(), sb.end(), arr.begin() + m) ||
          sa.size() != m || sb.size() != n - m)
        ++mismatches;
      if (!a.audit().empty() || !b.audit().empty() || !height_ok(a) || !height_ok(b)) ++audit_failures;
      tree = sbt::PermTree::join(std::move(a), std::move(b));
      ++counts["split/join"];
    } else if (kind == 2) {
      for (int q = 0; q < 4; ++q) {
        std::size_t i = 1 + rng() % n, j = 1 + rng() % n;
        if (i > j) std::swap(i, j);
        auto it = std::max_element(arr.begin() + (i - 1), arr.begin() + j);
        auto got = tree.range_max(i, j);
        if (got.first != *it || got.second != static_cast<std::size_t>(it - arr.begin()) + 1) ++mismatches;
        std::size_t p = 1 + rng() % n;
        if (tree.element_at(p) != arr[p - 1] || tree.position_of(arr[p - 1]) != p) ++mismatches;
      }
      ++counts["range_max"];
    } else {
      std::int32_t c[3];
      do {
        for (auto& x : c) x = 1 + static_cast<std::int32_t>(rng() % (n + 1));
        std::sort(c, c + 3);
      } while (c[0] == c[1] || c[1] == c[2]);
      tree.apply_transposition(c[0], c[1], c[2]);
      oracle::apply(arr, {c[0], c[1], c[2]});
      ++counts["apply_transposition"];
    }
    if (tree.to_sequence() != arr) ++mismatches;
    if (!tree.audit().empty() || !height_ok(tree)) ++audit_failures;
  }
  std::ostringstream d;
  d << ops << " operations on n=" << n << " (";
  bool first = true;
  for (const auto& [k, v] : counts) d << (first ? "" : ", ") << k << " " << v, first = false;
  d << "), " << mismatches << " mismatches, " << audit_failures << " audit failures";
  return {mismatches == 0 && audit_failures == 0, d.str()};
}

Outcome detector_agreement(const Context&) {
  std::int64_t checked = 0, fp = 0, fn = 0, unsound = 0;
  std::map<char, std::int64_t> sub;
  for (std::size_t n = 1; n <= 7; ++n)
    for_each_permutation(n, [&](const std::vector<std::int32_t>& p) {
      auto ext = oracle::extend(p);
      if (!oracle::simple(ext)) return;
      sbt::GraphState g(ext);
      sbt::Step2Trace trace;
      auto seq = sbt::find_22_sequence(g, &trace);
      bool expect = oracle::has_22(ext);
      ++checked;
      ++sub[trace.sub_step];
      if (seq && !expect) ++fp;
      if (!seq && expect) ++fn;
      if (seq) {
        auto cur = ext;
        int twos = 0;
        bool ok = seq->size() == 2 && seq->two_move_count == 2;
        for (const auto& t : seq->moves) {
          if (!oracle::valid(t, cur.size() - 1)) {
            ok = false;
            break;
          }
          twos += oracle::delta(cur, t) == 2;
          oracle::Seq body(cur.begin() + 1, cur.end());
          oracle::apply(body, t);
          std::copy(body.begin(), body.end(), cur.begin() + 1);
        }
        if (!ok || twos != 2 || !oracle::simple(cur)) ++unsound;
      }
    });
  std::ostringstream d;
  d << checked << " simple permutations n<=7, false positives " << fp << ", false negatives " << fn
    << ", invalid sequences " << unsound << ", sub-steps";
  for (const auto& [k, v] : sub) d << ' ' << k << '=' << v;
  return {fp == 0 && fn == 0 && unsound == 0, d.str()};
}

Outcome phase_postconditions(const Context&) {
  std::int64_t runs = 0, odd = 0, not_three = 0, too_many = 0, unsorted = 0;
  std::int64_t max_iter_ratio_num = 0, max_iter_n = 1;
  for (std::size_t n : {100, 1000, 10000}) {
    std::mt19937_64 rng(6000 + n);
    for (int r = 0; r < 1000; ++r) {
      auto p = oracle::random_permutation(n, rng);
      auto rep = sbt::sort(sbt::Permutation(p), {.timing = false, .audit_phases = true});
      ++runs;
      odd += rep.stats.two_cycles_before_step3 % 2 != 0;
      not_three += !rep.stats.three_permutation_after_step3;
      too_many += rep.stats.main_loop_iterations > static_cast<std::int64_t>(n);
      unsorted += !replay_sorts(p, rep.moves);
      if (rep.stats.main_loop_iterations * max_iter_n > max_iter_ratio_num * static_cast<std::int64_t>(n)) {
        max_iter_ratio_num = rep.stats.main_loop_iterations;
        max_iter_n = static_cast<std::int64_t>(n);
      }
    }
  }
  std::ostringstream d;
  d << runs << " runs, odd 2-cycle counts " << odd << ", not 3-permutation after 2-cycle phase " << not_three
    << ", iterations above n " << too_many << " (max iterations/n " << static_cast<double>(max_iter_ratio_num) / max_iter_n
    << "), unsorted " << unsorted;
  return {odd == 0 && not_three == 0 && too_many == 0 && unsorted == 0, d.str()};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) out.push_back(f);
  return out;
}

Outcome scaling(const Context& ctx) {
  if (ctx.sbt.empty()) return {false, "no --sbt binary given"};
  auto csv = ctx.work_dir / "bench.csv";
  auto err = ctx.work_dir / "bench.err";
  std::string cmd = "\"" + ctx.sbt + "\" bench --min-n 1024 --max-n 1048576 --seeds 5 --budget-seconds 600 --csv \"" +
                    csv.string() + "\" 2> \"" + err.string() + "\"";
  auto t0 = std::chrono::steady_clock::now();
  int rc = std::system(cmd.c_str());
  double elapsed = seconds_since(t0);
  std::ifstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "n,seed,moves,lb,ratio,ns_total,ns_tree,ns_graph")
    return {false, "bench CSV missing or bad header"};
  std::vector<double> xs, ys;
  std::map<double, std::vector<double>> per_n;
  std::int64_t rows = 0, inconsistent = 0;
  while (std::getline(in, line)) {
    auto f = split_csv(line);
    if (f.size() != 8) return {false, "malformed CSV row: " + line};
    double n = std::stod(f[0]), total = std::stod(f[5]), tree = std::stod(f[6]), graph = std::stod(f[7]);
    long moves = std::stol(f[2]), lb = std::stol(f[3]);
    inconsistent += moves < lb || tree + graph != total;
    xs.push_back(std::log(n));
    ys.push_back(std::log(total));
    per_n[n].push_back(total);
    ++rows;
  }
  if (xs.size() < 2) return {false, "too few bench rows"};
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    sxy += (xs[q] - mx) * (ys[q] - my);
    sxx += (xs[q] - mx) * (xs[q] - mx);
  }
  double slope = sxy / sxx;
  std::vector<double> ratios;
  double prev = 0;
  for (const auto& [n, v] : per_n) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    if (prev > 0) ratios.push_back(mean / prev);
    prev = mean;
  }
  std::sort(ratios.begin(), ratios.end());
  std::size_t h = ratios.size() / 2;
  double median = ratios.empty() ? 0 : ratios.size() % 2 ? ratios[h] : (ratios[h - 1] + ratios[h]) / 2;
  bool complete = rc == 0 && per_n.size() == 11 && rows == 55;
  std::ostringstream d;
  d << rows << " rows over " << per_n.size() << " sizes, slope " << slope << ", median doubling ratio " << median
    << ", bench " << elapsed << " s" << (complete ? "" : ", bench incomplete (see bench.err)");
  return {complete && inconsistent == 0 && slope <= 1.2 && median <= 2.6, d.str()};
}

Outcome simplification(const Context&) {
  std::mt19937_64 rng(8);
  std::int64_t runs = 0, not_simple = 0, bad_unpad = 0, unsorted = 0, longer = 0;
  std::size_t largest = 0;
  for (int r = 0; r < 1000; ++r) {
    // Log-uniform sizes from 10 to 10^5, plus the top size itself.
    std::size_t n = r == 0 ? 100000 : static_cast<std::size_t>(std::pow(10.0, 1.0 + 4.0 * (rng() % 10001) / 10000.0));
    largest = std::max(largest, n);
    auto p = oracle::random_permutation(n, rng);
    auto m = sbt::simplify(sbt::Permutation(p));
    ++runs;
    not_simple += !oracle::simple(m.padded);
    bad_unpad += m.unpad() != m.original;
    std::vector<std::int32_t> body;
    for (std::size_t q = 1; q < m.padded.size(); ++q) body.push_back(m.padded[q] - 1);
    auto rep = sbt::sort(sbt::Permutation(body), {.timing = false});
    auto moves = sbt::mimic(m, rep.moves);
    unsorted += !replay_sorts(p, moves);
    longer += moves.size() > rep.moves.size();
  }
  std::ostringstream d;
  d << runs << " permutations up to n=" << largest << ", non-simple results " << not_simple << ", unpad mismatches "
    << bad_unpad << ", mimic unsorted " << unsorted << ", mimic longer " << longer;
  return {not_simple == 0 && bad_unpad == 0 && unsorted == 0 && longer == 0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for the transposition sorter"};
  int criterion = 0;
  Context ctx;
  std::string work = ".";
  app.add_option("--criterion", criterion, "Criterion to run (0 = all)")->check(CLI::Range(0, 8));
  app.add_option("--sbt", ctx.sbt, "Path to the sbt command line tool");
  app.add_option("--work-dir", work, "Directory for scratch files");
  CLI11_PARSE(app, argc, argv);
  ctx.work_dir = work;
  std::filesystem::create_directories(ctx.work_dir);

  const std::vector<std::pair<const char*, std::function<Outcome(const Context&)>>> all{
      {"sorting correctness", sorting_correctness},
      {"approximation quality", approximation_quality},
      {"intersecting pair query", query_property},
      {"tree against array", tree_equivalence},
      {"(2,2) detector", detector_agreement},
      {"phase postconditions", phase_postconditions},
      {"scaling", scaling},
      {"simplification", simplification},
  };
  bool ok = true;
  for (int c = 1; c <= 8; ++c) {
    if (criterion != 0 && criterion != c) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = all[c - 1].second(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %s: %s (%s) [%.1f s]\n", c, all[c - 1].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
