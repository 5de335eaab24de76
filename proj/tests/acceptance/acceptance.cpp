// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Usage: tsw_acceptance [seed]

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "tsw/validation.hpp"

namespace {

struct Criterion {
  int id;
  const char* suite;
  const char* title;
  double max_seconds;  // 0 = no limit
};

const std::vector<Criterion> kCriteria{
    {1, "oracle", "closed form matches exact OT on tree costs", 30},
    {2, "nd", "TSW matrices are negative definite, control fails", 0},
    {3, "psd", "exp(-tD) is PSD and the power identity holds", 0},
    {4, "bound", "matching bound and per-level identity", 0},
    {5, "chain", "chain-tree TW equals the 1-D formula", 0},
    {6, "cluster", "farthest-point clustering within 2x optimum", 60},
    {7, "golden", "seven-point tree has 10 nodes, 9 edges, depth 3", 0},
    {8, "rank", "nearest-neighbour rank at 12 slices <= 1 slice + 0.5", 600},
    {9, "perf", "TSW at least 10x faster than exact OT", 0},
};

tsw::SuiteResult run(const Criterion& c, std::uint64_t seed) {
  tsw::SuiteOptions opt;
  opt.seed = seed;
  opt.threads = 1;
  return tsw::run_suite(c.suite, opt).front();
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20191;
  bool all_pass = true;
  std::vector<std::string> first_digests;

  for (const Criterion& c : kCriteria) {
    const tsw::SuiteResult r = run(c, seed);
    const bool in_time = c.max_seconds <= 0 || r.seconds < c.max_seconds;
    const bool pass = r.pass && in_time;
    all_pass = all_pass && pass;
    first_digests.push_back(r.digest);
    std::printf("%s criterion %d (%s): %s | %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id, c.suite,
                c.title, r.summary.c_str(), r.seconds, in_time ? "" : ", over time limit");
    if (!r.counterexample.empty()) std::cerr << "  counterexample: " << r.counterexample << "\n";
    std::fflush(stdout);
  }

  std::vector<std::string> mismatched;
  for (std::size_t i = 0; i < kCriteria.size(); ++i)
    if (run(kCriteria[i], seed).digest != first_digests[i]) mismatched.push_back(kCriteria[i].suite);
  const bool same = mismatched.empty();
  all_pass = all_pass && same;
  std::string detail = same ? "criteria 1-9 digests identical across two runs" : "digest mismatch:";
  for (const auto& m : mismatched) detail += " " + m;
  std::printf("%s criterion 10 (determinism): %s\n", same ? "PASS" : "FAIL", detail.c_str());

  return all_pass ? 0 : 1;
}
