#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tsw {

// Outcome of one randomized or exhaustive check. `digest` hashes every value
// the suite computed (never timings), so two runs with the same seed can be
// compared byte for byte.
struct SuiteResult {
  std::string name;
  bool pass = false;
  std::string summary;         // one line, human readable
  std::string digest;          // fnv1a64 hex
  std::string counterexample;  // JSON of the first failure, empty on pass
  double seconds = 0.0;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  int trials = 0;  // 0 = suite default
  int threads = 1;
};

// Tree-Wasserstein closed form vs. exact OT on tree-metric costs; random
// partition and clustering trees with at most 32 nodes. Default 200 trials.
SuiteResult run_oracle_suite(const SuiteOptions& opt);
// Negative definiteness of TSW matrices (families of 10 measures, n_s in
// {1, 4, 10}) and failure on a non-ND 3x3 control. Default 100 families.
SuiteResult run_nd_suite(const SuiteOptions& opt);
// Positive semidefiniteness of exp(-t D) for t in {0.1, 1, 10} on the same
// matrices, and the entrywise power identity. Default 100 families.
SuiteResult run_psd_suite(const SuiteOptions& opt);
// W2 <= TW/2 + beta sqrt(d) / 2^H and the per-level unmatched-count identity.
// Default 100 cloud pairs.
SuiteResult run_bound_suite(const SuiteOptions& opt);
// Chain-tree TW vs. the sorted 1-D formula. Default 100 instances.
SuiteResult run_chain_suite(const SuiteOptions& opt);
// Farthest-point clustering radius <= 2 x optimum on every subset of a 4x3
// grid with at most 8 points, kappa <= 3, every first center.
SuiteResult run_cluster_suite(const SuiteOptions& opt);
// The seven-point partition tree: 10 nodes, 9 edges, deepest level 3.
SuiteResult run_golden_suite(const SuiteOptions& opt);
// Mean W2 rank of the TSW nearest neighbor on a 250-cloud orbit dataset
// (50 points per cloud): rank at 12 slices <= rank at 1 slice + 0.5.
SuiteResult run_rank_suite(const SuiteOptions& opt);
// TSW (10 slices, prebuilt ensemble) vs. exact OT between two 1000-support
// measures, median of 5 timings each; passes at a speedup of 10 or more.
SuiteResult run_perf_suite(const SuiteOptions& opt);

// Names accepted by run_suite, in execution order of "all". "all" runs every
// suite except perf.
const std::vector<std::string>& suite_names();
std::vector<SuiteResult> run_suite(std::string_view name, const SuiteOptions& opt);

}  // namespace tsw
