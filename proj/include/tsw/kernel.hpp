#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tsw/random.hpp"

namespace tsw {

// Symmetric n x n matrix of pairwise distances or kernel values.
class GramMatrix {
 public:
  enum class Kind { Distance, Kernel };

  // Throws ValidationError if entries.size() != n*n, any entry is non-finite,
  // or the matrix is asymmetric beyond 1e-9.
  GramMatrix(std::size_t n, std::vector<double> entries, Kind kind = Kind::Distance,
             double bandwidth = 0.0);

  std::size_t size() const { return n_; }
  Kind kind() const { return kind_; }
  double bandwidth() const { return bandwidth_; }  // t; 0 for distances
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  const std::vector<double>& entries() const { return entries_; }

 private:
  std::size_t n_;
  std::vector<double> entries_;
  Kind kind_;
  double bandwidth_;
};

// exp(-t * tsw_value). Throws ValidationError for t <= 0 or tsw_value < 0.
double tsw_kernel(double tsw_value, double t);

// t = 1 / q_s with q_s the nearest-rank s% quantile (1-based index
// ceil(s/100 * n) of the sorted list); t = 1 when s is empty. Throws when the
// list is empty, holds no positive value, or q_s is zero.
double bandwidth_from_quantile(std::span<const double> distances, std::optional<double> s);

// Off-diagonal entries of a distance matrix (upper triangle, row-major), the
// pool the bandwidth quantile is taken over.
std::vector<double> off_diagonal(const GramMatrix& distances);

// Entrywise exp(-t * d). Requires kind Distance and a zero diagonal.
GramMatrix gram(const GramMatrix& distances, double t);

// (exp(-(t/i) d))^i; equals exp(-t d) up to rounding.
double kernel_power(double k_value, int i);
// Entrywise power of a kernel matrix: the bandwidth-t/i Gram raised to i is
// the bandwidth-t Gram.
GramMatrix gram_power(const GramMatrix& kernel, int i);

inline constexpr std::size_t kEigenCheckMaxSize = 2000;

struct NdReport {
  double max_quadratic_form = 0.0;  // max over trials of c^T D c
  double min_centered_eigenvalue = 0.0;  // min eigenvalue of -J D J / 2
  bool sampled_pass = false;   // max_quadratic_form <= 1e-9
  bool centered_pass = false;  // min_centered_eigenvalue >= -1e-8
  std::vector<double> worst_vector;  // c attaining max_quadratic_form
  bool pass() const { return sampled_pass && centered_pass; }
};

// Conditionally negative definite test on zero-sum vectors: Gaussian,
// mean-subtracted random c, plus the exact centered eigenvalue test.
NdReport check_negative_definite(const GramMatrix& d, int trials, Rng& rng);

// Smallest eigenvalue of a symmetric matrix (dense solver, n <= 2000).
double min_eigenvalue(const GramMatrix& m);

// G + lambda I. With no lambda given, uses max(0, -min eigenvalue) + 1e-10.
GramMatrix add_diagonal(const GramMatrix& g, std::optional<double> lambda = std::nullopt);

}  // namespace tsw
