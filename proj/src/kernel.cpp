#include "tsw/kernel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tsw/error.hpp"

namespace tsw {

namespace {

Eigen::MatrixXd to_eigen(const GramMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = m(i, j);
  return out;
}

void check_eigen_size(std::size_t n) {
  if (n > kEigenCheckMaxSize)
    throw ValidationError("matrix of size " + std::to_string(n) +
                          " exceeds the eigen-check limit of " +
                          std::to_string(kEigenCheckMaxSize));
}

}  // namespace

GramMatrix::GramMatrix(std::size_t n, std::vector<double> entries, Kind kind, double bandwidth)
    : n_(n), entries_(std::move(entries)), kind_(kind), bandwidth_(bandwidth) {
  if (entries_.size() != n_ * n_)
    throw ValidationError("gram matrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                          std::to_string(entries_.size()));
  for (double v : entries_)
    if (!std::isfinite(v)) throw ValidationError("gram matrix: non-finite entry");
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs(entries_[i * n_ + j] - entries_[j * n_ + i]) > 1e-9)
        throw ValidationError("gram matrix: asymmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
}

double tsw_kernel(double tsw_value, double t) {
  if (!(t > 0.0)) throw ValidationError("kernel bandwidth t must be positive");
  if (!(tsw_value >= 0.0)) throw ValidationError("distance must be nonnegative");
  return std::exp(-t * tsw_value);
}

double bandwidth_from_quantile(std::span<const double> distances, std::optional<double> s) {
  if (distances.empty()) throw ValidationError("bandwidth: empty distance list");
  if (std::none_of(distances.begin(), distances.end(), [](double v) { return v > 0.0; }))
    throw ValidationError("bandwidth: all distances are zero");
  if (!s) return 1.0;
  if (!(*s > 0.0 && *s <= 100.0)) throw ValidationError("bandwidth: quantile must be in (0, 100]");
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(*s / 100.0 * n - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  const double q = sorted[rank - 1];
  if (!(q > 0.0)) throw ValidationError("bandwidth: quantile distance is zero");
  return 1.0 / q;
}

std::vector<double> off_diagonal(const GramMatrix& d) {
  std::vector<double> out;
  out.reserve(d.size() * (d.size() - (d.size() > 0 ? 1 : 0)) / 2);
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) out.push_back(d(i, j));
  return out;
}

GramMatrix gram(const GramMatrix& distances, double t) {
  if (!(t > 0.0)) throw ValidationError("kernel bandwidth t must be positive");
  if (distances.kind() != GramMatrix::Kind::Distance)
    throw ValidationError("gram: input is not a distance matrix");
  const std::size_t n = distances.size();
  for (std::size_t i = 0; i < n; ++i)
    if (distances(i, i) != 0.0) throw ValidationError("gram: distance diagonal must be zero");
  std::vector<double> k(n * n);
  for (std::size_t i = 0; i < n * n; ++i) k[i] = tsw_kernel(distances.entries()[i], t);
  return GramMatrix(n, std::move(k), GramMatrix::Kind::Kernel, t);
}

double kernel_power(double k_value, int i) {
  if (i < 1) throw ValidationError("kernel power must be >= 1");
  double out = 1.0;
  for (int r = 0; r < i; ++r) out *= k_value;
  return out;
}

GramMatrix gram_power(const GramMatrix& kernel, int i) {
  if (kernel.kind() != GramMatrix::Kind::Kernel)
    throw ValidationError("gram_power: input is not a kernel matrix");
  std::vector<double> k(kernel.entries());
  for (double& v : k) v = kernel_power(v, i);
  return GramMatrix(kernel.size(), std::move(k), GramMatrix::Kind::Kernel,
                    kernel.bandwidth() * i);
}

NdReport check_negative_definite(const GramMatrix& d, int trials, Rng& rng) {
  const std::size_t n = d.size();
  NdReport r;
  r.max_quadratic_form = -std::numeric_limits<double>::infinity();
  std::vector<double> c(n);
  for (int t = 0; t < trials; ++t) {
    double mean = 0.0;
    for (double& v : c) {
      v = standard_normal(rng);
      mean += v;
    }
    mean /= static_cast<double>(n);
    for (double& v : c) v -= mean;
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += c[i] * d(i, j) * c[j];
    if (q > r.max_quadratic_form) {
      r.max_quadratic_form = q;
      r.worst_vector = c;
    }
  }
  if (trials <= 0) r.max_quadratic_form = 0.0;
  r.sampled_pass = r.max_quadratic_form <= 1e-9;

  check_eigen_size(n);
  if (n == 0) {
    r.centered_pass = true;
    return r;
  }
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd j = Eigen::MatrixXd::Identity(m, m) -
                      Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(n));
  Eigen::MatrixXd b = -0.5 * j * to_eigen(d) * j;
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  r.min_centered_eigenvalue = es.eigenvalues().minCoeff();
  r.centered_pass = r.min_centered_eigenvalue >= -1e-8;
  return r;
}

double min_eigenvalue(const GramMatrix& m) {
  check_eigen_size(m.size());
  if (m.size() == 0) throw ValidationError("min_eigenvalue: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

GramMatrix add_diagonal(const GramMatrix& g, std::optional<double> lambda) {
  const double l = lambda ? *lambda : std::max(0.0, -min_eigenvalue(g)) + 1e-10;
  if (!(l >= 0.0)) throw ValidationError("add_diagonal: lambda must be nonnegative");
  std::vector<double> e(g.entries());
  for (std::size_t i = 0; i < g.size(); ++i) e[i * g.size() + i] += l;
  return GramMatrix(g.size(), std::move(e), g.kind(), g.bandwidth());
}

}  // namespace tsw
