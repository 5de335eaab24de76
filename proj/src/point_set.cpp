#include "tsw/point_set.hpp"

#include <cmath>
#include <string>

#include "tsw/error.hpp"

namespace tsw {

PointSet::PointSet(std::size_t dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0 && !coords_.empty())
    throw ValidationError("point set: zero dimension with coordinates");
  if (dim_ != 0 && coords_.size() % dim_ != 0)
    throw ValidationError("point set: coordinate count " +
                          std::to_string(coords_.size()) +
                          " is not a multiple of dimension " +
                          std::to_string(dim_));
}

PointSet::PointSet(std::initializer_list<std::initializer_list<double>> rows) {
  for (const auto& row : rows) {
    if (dim_ == 0) dim_ = row.size();
    if (row.size() != dim_ || dim_ == 0)
      throw ValidationError("point set: rows must share a positive dimension");
    coords_.insert(coords_.end(), row.begin(), row.end());
  }
}

void PointSet::push_back(std::span<const double> p) {
  if (dim_ == 0) dim_ = p.size();
  if (p.size() != dim_ || dim_ == 0)
    throw ValidationError("point set: dimension mismatch, expected " +
                          std::to_string(dim_) + " got " +
                          std::to_string(p.size()));
  coords_.insert(coords_.end(), p.begin(), p.end());
}

PointSet PointSet::subset(std::span<const std::size_t> indices) const {
  PointSet out(dim_);
  out.coords_.reserve(indices.size() * dim_);
  for (std::size_t i : indices) {
    auto row = (*this)[i];
    out.coords_.insert(out.coords_.end(), row.begin(), row.end());
  }
  return out;
}

PointSet PointSet::concat(const PointSet& a, const PointSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.dim() != b.dim())
    throw ValidationError("point set: cannot concatenate dimensions " +
                          std::to_string(a.dim()) + " and " +
                          std::to_string(b.dim()));
  PointSet out = a;
  out.coords_.insert(out.coords_.end(), b.coords_.begin(), b.coords_.end());
  return out;
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_euclidean(a, b));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

}  // namespace tsw
