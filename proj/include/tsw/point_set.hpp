#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tsw {

// Dense row-major set of points sharing one dimension.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}
  PointSet(std::size_t dim, std::vector<double> coords);
  PointSet(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_row(std::size_t i) {
    return {coords_.data() + i * dim_, dim_};
  }

  void push_back(std::span<const double> p);
  const std::vector<double>& coords() const { return coords_; }

  // Rows listed in `indices`, in that order.
  PointSet subset(std::span<const std::size_t> indices) const;
  // Concatenation of two point sets of equal dimension.
  static PointSet concat(const PointSet& a, const PointSet& b);

  bool operator==(const PointSet&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

double euclidean(std::span<const double> a, std::span<const double> b);
double squared_euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

}  // namespace tsw
