#include <doctest.h>

#include <cmath>

#include "tsw/datagen.hpp"
#include "tsw/error.hpp"
#include "tsw/kernel.hpp"
#include "tsw/transport.hpp"

using namespace tsw;

TEST_CASE("kernel values") {
  CHECK(tsw_kernel(0.0, 3.0) == 1.0);
  CHECK(tsw_kernel(std::log(2.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tsw_kernel(1.0, 0.01) > tsw_kernel(1.0, 0.1));
  CHECK_THROWS_AS(tsw_kernel(1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(tsw_kernel(-1.0, 1.0), ValidationError);
}

TEST_CASE("nearest-rank bandwidth") {
  std::vector<double> d(100);
  for (int i = 0; i < 100; ++i) d[i] = 100 - i;  // unsorted 1..100
  CHECK(bandwidth_from_quantile(d, 50.0) == 0.02);
  CHECK(bandwidth_from_quantile(d, 10.0) == 0.1);
  CHECK(bandwidth_from_quantile(d, 20.0) == 0.05);
  CHECK(bandwidth_from_quantile(d, std::nullopt) == 1.0);
  for (double s : {10.0, 20.0, 50.0}) CHECK(bandwidth_from_quantile(std::vector<double>{2.0}, s) == 0.5);
  // 7 values, s = 50: rank ceil(3.5) = 4.
  CHECK(bandwidth_from_quantile(std::vector<double>{7, 1, 6, 2, 5, 3, 4}, 50.0) == 0.25);
  CHECK_THROWS_AS(bandwidth_from_quantile(std::vector<double>{0, 0, 0}, 50.0), ValidationError);
  CHECK_THROWS_AS(bandwidth_from_quantile(std::vector<double>{}, 50.0), ValidationError);
  // Quantile lands on a zero distance.
  CHECK_THROWS_AS(bandwidth_from_quantile(std::vector<double>{0, 0, 0, 1}, 50.0), ValidationError);
}

TEST_CASE("gram matrices") {
  const GramMatrix zero(3, std::vector<double>(9, 0.0));
  const GramMatrix k = gram(zero, 2.0);
  for (double v : k.entries()) CHECK(v == 1.0);

  CHECK_THROWS_AS(GramMatrix(2, {0, 1, 2, 0}), ValidationError);
  CHECK_THROWS_AS(gram(GramMatrix(2, {1, 1, 1, 0}), 1.0), ValidationError);

  const GramMatrix d(3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
  const GramMatrix small = gram(d, 0.5), big = gram(d, 2.0);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(small(i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) CHECK(big(i, j) < small(i, j));
  }
}

TEST_CASE("indefinite divisibility") {
  CHECK(kernel_power(0.3, 1) == 0.3);
  CHECK(kernel_power(std::exp(-1.0), 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
  const GramMatrix d(3, {0, 1.5, 0.2, 1.5, 0, 4, 0.2, 4, 0});
  const GramMatrix direct = gram(d, 8.0);
  const GramMatrix powered = gram_power(gram(d, 2.0), 4);
  CHECK(powered.bandwidth() == 8.0);
  for (std::size_t e = 0; e < 9; ++e)
    CHECK(std::abs(direct.entries()[e] - powered.entries()[e]) <= 1e-12);
}

TEST_CASE("negative definiteness harness") {
  Rng rng(1);
  CHECK(check_negative_definite(GramMatrix(4, std::vector<double>(16, 0.0)), 50, rng).pass());

  // Pairwise l1 distances between random vectors.
  const PointSet pts = random_cloud(5, 12, rng);
  std::vector<double> l1(144);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) l1[i * 12 + j] = manhattan(pts[i], pts[j]);
  const NdReport ok = check_negative_definite(GramMatrix(12, l1), 200, rng);
  CHECK(ok.pass());
  CHECK(ok.min_centered_eigenvalue >= -1e-8);

  // c = (1, -2, 1) gives c^T D c = 2 (-2 + 9 - 2) = 10 > 0.
  const GramMatrix control(3, {0, 1, 9, 1, 0, 1, 9, 1, 0});
  const NdReport bad = check_negative_definite(control, 100, rng);
  CHECK_FALSE(bad.pass());
  CHECK_FALSE(bad.centered_pass);
  CHECK(bad.max_quadratic_form > 0.0);
}

TEST_CASE("eigenvalues and diagonal regularization") {
  const GramMatrix m(2, {0, 1, 1, 0});
  CHECK(min_eigenvalue(m) == doctest::Approx(-1.0));
  const GramMatrix fixed = add_diagonal(m);
  CHECK(min_eigenvalue(fixed) >= 0.0);
  CHECK(add_diagonal(m, 3.0)(0, 0) == 3.0);
  CHECK(off_diagonal(GramMatrix(3, {0, 1, 2, 1, 0, 3, 2, 3, 0})) == std::vector<double>{1, 2, 3});
}
