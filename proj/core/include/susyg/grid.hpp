#pragma once

#include <span>
#include <vector>

namespace susyg {

using Samples = std::vector<double>;

// Uniform 1-D grid.
class Grid {
 public:
  Grid(double x_min, double x_max, int n_points);

  // [-12, 12] with 2401 points.
  static Grid standard();

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_; }
  double h() const { return h_; }
  double operator[](int i) const { return i == n_ - 1 ? x_max_ : x_min_ + i * h_; }
  Samples points() const;

 private:
  double x_min_;
  double x_max_;
  int n_;
  double h_;
};

// Fourth-order finite differences: 5-point central stencils, one-sided
// closures at the two outermost points on each side. Needs at least 6 points.
Samples derivative(const Grid& g, std::span<const double> f);
Samples second_derivative(const Grid& g, std::span<const double> f);

// Trapezoid rule; spectrally accurate for functions that decay at both ends.
double integrate(const Grid& g, std::span<const double> f);
double inner(const Grid& g, std::span<const double> a, std::span<const double> b);
double l2_norm(const Grid& g, std::span<const double> f);

}  // namespace susyg
