#pragma once

#include <vector>

#include "bridgenav/geometry.hpp"

namespace bridgenav {

// Symmetric 2x2 covariance, m^2.
struct Cov2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  double det() const { return xx * yy - xy * xy; }
  double min_eigenvalue() const {
    return 0.5 * (xx + yy - std::hypot(xx - yy, 2.0 * xy));
  }
};

struct GmmModel {
  std::vector<double> weights;
  std::vector<Point2> means;
  std::vector<Cov2> covariances;

  std::size_t k() const { return weights.size(); }
};

}  // namespace bridgenav
