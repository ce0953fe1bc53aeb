#pragma once

#include <cstdint>
#include <vector>

#include "bridgenav/gmm_model.hpp"
#include "bridgenav/kernels.hpp"
#include "bridgenav/point_cloud.hpp"

namespace bridgenav {

struct EmOptions {
  double tol_ll = 1e-6;  // relative improvement of the mean log-likelihood
  int max_iter = 200;
  double reg_floor = 1e-8;  // m^2, added to covariance diagonals
  kernels::Backend backend = kernels::default_backend();
};

struct ClusterSet {
  std::vector<int> labels;                          // per input point, in [0, k)
  std::vector<std::vector<std::size_t>> members;    // input indices per cluster
  std::vector<std::vector<Point2>> clusters;        // points per cluster
  GmmModel model;
  std::vector<double> log_likelihood;  // mean log-likelihood at each E-step
  std::vector<std::size_t> reseeds;    // E-step indices right after a re-seed
  int iterations = 0;
  bool converged = false;

  std::size_t k() const { return clusters.size(); }
};

/// EM fit of a k-component Gaussian mixture. Points are canonically sorted
/// before seeding, so the result does not depend on input order.
ClusterSet em_gmm_fit(const PointCloud2D& cloud, std::size_t k, std::uint64_t seed,
                      const EmOptions& options = {});

}  // namespace bridgenav
