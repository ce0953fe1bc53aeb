#pragma once

#include <span>

#include "bridgenav/gmm_model.hpp"

// Data-parallel EM kernels. Each kernel has a serial reference and an OpenMP
// variant; both produce bit-identical output (reductions stay in point order).
namespace bridgenav::kernels {

enum class Backend { Serial, OpenMP };

bool openmp_available();
Backend default_backend();

/// Responsibilities into `resp` (row-major, n x k) and the mean per-point
/// log-likelihood of the model.
double estep(std::span<const Point2> points, const GmmModel& model, std::span<double> resp,
             Backend backend);

/// Weights, means and covariances from responsibilities. `reg_floor` is
/// added to each covariance diagonal.
GmmModel mstep(std::span<const Point2> points, std::span<const double> resp, std::size_t k,
               double reg_floor, Backend backend);

}  // namespace bridgenav::kernels
