#include "bridgenav/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bridgenav/error.hpp"

namespace bridgenav::kernels {

namespace {

struct ComponentTerms {
  double mx, my;
  double ixx, ixy, iyy;  // inverse covariance
  double log_coef;       // log weight - log(2 pi) - 0.5 log det
};

std::vector<ComponentTerms> precompute(const GmmModel& model) {
  std::vector<ComponentTerms> terms(model.k());
  for (std::size_t j = 0; j < model.k(); ++j) {
    const Cov2& c = model.covariances[j];
    const double det = c.det();
    if (!(det > 0.0) || !(model.weights[j] > 0.0)) {
      throw Error(ErrorCode::SingularCovariance, "component " + std::to_string(j));
    }
    terms[j] = {model.means[j].x,
                model.means[j].y,
                c.yy / det,
                -c.xy / det,
                c.xx / det,
                std::log(model.weights[j]) - std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det)};
  }
  return terms;
}

// Shared by both backends so their arithmetic is identical.
inline double responsibilities_for(const Point2& p, std::span<const ComponentTerms> terms,
                                   double* row) {
  const std::size_t k = terms.size();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const ComponentTerms& t = terms[j];
    const double dx = p.x - t.mx;
    const double dy = p.y - t.my;
    const double maha = dx * (t.ixx * dx + t.ixy * dy) + dy * (t.ixy * dx + t.iyy * dy);
    row[j] = t.log_coef - 0.5 * maha;
    hi = std::max(hi, row[j]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    row[j] = std::exp(row[j] - hi);
    sum += row[j];
  }
  for (std::size_t j = 0; j < k; ++j) row[j] /= sum;
  return hi + std::log(sum);
}

struct ComponentStats {
  double weight;
  Point2 mean;
  Cov2 cov;
};

inline ComponentStats component_stats(std::span<const Point2> points, std::span<const double> resp,
                                      std::size_t k, std::size_t j, double reg_floor) {
  const std::size_t n = points.size();
  double nk = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = resp[i * k + j];
    nk += r;
    sx += r * points[i].x;
    sy += r * points[i].y;
  }
  const double safe = std::max(nk, std::numeric_limits<double>::min());
  const Point2 mean{sx / safe, sy / safe};
  double cxx = 0.0;
  double cxy = 0.0;
  double cyy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = resp[i * k + j];
    const double dx = points[i].x - mean.x;
    const double dy = points[i].y - mean.y;
    cxx += r * dx * dx;
    cxy += r * dx * dy;
    cyy += r * dy * dy;
  }
  return {nk / static_cast<double>(n), mean,
          {cxx / safe + reg_floor, cxy / safe, cyy / safe + reg_floor}};
}

}  // namespace

bool openmp_available() {
#ifdef BRIDGENAV_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

Backend default_backend() { return openmp_available() ? Backend::OpenMP : Backend::Serial; }

double estep(std::span<const Point2> points, const GmmModel& model, std::span<double> resp,
             Backend backend) {
  const std::size_t n = points.size();
  const std::size_t k = model.k();
  if (resp.size() != n * k) {
    throw Error(ErrorCode::InvalidArgument, "responsibility buffer has the wrong size");
  }
  const auto terms = precompute(model);
  std::vector<double> log_density(n);
  if (backend == Backend::OpenMP) {
    const long count = static_cast<long>(n);
#ifdef BRIDGENAV_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < count; ++i) {
      const auto u = static_cast<std::size_t>(i);
      log_density[u] = responsibilities_for(points[u], terms, resp.data() + u * k);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      log_density[i] = responsibilities_for(points[i], terms, resp.data() + i * k);
    }
  }
  double total = 0.0;
  for (double v : log_density) total += v;
  return total / static_cast<double>(n);
}

GmmModel mstep(std::span<const Point2> points, std::span<const double> resp, std::size_t k,
               double reg_floor, Backend backend) {
  if (points.empty() || resp.size() != points.size() * k) {
    throw Error(ErrorCode::InvalidArgument, "responsibility buffer has the wrong size");
  }
  std::vector<ComponentStats> stats(k);
  if (backend == Backend::OpenMP) {
    const long count = static_cast<long>(k);
#ifdef BRIDGENAV_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long j = 0; j < count; ++j) {
      const auto u = static_cast<std::size_t>(j);
      stats[u] = component_stats(points, resp, k, u, reg_floor);
    }
  } else {
    for (std::size_t j = 0; j < k; ++j) stats[j] = component_stats(points, resp, k, j, reg_floor);
  }
  GmmModel model;
  for (const auto& s : stats) {
    model.weights.push_back(s.weight);
    model.means.push_back(s.mean);
    model.covariances.push_back(s.cov);
  }
  return model;
}

}  // namespace bridgenav::kernels
