#include "bridgenav/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bridgenav {

PointGrid::PointGrid(std::span<const Point2> points, double cell_size)
    : points_(points.begin(), points.end()) {
  if (points_.empty()) return;
  const BoundingBox box = bounding_box(points_);
  origin_ = box.min;
  cell_ = cell_size > 0.0 ? cell_size : 1.0;
  const double w = box.max.x - box.min.x;
  const double h = box.max.y - box.min.y;
  // Cap the bucket count so degenerate inputs cannot explode memory.
  while ((w / cell_ + 1.0) * (h / cell_ + 1.0) > 4.0 * static_cast<double>(points_.size()) + 16.0) {
    cell_ *= 2.0;
  }
  cols_ = static_cast<long>(w / cell_) + 1;
  rows_ = static_cast<long>(h / cell_) + 1;
  buckets_.assign(static_cast<std::size_t>(cols_ * rows_), {});
  for (std::size_t i = 0; i < points_.size(); ++i) {
    buckets_[static_cast<std::size_t>(row_of(points_[i].y) * cols_ + col_of(points_[i].x))]
        .push_back(i);
  }
}

long PointGrid::col_of(double x) const {
  return std::clamp(static_cast<long>(std::floor((x - origin_.x) / cell_)), 0L, cols_ - 1);
}

long PointGrid::row_of(double y) const {
  return std::clamp(static_cast<long>(std::floor((y - origin_.y) / cell_)), 0L, rows_ - 1);
}

std::vector<std::size_t> PointGrid::within(const Point2& q, double radius) const {
  std::vector<std::size_t> out;
  if (points_.empty() || !(radius >= 0.0)) return out;
  const double r2 = radius * radius;
  for (long r = row_of(q.y - radius); r <= row_of(q.y + radius); ++r) {
    for (long c = col_of(q.x - radius); c <= col_of(q.x + radius); ++c) {
      for (std::size_t i : buckets_[static_cast<std::size_t>(r * cols_ + c)]) {
        if (squared_distance(points_[i], q) <= r2) out.push_back(i);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> PointGrid::nearest(const Point2& q, std::size_t k,
                                            const std::function<bool(std::size_t)>& keep) const {
  std::vector<std::pair<double, std::size_t>> found;
  if (points_.empty() || k == 0) return {};
  const long qc = col_of(q.x);
  const long qr = row_of(q.y);
  // Distance from q to the edge of its own cell bounds what later rings can hold.
  const double inset = std::min({q.x - (origin_.x + static_cast<double>(qc) * cell_),
                                 origin_.x + static_cast<double>(qc + 1) * cell_ - q.x,
                                 q.y - (origin_.y + static_cast<double>(qr) * cell_),
                                 origin_.y + static_cast<double>(qr + 1) * cell_ - q.y});
  const long max_ring = std::max(cols_, rows_);
  for (long ring = 0; ring <= max_ring; ++ring) {
    auto visit = [&](long c, long r) {
      if (c < 0 || r < 0 || c >= cols_ || r >= rows_) return;
      for (std::size_t i : buckets_[static_cast<std::size_t>(r * cols_ + c)]) {
        if (keep && !keep(i)) continue;
        found.emplace_back(squared_distance(points_[i], q), i);
      }
    };
    if (ring == 0) {
      visit(qc, qr);
    } else {
      for (long c = qc - ring; c <= qc + ring; ++c) {
        visit(c, qr - ring);
        visit(c, qr + ring);
      }
      for (long r = qr - ring + 1; r <= qr + ring - 1; ++r) {
        visit(qc - ring, r);
        visit(qc + ring, r);
      }
    }
    if (found.size() >= k) {
      std::nth_element(found.begin(), found.begin() + static_cast<long>(k - 1), found.end());
      const double kth = found[k - 1].first;
      const double reach = std::max(0.0, inset) + static_cast<double>(ring) * cell_;
      if (kth <= reach * reach) break;
    }
  }
  std::sort(found.begin(), found.end());
  if (found.size() > k) found.resize(k);
  std::vector<std::size_t> out;
  out.reserve(found.size());
  for (const auto& f : found) out.push_back(f.second);
  return out;
}

double mean_nearest_neighbor_spacing(std::span<const Point2> points) {
  if (points.size() < 2) return 0.0;
  const BoundingBox box = bounding_box(points);
  const double area = std::max((box.max.x - box.min.x) * (box.max.y - box.min.y), 1e-12);
  const double cell = std::sqrt(area / static_cast<double>(points.size())) * 2.0;
  PointGrid grid(points, cell);
  double total = 0.0;
  std::size_t counted = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point2 p = points[i];
    const auto nn = grid.nearest(p, 1, [&](std::size_t j) {
      return j != i && squared_distance(points[j], p) > kEpsLen * kEpsLen;
    });
    if (nn.empty()) continue;
    total += distance(points[nn.front()], p);
    ++counted;
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

}  // namespace bridgenav
