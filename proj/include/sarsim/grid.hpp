#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "sarsim/errors.hpp"

namespace sarsim {

/// Row-major 2-D array of doubles. Index (col, row) = (x, y).
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, double fill = 0.0)
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  double operator()(std::size_t x, std::size_t y) const { return data_[y * width_ + x]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::span<double> row(std::size_t y) { return {data_.data() + y * width_, width_}; }
  std::span<const double> row(std::size_t y) const { return {data_.data() + y * width_, width_}; }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> data_;
};

/// Facet grid geometry. Facet (i, j) is centred at origin + (i*dx, j*dy).
struct GridSpec {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 2.0;
  double dy = 2.0;
  double origin_x = 0.0;
  double origin_y = 0.0;

  double x(std::size_t i) const { return origin_x + static_cast<double>(i) * dx; }
  double y(std::size_t j) const { return origin_y + static_cast<double>(j) * dy; }
  double extent_x() const { return static_cast<double>(nx) * dx; }
  double extent_y() const { return static_cast<double>(ny) * dy; }
  Grid make_grid(double fill = 0.0) const { return Grid(nx, ny, fill); }

  /// Throws ConfigError unless nx, ny >= 8 and dx, dy > 0.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline void GridSpec::validate() const {
  if (nx < 8 || ny < 8) throw ConfigError("grid: nx and ny must be >= 8");
  if (!(dx > 0.0) || !(dy > 0.0)) throw ConfigError("grid: dx and dy must be positive");
}

}  // namespace sarsim
