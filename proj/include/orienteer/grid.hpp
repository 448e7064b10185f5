#ifndef ORIENTEER_GRID_HPP
#define ORIENTEER_GRID_HPP

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace orienteer {

/// A point of the plane in map units.
struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(Point const&, Point const&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Integer node index. Signed so that out-of-grid queries are representable.
struct Node {
  std::ptrdiff_t row = 0;
  std::ptrdiff_t col = 0;

  friend bool operator==(Node const&, Node const&) = default;
  friend auto operator<=>(Node const&, Node const&) = default;
};

/// Uniform node lattice: node (row, col) sits at (origin.x + col*dx, origin.y + row*dx).
struct GridGeometry {
  std::size_t rows = 1;
  std::size_t cols = 1;
  double dx = 1.0;
  Point origin{};

  std::size_t size() const { return rows * cols; }

  bool contains(Node n) const {
    return n.row >= 0 && n.col >= 0 && static_cast<std::size_t>(n.row) < rows &&
           static_cast<std::size_t>(n.col) < cols;
  }

  std::size_t linear(Node n) const {
    assert(contains(n));
    return static_cast<std::size_t>(n.row) * cols + static_cast<std::size_t>(n.col);
  }

  Node node_at(std::size_t linear_index) const {
    return {static_cast<std::ptrdiff_t>(linear_index / cols),
            static_cast<std::ptrdiff_t>(linear_index % cols)};
  }

  Point position(Node n) const {
    return {origin.x + static_cast<double>(n.col) * dx,
            origin.y + static_cast<double>(n.row) * dx};
  }

  double width() const { return static_cast<double>(cols - 1) * dx; }
  double height() const { return static_cast<double>(rows - 1) * dx; }

  bool inside(Point p) const {
    return p.x >= origin.x && p.y >= origin.y && p.x <= origin.x + width() &&
           p.y <= origin.y + height();
  }

  Point clamp(Point p) const {
    return {std::clamp(p.x, origin.x, origin.x + width()),
            std::clamp(p.y, origin.y, origin.y + height())};
  }

  /// Nearest node to a point, after clamping into the domain.
  Node nearest(Point p) const {
    Point const c = clamp(p);
    auto const col = static_cast<std::ptrdiff_t>(std::lround((c.x - origin.x) / dx));
    auto const row = static_cast<std::ptrdiff_t>(std::lround((c.y - origin.y) / dx));
    return {std::clamp<std::ptrdiff_t>(row, 0, static_cast<std::ptrdiff_t>(rows) - 1),
            std::clamp<std::ptrdiff_t>(col, 0, static_cast<std::ptrdiff_t>(cols) - 1)};
  }

  friend bool operator==(GridGeometry const&, GridGeometry const&) = default;
};

/// Row-major dense 2D array.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T const& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("grid data size does not match rows*cols");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  T const& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  T& operator[](std::size_t i) { return data_[i]; }
  T const& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> values() { return data_; }
  std::span<T const> values() const { return data_; }

  void fill(T const& v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(Grid const&, Grid const&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ScalarGrid = Grid<double>;

}  // namespace orienteer

#endif  // ORIENTEER_GRID_HPP
