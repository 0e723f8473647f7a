#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

#include "cowichan/error.hpp"

namespace cowichan {

/// Dense row-major matrix of unsigned integers in [0, 100).
struct IntMatrix {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::uint32_t> data;  // nrows * ncols, row-major

  IntMatrix() = default;
  IntMatrix(std::size_t r, std::size_t c) : nrows(r), ncols(c), data(checked_size(r, c)) {}

  std::uint32_t& at(std::size_t r, std::size_t c) { return data[r * ncols + c]; }
  std::uint32_t at(std::size_t r, std::size_t c) const { return data[r * ncols + c]; }

  static std::size_t checked_size(std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) throw ShapeError("matrix dimensions must be >= 1");
    if (c != 0 && r > SIZE_MAX / c) throw CapacityError("matrix dimensions overflow addressable size");
    return r * c;
  }

  bool operator==(const IntMatrix&) const = default;
};

/// Row-major boolean mask. Stored as bytes so parallel workers can write
/// disjoint cells without sharing bit-packed words.
struct Mask {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::uint8_t> data;  // 0 or 1

  Mask() = default;
  Mask(std::size_t r, std::size_t c) : nrows(r), ncols(c), data(IntMatrix::checked_size(r, c), 0) {}

  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * ncols + c]; }
  bool at(std::size_t r, std::size_t c) const { return data[r * ncols + c] != 0; }

  std::size_t count_true() const {
    std::size_t n = 0;
    for (auto v : data) n += (v != 0);
    return n;
  }

  bool operator==(const Mask&) const = default;
};

struct Point {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const Point&) const = default;
};

/// Ordered (row, col) coordinates selected by winnow.
struct PointList {
  std::vector<Point> points;
  std::size_t size() const { return points.size(); }
  bool operator==(const PointList&) const = default;
};

/// Square symmetric distance matrix produced by outer.
struct RealMatrix {
  std::size_t n = 0;
  std::vector<double> data;  // n * n, row-major

  RealMatrix() = default;
  explicit RealMatrix(std::size_t n_) : n(n_), data(IntMatrix::checked_size(n_, n_), 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * n + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * n + c]; }

  bool operator==(const RealMatrix&) const = default;
};

struct RealVector {
  std::vector<double> values;

  RealVector() = default;
  explicit RealVector(std::size_t n) : values(n, 0.0) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }

  bool operator==(const RealVector&) const = default;
};

/// Kernel sizing and seeding parameters shared by the runner and CLI.
struct KernelParams {
  std::size_t nrows = 2000;
  std::size_t ncols = 2000;
  std::size_t nelts = 2000;
  std::uint32_t seed = 42;
  int percent = 50;  // [0, 100]

  void validate() const {
    if (nrows < 1 || ncols < 1 || nelts < 1)
      throw ShapeError("kernel params: nrows, ncols, nelts must be >= 1");
    if (percent < 0 || percent > 100)
      throw ShapeError("kernel params: percent must lie in [0, 100]");
  }
};

}  // namespace cowichan
