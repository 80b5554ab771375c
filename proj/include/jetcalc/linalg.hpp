#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "jetcalc/errors.hpp"

namespace jetcalc {

using Vec = std::vector<double>;

// Dense row-major matrix. Row i = component i, column a = direction a.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(std::size_t(r) * std::size_t(c), fill) {}

  double& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

// Dense rank-3 tensor, indexed [component][row][col].
struct Ten3 {
  int n0 = 0, n1 = 0, n2 = 0;
  std::vector<double> data;

  Ten3() = default;
  Ten3(int a, int b, int c, double fill = 0.0)
      : n0(a), n1(b), n2(c), data(std::size_t(a) * b * c, fill) {}

  double& operator()(int i, int j, int k) {
    return data[(std::size_t(i) * n1 + j) * n2 + k];
  }
  double operator()(int i, int j, int k) const {
    return data[(std::size_t(i) * n1 + j) * n2 + k];
  }

  bool same_shape(const Ten3& o) const {
    return n0 == o.n0 && n1 == o.n1 && n2 == o.n2;
  }
};

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}
inline bool all_finite(const Mat& m) {
  for (double x : m.data)
    if (!std::isfinite(x)) return false;
  return true;
}
inline bool all_finite(const Ten3& t) {
  for (double x : t.data)
    if (!std::isfinite(x)) return false;
  return true;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw ShapeError("vector size mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

inline double max_abs_diff(const Mat& a, const Mat& b) {
  if (!a.same_shape(b)) throw ShapeError("matrix shape mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    r = std::max(r, std::abs(a.data[i] - b.data[i]));
  return r;
}

inline double max_abs_diff(const Ten3& a, const Ten3& b) {
  if (!a.same_shape(b)) throw ShapeError("tensor shape mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    r = std::max(r, std::abs(a.data[i] - b.data[i]));
  return r;
}

// a + lam * b, elementwise.
inline Vec add_scaled(const Vec& a, const Vec& b, double lam) {
  if (a.size() != b.size()) throw ShapeError("vector size mismatch");
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + lam * b[i];
  return r;
}

inline Mat add_scaled(const Mat& a, const Mat& b, double lam) {
  if (!a.same_shape(b)) throw ShapeError("matrix shape mismatch");
  Mat r(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    r.data[i] = a.data[i] + lam * b.data[i];
  return r;
}

inline Ten3 add_scaled(const Ten3& a, const Ten3& b, double lam) {
  if (!a.same_shape(b)) throw ShapeError("tensor shape mismatch");
  Ten3 r(a.n0, a.n1, a.n2);
  for (std::size_t i = 0; i < a.data.size(); ++i)
    r.data[i] = a.data[i] + lam * b.data[i];
  return r;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw ShapeError("matmul dimension mismatch");
  Mat r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      for (int j = 0; j < b.cols; ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

}  // namespace jetcalc
