#pragma once

// Fiber algebra for the bundle structures living on jet spaces.
//
// Every structure has an anchor: the data a fiber operation must hold fixed.
//   - 1-jets over a point:        anchor x,     fiber X
//   - VBJet, primary structure:   anchor (x,y), fiber (F, G)
//   - VBJet, secondary structure: anchor (x,F), fiber (y, G)
//   - DoubleJet, primary:         anchor (x,X), fiber (Y, C)
//   - DoubleJet, secondary:       anchor (x,Y), fiber (X, C)
//
// combine(a, b, lam) computes a + lam * b in the fiber; the result carries
// a's anchor bits unchanged. Pure scaling is combine(zero_fiber(a), a, lam).

#include <string>
#include <utility>

#include "jetcalc/errors.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/linalg.hpp"

namespace jetcalc {

inline constexpr double kAnchorTol = 1e-9;

namespace detail {

inline void require_anchor(const Vec& a, const Vec& b, double tol, const char* what) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol)
      throw AnchorError(std::string(what) + " mismatch between fiber operands");
}

inline void require_anchor(const Mat& a, const Mat& b, double tol, const char* what) {
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (std::abs(a.data[i] - b.data[i]) > tol)
      throw AnchorError(std::string(what) + " mismatch between fiber operands");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1-jets over a base point: [x; X] + lam * [x; X'] = [x; X + lam X']

inline Jet1 jet1_combine(const Jet1& a, const Jet1& b, double lam, double tol = kAnchorTol) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("jet1_combine: dimension mismatch");
  detail::require_anchor(a.x, b.x, tol, "base point");
  Jet1 r = a;
  r.X = add_scaled(a.X, b.X, lam);
  return r;
}

inline Jet1 jet1_zero_fiber(const Jet1& a) {
  Jet1 r = a;
  r.X = Mat(a.m, a.p);
  return r;
}

// ---------------------------------------------------------------------------
// VBJet fiber operations

inline VBJet vb_primary_combine(const VBJet& a, const VBJet& b, double lam,
                                double tol = kAnchorTol) {
  if (a.p != b.p || a.m != b.m || a.k != b.k)
    throw ShapeError("vb_primary_combine: dimension mismatch");
  detail::require_anchor(a.x, b.x, tol, "base point");
  detail::require_anchor(a.y, b.y, tol, "fiber point");
  VBJet r = a;
  r.F = add_scaled(a.F, b.F, lam);
  r.G = add_scaled(a.G, b.G, lam);
  return r;
}

inline VBJet vb_primary_zero_fiber(const VBJet& a) {
  VBJet r = a;
  r.F = Mat(a.m, a.p);
  r.G = Mat(a.k, a.p);
  return r;
}

inline VBJet vb_secondary_combine(const VBJet& a, const VBJet& b, double lam,
                                  double tol = kAnchorTol) {
  if (a.p != b.p || a.m != b.m || a.k != b.k)
    throw ShapeError("vb_secondary_combine: dimension mismatch");
  detail::require_anchor(a.x, b.x, tol, "base point");
  detail::require_anchor(a.F, b.F, tol, "base jet");
  VBJet r = a;
  r.y = add_scaled(a.y, b.y, lam);
  r.G = add_scaled(a.G, b.G, lam);
  return r;
}

inline VBJet vb_secondary_zero_fiber(const VBJet& a) {
  VBJet r = a;
  r.y = Vec(static_cast<std::size_t>(a.k), 0.0);
  r.G = Mat(a.k, a.p);
  return r;
}

// ---------------------------------------------------------------------------
// DoubleJet fiber operations, written directly on the quadruple

inline DoubleJet dj_primary_combine(const DoubleJet& a, const DoubleJet& b, double lam,
                                    double tol = kAnchorTol) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("dj_primary_combine: dimension mismatch");
  detail::require_anchor(a.x, b.x, tol, "base point");
  detail::require_anchor(a.X, b.X, tol, "inner jet");
  DoubleJet r = a;
  r.Y = add_scaled(a.Y, b.Y, lam);
  r.C = add_scaled(a.C, b.C, lam);
  return r;
}

inline DoubleJet dj_primary_zero_fiber(const DoubleJet& a) {
  DoubleJet r = a;
  r.Y = Mat(a.m, a.p);
  r.C = Ten3(a.m, a.p, a.p);
  return r;
}

inline DoubleJet dj_secondary_combine(const DoubleJet& a, const DoubleJet& b, double lam,
                                      double tol = kAnchorTol) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("dj_secondary_combine: dimension mismatch");
  detail::require_anchor(a.x, b.x, tol, "base point");
  detail::require_anchor(a.Y, b.Y, tol, "base jet");
  DoubleJet r = a;
  r.X = add_scaled(a.X, b.X, lam);
  r.C = add_scaled(a.C, b.C, lam);
  return r;
}

inline DoubleJet dj_secondary_zero_fiber(const DoubleJet& a) {
  DoubleJet r = a;
  r.X = Mat(a.m, a.p);
  r.C = Ten3(a.m, a.p, a.p);
  return r;
}

// ---------------------------------------------------------------------------
// Projections

// Primary projection of a 1-jet of a bundle: the point of E it sits over.
inline std::pair<Vec, Vec> proj_primary(const VBJet& v) { return {v.x, v.y}; }

// Secondary projection: the underlying 1-jet of the base path.
inline Jet1 proj_secondary(const VBJet& v) {
  Jet1 j;
  j.p = v.p;
  j.m = v.m;
  j.x = v.x;
  j.X = v.F;
  return j;
}

// For double jets the same pair of projections lands in 1-jets both times:
// the primary one returns the inner jet (x, X), the secondary one the base
// path's jet (x, Y).
inline Jet1 dj_proj_primary(const DoubleJet& v) {
  Jet1 j;
  j.p = v.p;
  j.m = v.m;
  j.x = v.x;
  j.X = v.X;
  return j;
}

inline Jet1 dj_proj_secondary(const DoubleJet& v) {
  Jet1 j;
  j.p = v.p;
  j.m = v.m;
  j.x = v.x;
  j.X = v.Y;
  return j;
}

// ---------------------------------------------------------------------------
// Chart plumbing

// Chart blocks ordered as the secondary structure induces them: (x, f, y, g).
struct SecondaryChart {
  Vec x;  // m
  Mat f;  // m x p
  Vec y;  // k
  Mat g;  // k x p
};

// Chart blocks ordered as the primary structure induces them: (x, y, f, g).
struct PrimaryChart {
  Vec x;
  Vec y;
  Mat f;
  Mat g;
};

namespace detail {

inline void check_chart_shapes(const Vec& x, const Mat& f, const Vec& y, const Mat& g) {
  if (f.rows != static_cast<int>(x.size()) || g.rows != static_cast<int>(y.size()) ||
      f.cols != g.cols)
    throw ShapeError("chart blocks have inconsistent shapes");
}

}  // namespace detail

// The chart change between the two induced charts: a pure reordering of the
// middle blocks, smooth with its own inverse.
inline PrimaryChart omega_hat(const SecondaryChart& c) {
  detail::check_chart_shapes(c.x, c.f, c.y, c.g);
  return {c.x, c.y, c.f, c.g};
}

inline SecondaryChart omega_hat_inverse(const PrimaryChart& c) {
  detail::check_chart_shapes(c.x, c.f, c.y, c.g);
  return {c.x, c.f, c.y, c.g};
}

// Split a stacked (m+k) x p velocity block into its base and fiber parts.
inline std::pair<Mat, Mat> xi_split(const Mat& h, int m, int k) {
  if (m < 0 || k < 0 || h.rows != m + k) throw ShapeError("xi_split: row count must be m + k");
  Mat f(m, h.cols), g(k, h.cols);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < h.cols; ++a) f(i, a) = h(i, a);
  for (int i = 0; i < k; ++i)
    for (int a = 0; a < h.cols; ++a) g(i, a) = h(m + i, a);
  return {f, g};
}

inline Mat xi_join(const Mat& f, const Mat& g) {
  if (f.cols != g.cols) throw ShapeError("xi_join: column count mismatch");
  Mat h(f.rows + g.rows, f.cols);
  for (int i = 0; i < f.rows; ++i)
    for (int a = 0; a < f.cols; ++a) h(i, a) = f(i, a);
  for (int i = 0; i < g.rows; ++i)
    for (int a = 0; a < g.cols; ++a) h(f.rows + i, a) = g(i, a);
  return h;
}

// The product splitting of a 1-jet into R^(m1) x R^(m2): row partition of x
// and X; joining inverts it.
inline std::pair<Jet1, Jet1> product_split(const Jet1& j, int m1, int m2) {
  validate(j);
  if (m1 < 1 || m2 < 1 || m1 + m2 != j.m)
    throw ShapeError("product_split: invalid split sizes " + std::to_string(m1) + "+" +
                     std::to_string(m2) + " for m=" + std::to_string(j.m));
  Jet1 a, b;
  a.p = b.p = j.p;
  a.m = m1;
  b.m = m2;
  a.x.assign(j.x.begin(), j.x.begin() + m1);
  b.x.assign(j.x.begin() + m1, j.x.end());
  a.X = Mat(m1, j.p);
  b.X = Mat(m2, j.p);
  for (int i = 0; i < m1; ++i)
    for (int c = 0; c < j.p; ++c) a.X(i, c) = j.X(i, c);
  for (int i = 0; i < m2; ++i)
    for (int c = 0; c < j.p; ++c) b.X(i, c) = j.X(m1 + i, c);
  return {a, b};
}

inline Jet1 product_join(const Jet1& a, const Jet1& b) {
  if (a.p != b.p) throw ShapeError("product_join: source dimension mismatch");
  Jet1 j;
  j.p = a.p;
  j.m = a.m + b.m;
  j.x = a.x;
  j.x.insert(j.x.end(), b.x.begin(), b.x.end());
  j.X = Mat(j.m, j.p);
  for (int i = 0; i < a.m; ++i)
    for (int c = 0; c < j.p; ++c) j.X(i, c) = a.X(i, c);
  for (int i = 0; i < b.m; ++i)
    for (int c = 0; c < j.p; ++c) j.X(a.m + i, c) = b.X(i, c);
  return j;
}

}  // namespace jetcalc
