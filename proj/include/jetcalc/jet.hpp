#pragma once

// Chart-level jet values and their constructors from smooth maps. Every jet
// is taken at the source origin; offset sources are pre-composed in the DSL
// by the caller.
//
// Conventions (normative for the JSON encodings as well):
//   - velocity matrices are m x p with column a = direction a;
//   - Jet2.A is m x 2p, columns [0, p) the u-block and [p, 2p) the w-block;
//   - Jet2.B is m x 2p x 2p with B[j] symmetric;
//   - DoubleJet holds (x, X, Y, C) with X the w-velocities (the fiber of the
//     inner 1-jet), Y the u-velocities, and C[j][a][b] = d2 phi_j/du_a dw_b.

#include <string>

#include "jetcalc/errors.hpp"
#include "jetcalc/expr.hpp"
#include "jetcalc/linalg.hpp"
#include "jetcalc/taylor.hpp"

namespace jetcalc {

inline constexpr double kJetEqualityTol = 1e-9;

struct Jet1 {
  int p = 0;
  int m = 0;
  Vec x;  // m
  Mat X;  // m x p
};

struct Jet2 {
  int p = 0;
  int m = 0;
  Vec x;   // m
  Mat A;   // m x 2p
  Ten3 B;  // m x 2p x 2p, each B[j] symmetric
};

struct DoubleJet {
  int p = 0;
  int m = 0;
  Vec x;   // m
  Mat X;   // m x p
  Mat Y;   // m x p
  Ten3 C;  // m x p x p, no symmetry requirement
};

struct VBJet {
  int p = 0;
  int m = 0;
  int k = 0;
  Vec x;  // m
  Vec y;  // k
  Mat F;  // m x p, base velocities
  Mat G;  // k x p, fiber velocities
};

// ---------------------------------------------------------------------------
// Validation

inline void validate(const Jet1& j) {
  if (j.p < 1 || j.m < 1) throw ShapeError("Jet1: dimensions must be positive");
  if (static_cast<int>(j.x.size()) != j.m || j.X.rows != j.m || j.X.cols != j.p)
    throw ShapeError("Jet1: inconsistent shapes");
  if (!all_finite(j.x) || !all_finite(j.X)) throw ShapeError("Jet1: non-finite entries");
}

inline void validate(const Jet2& j) {
  if (j.p < 1 || j.m < 1) throw ShapeError("Jet2: dimensions must be positive");
  if (static_cast<int>(j.x.size()) != j.m || j.A.rows != j.m || j.A.cols != 2 * j.p ||
      j.B.n0 != j.m || j.B.n1 != 2 * j.p || j.B.n2 != 2 * j.p)
    throw ShapeError("Jet2: inconsistent shapes");
  if (!all_finite(j.x) || !all_finite(j.A) || !all_finite(j.B))
    throw ShapeError("Jet2: non-finite entries");
}

inline void validate(const DoubleJet& v) {
  if (v.p < 1 || v.m < 1) throw ShapeError("DoubleJet: dimensions must be positive");
  if (static_cast<int>(v.x.size()) != v.m || v.X.rows != v.m || v.X.cols != v.p ||
      v.Y.rows != v.m || v.Y.cols != v.p || v.C.n0 != v.m || v.C.n1 != v.p || v.C.n2 != v.p)
    throw ShapeError("DoubleJet: inconsistent shapes");
  if (!all_finite(v.x) || !all_finite(v.X) || !all_finite(v.Y) || !all_finite(v.C))
    throw ShapeError("DoubleJet: non-finite entries");
}

inline void validate(const VBJet& v) {
  if (v.p < 1 || v.m < 1 || v.k < 1) throw ShapeError("VBJet: dimensions must be positive");
  if (static_cast<int>(v.x.size()) != v.m || static_cast<int>(v.y.size()) != v.k ||
      v.F.rows != v.m || v.F.cols != v.p || v.G.rows != v.k || v.G.cols != v.p)
    throw ShapeError("VBJet: inconsistent shapes");
  if (!all_finite(v.x) || !all_finite(v.y) || !all_finite(v.F) || !all_finite(v.G))
    throw ShapeError("VBJet: non-finite entries");
}

// Largest deviation of B[j] from its transpose.
inline double symmetry_defect(const Ten3& B) {
  double r = 0.0;
  for (int j = 0; j < B.n0; ++j)
    for (int a = 0; a < B.n1; ++a)
      for (int b = a + 1; b < B.n2; ++b)
        r = std::max(r, std::abs(B(j, a, b) - B(j, b, a)));
  return r;
}

inline void symmetrize(Ten3& B) {
  for (int j = 0; j < B.n0; ++j)
    for (int a = 0; a < B.n1; ++a)
      for (int b = a + 1; b < B.n2; ++b) {
        double v = 0.5 * (B(j, a, b) + B(j, b, a));
        B(j, a, b) = v;
        B(j, b, a) = v;
      }
}

// ---------------------------------------------------------------------------
// Constructors from smooth maps (all at the source origin)

inline Jet1 jet1_of(const SmoothMap& map) {
  Jet1 j;
  j.p = map.arity_in;
  j.m = map.arity_out;
  SecondOrderData d = second_order(map, Vec(static_cast<std::size_t>(map.arity_in), 0.0));
  j.x = std::move(d.value);
  j.X = std::move(d.jac);
  validate(j);
  return j;
}

inline Jet2 jet2_of(const SmoothMap& map) {
  if (map.arity_in % 2 != 0)
    throw ShapeError("jet2_of needs a map on R^(2p), got arity " + std::to_string(map.arity_in));
  Jet2 j;
  j.p = map.arity_in / 2;
  j.m = map.arity_out;
  SecondOrderData d = second_order(map, Vec(static_cast<std::size_t>(map.arity_in), 0.0));
  j.x = std::move(d.value);
  j.A = std::move(d.jac);
  j.B = std::move(d.hess);
  symmetrize(j.B);
  validate(j);
  return j;
}

// Extracts the quadruple (x, X, Y, C) directly from the same second-order
// data the quotient map reads, so this agrees bit for bit with
// lambda(jet2_of(map)).
inline DoubleJet doublejet_of(const SmoothMap& map) {
  if (map.arity_in % 2 != 0)
    throw ShapeError("doublejet_of needs a map on R^(2p), got arity " +
                     std::to_string(map.arity_in));
  const int p = map.arity_in / 2;
  const int m = map.arity_out;
  SecondOrderData d = second_order(map, Vec(static_cast<std::size_t>(map.arity_in), 0.0));
  DoubleJet v;
  v.p = p;
  v.m = m;
  v.x = std::move(d.value);
  v.X = Mat(m, p);
  v.Y = Mat(m, p);
  v.C = Ten3(m, p, p);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < p; ++a) {
      v.X(i, a) = d.jac(i, p + a);
      v.Y(i, a) = d.jac(i, a);
      for (int b = 0; b < p; ++b) v.C(i, a, b) = d.hess(i, a, p + b);
    }
  validate(v);
  return v;
}

inline VBJet vbjet_of(const SmoothMap& base_map, const SmoothMap& fiber_map) {
  if (base_map.arity_in != fiber_map.arity_in)
    throw ShapeError("vbjet_of: base and fiber maps need the same source arity");
  Jet1 base = jet1_of(base_map);
  Jet1 fiber = jet1_of(fiber_map);
  VBJet v;
  v.p = base.p;
  v.m = base.m;
  v.k = fiber.m;
  v.x = std::move(base.x);
  v.y = std::move(fiber.x);
  v.F = std::move(base.X);
  v.G = std::move(fiber.X);
  validate(v);
  return v;
}

// The quadratic representative x + A.u + (1/2) u^T B u as a DSL map; taking
// its 2-jet reproduces the input exactly.
inline SmoothMap jet2_representative(const Jet2& j) {
  validate(j);
  const int p = j.p;
  const int n = 2 * p;
  auto var = [&](int slot) {
    return slot < p ? make_variable('u', slot + 1, slot)
                    : make_variable('w', slot - p + 1, slot);
  };
  SmoothMap map;
  map.arity_in = n;
  map.arity_out = j.m;
  for (int i = 0; i < j.m; ++i) {
    ExprPtr e = make_constant(j.x[static_cast<std::size_t>(i)]);
    for (int a = 0; a < n; ++a) {
      if (j.A(i, a) == 0.0) continue;
      e = make_binary(ExprOp::Add, e,
                      make_binary(ExprOp::Mul, make_constant(j.A(i, a)), var(a)));
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        // the two mirrored entries collapse into one term
        double coeff = (a == b) ? 0.5 * j.B(i, a, a) : j.B(i, a, b);
        if (coeff == 0.0) continue;
        e = make_binary(ExprOp::Add, e,
                        make_binary(ExprOp::Mul, make_constant(coeff),
                                    make_binary(ExprOp::Mul, var(a), var(b))));
      }
    }
    map.components.push_back(e);
  }
  return map;
}

// ---------------------------------------------------------------------------
// Equality: componentwise within tolerance; dimension mismatch is an error,
// not inequality.

inline double max_abs_diff(const Jet1& a, const Jet1& b) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("Jet1 dimension mismatch");
  return std::max(max_abs_diff(a.x, b.x), max_abs_diff(a.X, b.X));
}

inline double max_abs_diff(const Jet2& a, const Jet2& b) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("Jet2 dimension mismatch");
  double r = max_abs_diff(a.x, b.x);
  r = std::max(r, max_abs_diff(a.A, b.A));
  return std::max(r, max_abs_diff(a.B, b.B));
}

inline double max_abs_diff(const DoubleJet& a, const DoubleJet& b) {
  if (a.p != b.p || a.m != b.m) throw ShapeError("DoubleJet dimension mismatch");
  double r = max_abs_diff(a.x, b.x);
  r = std::max(r, max_abs_diff(a.X, b.X));
  r = std::max(r, max_abs_diff(a.Y, b.Y));
  return std::max(r, max_abs_diff(a.C, b.C));
}

inline double max_abs_diff(const VBJet& a, const VBJet& b) {
  if (a.p != b.p || a.m != b.m || a.k != b.k) throw ShapeError("VBJet dimension mismatch");
  double r = max_abs_diff(a.x, b.x);
  r = std::max(r, max_abs_diff(a.y, b.y));
  r = std::max(r, max_abs_diff(a.F, b.F));
  return std::max(r, max_abs_diff(a.G, b.G));
}

template <class JetT>
bool jets_equal(const JetT& a, const JetT& b, double tol = kJetEqualityTol) {
  return max_abs_diff(a, b) <= tol;
}

}  // namespace jetcalc
