#pragma once

// Canonical maps between jet spaces.
//
//   flip_jet2      the involution induced by (u, w) -> (w, u) on the source:
//                  swaps A's column blocks and conjugates B by the same
//                  permutation.
//   lambda         the quotient onto double jets: keeps x, the two
//                  first-derivative blocks, and the mixed uw-block of B;
//                  the pure uu- and ww-blocks are forgotten.
//   lambda_section right inverse of lambda (zero forgotten blocks, mirror
//                  the mixed block to keep B symmetric).
//   ell            the double-jet involution: swaps the two velocity slots
//                  and transposes the mixed-derivative block. Satisfies
//                  ell(lambda(j)) = lambda(flip_jet2(j)).
//   prolong1/2/double
//                  transport of jets under a chart map h via first/second
//                  order chain rules; the second derivatives of h always
//                  come from the truncated-polynomial engine.

#include <string>

#include "jetcalc/bundle.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/expr.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/linalg.hpp"
#include "jetcalc/taylor.hpp"

namespace jetcalc {

namespace detail {

// Source-slot permutation swapping the u-half and w-half.
inline int flip_slot(int s, int p) { return s < p ? s + p : s - p; }

}  // namespace detail

inline Jet2 flip_jet2(const Jet2& j) {
  validate(j);
  const int p = j.p;
  Jet2 r;
  r.p = p;
  r.m = j.m;
  r.x = j.x;
  r.A = Mat(j.m, 2 * p);
  r.B = Ten3(j.m, 2 * p, 2 * p);
  for (int i = 0; i < j.m; ++i)
    for (int a = 0; a < 2 * p; ++a) {
      r.A(i, a) = j.A(i, detail::flip_slot(a, p));
      for (int b = 0; b < 2 * p; ++b)
        r.B(i, a, b) = j.B(i, detail::flip_slot(a, p), detail::flip_slot(b, p));
    }
  return r;
}

inline DoubleJet lambda(const Jet2& j) {
  validate(j);
  const int p = j.p;
  DoubleJet v;
  v.p = p;
  v.m = j.m;
  v.x = j.x;
  v.X = Mat(j.m, p);
  v.Y = Mat(j.m, p);
  v.C = Ten3(j.m, p, p);
  for (int i = 0; i < j.m; ++i)
    for (int a = 0; a < p; ++a) {
      v.X(i, a) = j.A(i, p + a);
      v.Y(i, a) = j.A(i, a);
      for (int b = 0; b < p; ++b) v.C(i, a, b) = j.B(i, a, p + b);
    }
  return v;
}

// Constructive witness that lambda is onto: lambda(lambda_section(v)) == v.
inline Jet2 lambda_section(const DoubleJet& v) {
  validate(v);
  const int p = v.p;
  Jet2 j;
  j.p = p;
  j.m = v.m;
  j.x = v.x;
  j.A = Mat(v.m, 2 * p);
  j.B = Ten3(v.m, 2 * p, 2 * p);
  for (int i = 0; i < v.m; ++i)
    for (int a = 0; a < p; ++a) {
      j.A(i, a) = v.Y(i, a);
      j.A(i, p + a) = v.X(i, a);
      for (int b = 0; b < p; ++b) {
        j.B(i, a, p + b) = v.C(i, a, b);
        j.B(i, p + b, a) = v.C(i, a, b);
      }
    }
  return j;
}

inline DoubleJet ell(const DoubleJet& v) {
  validate(v);
  DoubleJet r;
  r.p = v.p;
  r.m = v.m;
  r.x = v.x;
  r.X = v.Y;
  r.Y = v.X;
  r.C = Ten3(v.m, v.p, v.p);
  for (int i = 0; i < v.m; ++i)
    for (int a = 0; a < v.p; ++a)
      for (int b = 0; b < v.p; ++b) r.C(i, a, b) = v.C(i, b, a);
  return r;
}

// ---------------------------------------------------------------------------
// Prolongations

inline Jet1 prolong1(const SmoothMap& h, const Jet1& j) {
  validate(j);
  if (h.arity_in != j.m)
    throw ShapeError("prolong1: map arity " + std::to_string(h.arity_in) +
                     " does not match jet target dimension " + std::to_string(j.m));
  SecondOrderData d = second_order(h, j.x);
  Jet1 r;
  r.p = j.p;
  r.m = h.arity_out;
  r.x = std::move(d.value);
  r.X = matmul(d.jac, j.X);
  return r;
}

inline Jet2 prolong2(const SmoothMap& h, const Jet2& j) {
  validate(j);
  if (h.arity_in != j.m)
    throw ShapeError("prolong2: map arity does not match jet target dimension");
  const int m = j.m;
  const int q = h.arity_out;
  const int n2 = 2 * j.p;
  SecondOrderData d = second_order(h, j.x);
  Jet2 r;
  r.p = j.p;
  r.m = q;
  r.x = std::move(d.value);
  r.A = matmul(d.jac, j.A);
  r.B = Ten3(q, n2, n2);
  for (int i = 0; i < q; ++i)
    for (int a = 0; a < n2; ++a)
      for (int b = a; b < n2; ++b) {
        double s = 0.0;
        for (int jj = 0; jj < m; ++jj) s += d.jac(i, jj) * j.B(jj, a, b);
        for (int jj = 0; jj < m; ++jj)
          for (int ll = 0; ll < m; ++ll)
            s += d.hess(i, jj, ll) * j.A(jj, a) * j.A(ll, b);
        r.B(i, a, b) = s;
        r.B(i, b, a) = s;
      }
  return r;
}

inline DoubleJet prolong_double(const SmoothMap& h, const DoubleJet& v) {
  validate(v);
  if (h.arity_in != v.m)
    throw ShapeError("prolong_double: map arity does not match jet target dimension");
  const int m = v.m;
  const int q = h.arity_out;
  const int p = v.p;
  SecondOrderData d = second_order(h, v.x);
  DoubleJet r;
  r.p = p;
  r.m = q;
  r.x = std::move(d.value);
  r.X = matmul(d.jac, v.X);
  r.Y = matmul(d.jac, v.Y);
  r.C = Ten3(q, p, p);
  for (int i = 0; i < q; ++i)
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) {
        double s = 0.0;
        for (int jj = 0; jj < m; ++jj) s += d.jac(i, jj) * v.C(jj, a, b);
        for (int jj = 0; jj < m; ++jj)
          for (int ll = 0; ll < m; ++ll)
            s += d.hess(i, jj, ll) * v.Y(jj, a) * v.X(ll, b);
        r.C(i, a, b) = s;
      }
  return r;
}

}  // namespace jetcalc
