#pragma once

// Exact value/Jacobian/Hessian extraction via order-2 truncated polynomial
// arithmetic, plus a central-difference oracle used only for cross-checks.
//
// A sweep propagates a scalar truncated at total degree 2 in two formal
// directions (s, t). The sweep over directions (e_a, e_b) yields the mixed
// partial d2f/dx_a dx_b as the st-coefficient; n(n+1)/2 sweeps over a <= b
// fill the Hessian, the mirrored entries coming from symmetry.

#include <cmath>
#include <string>

#include "jetcalc/errors.hpp"
#include "jetcalc/expr.hpp"
#include "jetcalc/linalg.hpp"

namespace jetcalc {

struct SecondOrderData {
  Vec value;  // m
  Mat jac;    // m x n, jac(i, a) = df_i/dx_a
  Ten3 hess;  // m x n x n, hess(i, a, b) = d2f_i/dx_a dx_b, symmetric
};

namespace detail {

// f(x + s*d1 + t*d2) = v + ds*s + dt*t + dss*s^2 + dst*st + dtt*t^2 + O(3).
struct Trunc2 {
  double v = 0, ds = 0, dt = 0, dss = 0, dst = 0, dtt = 0;
};

inline void check_finite(const Trunc2& x, const char* op) {
  if (!(std::isfinite(x.v) && std::isfinite(x.ds) && std::isfinite(x.dt) &&
        std::isfinite(x.dss) && std::isfinite(x.dst) && std::isfinite(x.dtt)))
    throw DomainError(op, std::string(op) + ": non-finite derivative data");
}

inline Trunc2 t2_add(const Trunc2& a, const Trunc2& b) {
  return {a.v + b.v, a.ds + b.ds, a.dt + b.dt, a.dss + b.dss, a.dst + b.dst, a.dtt + b.dtt};
}

inline Trunc2 t2_sub(const Trunc2& a, const Trunc2& b) {
  return {a.v - b.v, a.ds - b.ds, a.dt - b.dt, a.dss - b.dss, a.dst - b.dst, a.dtt - b.dtt};
}

inline Trunc2 t2_neg(const Trunc2& a) {
  return {-a.v, -a.ds, -a.dt, -a.dss, -a.dst, -a.dtt};
}

inline Trunc2 t2_mul(const Trunc2& a, const Trunc2& b) {
  Trunc2 r;
  r.v = a.v * b.v;
  r.ds = a.v * b.ds + a.ds * b.v;
  r.dt = a.v * b.dt + a.dt * b.v;
  r.dss = a.v * b.dss + a.ds * b.ds + a.dss * b.v;
  r.dst = a.v * b.dst + a.ds * b.dt + a.dt * b.ds + a.dst * b.v;
  r.dtt = a.v * b.dtt + a.dt * b.dt + a.dtt * b.v;
  return r;
}

// f(g) for scalar f with f(g.v) = f0, f'(g.v) = f1, f''(g.v) = f2.
inline Trunc2 t2_chain(const Trunc2& g, double f0, double f1, double f2) {
  Trunc2 r;
  r.v = f0;
  r.ds = f1 * g.ds;
  r.dt = f1 * g.dt;
  r.dss = f1 * g.dss + 0.5 * f2 * g.ds * g.ds;
  r.dst = f1 * g.dst + f2 * g.ds * g.dt;
  r.dtt = f1 * g.dtt + 0.5 * f2 * g.dt * g.dt;
  return r;
}

inline Trunc2 t2_div(const Trunc2& a, const Trunc2& b) {
  if (b.v == 0.0) throw DomainError("/", "division by zero");
  double inv = 1.0 / b.v;
  Trunc2 r = t2_mul(a, t2_chain(b, inv, -inv * inv, 2.0 * inv * inv * inv));
  return r;
}

inline Trunc2 t2_ipow(const Trunc2& x, long long k) {
  // k >= 1
  Trunc2 r = x, b = x;
  --k;
  while (k > 0) {
    if (k & 1) r = t2_mul(r, b);
    b = t2_mul(b, b);
    k >>= 1;
  }
  return r;
}

inline Trunc2 t2_pow(const Trunc2& x, double c) {
  if (is_integer_exponent(c)) {
    long long k = static_cast<long long>(c);
    if (k == 0) return {1.0, 0, 0, 0, 0, 0};
    if (k < 0) {
      if (x.v == 0.0) throw DomainError("^", "zero base with negative exponent");
      Trunc2 one{1.0, 0, 0, 0, 0, 0};
      return t2_div(one, t2_ipow(x, -k));
    }
    return t2_ipow(x, k);
  }
  if (x.v <= 0.0) throw DomainError("^", "non-integer exponent needs a positive base");
  double f0 = std::pow(x.v, c);
  double f1 = c * std::pow(x.v, c - 1.0);
  double f2 = c * (c - 1.0) * std::pow(x.v, c - 2.0);
  return t2_chain(x, f0, f1, f2);
}

inline Trunc2 t2_eval(const ExprNode& n, const std::vector<Trunc2>& vars) {
  switch (n.op) {
    case ExprOp::Constant:
      return {n.value, 0, 0, 0, 0, 0};
    case ExprOp::Variable:
      return vars[static_cast<std::size_t>(n.slot)];
    case ExprOp::Add: {
      Trunc2 r = t2_add(t2_eval(*n.a, vars), t2_eval(*n.b, vars));
      check_finite(r, "+");
      return r;
    }
    case ExprOp::Sub: {
      Trunc2 r = t2_sub(t2_eval(*n.a, vars), t2_eval(*n.b, vars));
      check_finite(r, "-");
      return r;
    }
    case ExprOp::Mul: {
      Trunc2 r = t2_mul(t2_eval(*n.a, vars), t2_eval(*n.b, vars));
      check_finite(r, "*");
      return r;
    }
    case ExprOp::Div: {
      Trunc2 r = t2_div(t2_eval(*n.a, vars), t2_eval(*n.b, vars));
      check_finite(r, "/");
      return r;
    }
    case ExprOp::Pow: {
      Trunc2 r = t2_pow(t2_eval(*n.a, vars), n.value);
      check_finite(r, "^");
      return r;
    }
    case ExprOp::Neg:
      return t2_neg(t2_eval(*n.a, vars));
    case ExprOp::Sin: {
      Trunc2 g = t2_eval(*n.a, vars);
      double s = std::sin(g.v), c = std::cos(g.v);
      return t2_chain(g, s, c, -s);
    }
    case ExprOp::Cos: {
      Trunc2 g = t2_eval(*n.a, vars);
      double s = std::sin(g.v), c = std::cos(g.v);
      return t2_chain(g, c, -s, -c);
    }
    case ExprOp::Exp: {
      Trunc2 g = t2_eval(*n.a, vars);
      double e = std::exp(g.v);
      Trunc2 r = t2_chain(g, e, e, e);
      check_finite(r, "exp");
      return r;
    }
    case ExprOp::Log: {
      Trunc2 g = t2_eval(*n.a, vars);
      if (g.v <= 0.0) throw DomainError("log", "log of a non-positive value");
      double inv = 1.0 / g.v;
      return t2_chain(g, std::log(g.v), inv, -inv * inv);
    }
    case ExprOp::Sqrt: {
      Trunc2 g = t2_eval(*n.a, vars);
      if (g.v < 0.0) throw DomainError("sqrt", "sqrt of a negative value");
      double rt = std::sqrt(g.v);
      Trunc2 r = t2_chain(g, rt, 0.5 / rt, -0.25 / (rt * g.v));
      check_finite(r, "sqrt");
      return r;
    }
    case ExprOp::Tanh: {
      Trunc2 g = t2_eval(*n.a, vars);
      double th = std::tanh(g.v);
      double sech2 = 1.0 - th * th;
      return t2_chain(g, th, sech2, -2.0 * th * sech2);
    }
  }
  throw Error("internal", "unreachable expression op");
}

// One sweep of the whole map along directions (e_a, e_b); out[i] receives the
// component-i scalar. Domain errors carry the failing component.
inline void sweep(const SmoothMap& map, const Vec& point, int a, int b,
                  std::vector<Trunc2>& out) {
  const int n = map.arity_in;
  // a == b works too: x_a picks up s + t and the st-coefficient is d2f/dx_a^2.
  std::vector<Trunc2> vars(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    vars[i].v = point[static_cast<std::size_t>(i)];
    vars[i].ds = (i == a) ? 1.0 : 0.0;
    vars[i].dt = (i == b) ? 1.0 : 0.0;
  }
  out.resize(map.components.size());
  for (std::size_t i = 0; i < map.components.size(); ++i) {
    try {
      out[i] = t2_eval(*map.components[i], vars);
    } catch (DomainError& e) {
      if (e.component < 0) e.component = static_cast<int>(i);
      throw;
    }
  }
}

}  // namespace detail

// The vector of mixed partials d2f_i/dx_a dx_b from a single sweep. Exposed
// so symmetry can be probed through two independent sweeps.
inline Vec mixed_partial(const SmoothMap& map, const Vec& point, int a, int b) {
  if (static_cast<int>(point.size()) != map.arity_in)
    throw ShapeError("point size does not match map arity");
  if (a < 0 || a >= map.arity_in || b < 0 || b >= map.arity_in)
    throw ShapeError("direction index out of range");
  std::vector<detail::Trunc2> out;
  detail::sweep(map, point, a, b, out);
  Vec r(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].dst;
  return r;
}

// Exact (to rounding) value, Jacobian, and Hessian at `point`.
inline SecondOrderData second_order(const SmoothMap& map, const Vec& point) {
  if (static_cast<int>(point.size()) != map.arity_in)
    throw ShapeError("point size " + std::to_string(point.size()) +
                     " does not match map arity " + std::to_string(map.arity_in));
  const int n = map.arity_in;
  const int m = map.arity_out;
  SecondOrderData d;
  d.value = Vec(static_cast<std::size_t>(m));
  d.jac = Mat(m, n);
  d.hess = Ten3(m, n, n);
  std::vector<detail::Trunc2> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      detail::sweep(map, point, a, b, out);
      for (int i = 0; i < m; ++i) {
        d.hess(i, a, b) = out[static_cast<std::size_t>(i)].dst;
        d.hess(i, b, a) = out[static_cast<std::size_t>(i)].dst;
      }
      if (a == b) {
        for (int i = 0; i < m; ++i) {
          // along (e_a, e_a) the s-coefficient is df/dx_a
          d.jac(i, a) = out[static_cast<std::size_t>(i)].ds;
          if (a == 0) d.value[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i)].v;
        }
      }
    }
  }
  return d;
}

inline constexpr double kDefaultFdStep = 1e-4;

// Central differences, O(h^2). A cross-check oracle, never the primary path.
inline SecondOrderData fd_second_order(const SmoothMap& map, const Vec& point,
                                       double h = kDefaultFdStep) {
  if (!(h > 0.0)) throw ShapeError("finite-difference step must be positive");
  if (static_cast<int>(point.size()) != map.arity_in)
    throw ShapeError("point size does not match map arity");
  const int n = map.arity_in;
  const int m = map.arity_out;

  auto at = [&](int a, double da, int b, double db) {
    Vec x = point;
    x[static_cast<std::size_t>(a)] += da;
    x[static_cast<std::size_t>(b)] += db;
    return eval(map, x);
  };

  SecondOrderData d;
  d.value = eval(map, point);
  d.jac = Mat(m, n);
  d.hess = Ten3(m, n, n);
  for (int a = 0; a < n; ++a) {
    Vec fp = at(a, h, a, 0.0);
    Vec fm = at(a, -h, a, 0.0);
    for (int i = 0; i < m; ++i) {
      d.jac(i, a) = (fp[static_cast<std::size_t>(i)] - fm[static_cast<std::size_t>(i)]) / (2.0 * h);
      d.hess(i, a, a) = (fp[static_cast<std::size_t>(i)] - 2.0 * d.value[static_cast<std::size_t>(i)] +
                         fm[static_cast<std::size_t>(i)]) /
                        (h * h);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Vec fpp = at(a, h, b, h);
      Vec fpm = at(a, h, b, -h);
      Vec fmp = at(a, -h, b, h);
      Vec fmm = at(a, -h, b, -h);
      for (int i = 0; i < m; ++i) {
        double v = (fpp[static_cast<std::size_t>(i)] - fpm[static_cast<std::size_t>(i)] -
                    fmp[static_cast<std::size_t>(i)] + fmm[static_cast<std::size_t>(i)]) /
                   (4.0 * h * h);
        d.hess(i, a, b) = v;
        d.hess(i, b, a) = v;
      }
    }
  }
  return d;
}

}  // namespace jetcalc
