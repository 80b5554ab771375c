#pragma once

// Randomized property suite: executes every law the library promises over
// generated maps, jets, and chart maps, and reports machine-readable results.
//
// Determinism: every law draws from its own generator seeded from
// (config.seed, law name), so a fixed seed yields bit-identical reports no
// matter which subset of laws runs or in which order.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "jetcalc/bundle.hpp"
#include "jetcalc/canon.hpp"
#include "jetcalc/errors.hpp"
#include "jetcalc/expr.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/json_io.hpp"
#include "jetcalc/linalg.hpp"
#include "jetcalc/taylor.hpp"

namespace jetcalc {

struct SuiteConfig {
  std::uint64_t seed = 42;
  int trials = 100;
  double tol_exact = 1e-12;
  double tol_transcendental = 1e-10;
  double tol_fd = 1e-6;
  double fd_step = 1e-4;
  int p_min = 1, p_max = 3;
  int m_min = 1, m_max = 4;
  int k_min = 1, k_max = 3;
  double value_lo = -2.0, value_hi = 2.0;
};

inline void validate(const SuiteConfig& c) {
  if (c.trials < 1) throw ShapeError("suite config: trials must be >= 1");
  if (!(c.tol_exact > 0) || !(c.tol_transcendental > 0) || !(c.tol_fd > 0) ||
      !(c.fd_step > 0))
    throw ShapeError("suite config: tolerances and fd step must be positive");
  if (c.p_min < 1 || c.p_min > c.p_max || c.m_min < 1 || c.m_min > c.m_max ||
      c.k_min < 1 || c.k_min > c.k_max)
    throw ShapeError("suite config: dimension ranges must be nonempty");
  if (!(c.value_lo < c.value_hi)) throw ShapeError("suite config: empty value range");
}

struct LawReport {
  std::string law;
  int trials = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
  json counterexample;  // null unless failing
};

inline json to_json(const LawReport& r) {
  json j{{"law", r.law},          {"trials", r.trials},
         {"max_residual", r.max_residual}, {"tolerance", r.tolerance},
         {"pass", r.pass},        {"seed", r.seed}};
  if (!r.pass) j["counterexample"] = r.counterexample;
  return j;
}

inline json to_json(const std::vector<LawReport>& reports) {
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

// Test hooks: swapping in a sabotaged involution lets the suite prove its own
// sensitivity. The shipped runner never sets these.
struct Hooks {
  std::function<DoubleJet(const DoubleJet&)> ell;
};

// Involutions must hold to representation accuracy, independent of the
// configurable tolerances.
inline constexpr double kInvolutionTol = 1e-15;

// ---------------------------------------------------------------------------
// Deterministic random generation (not distribution-library based, so that
// identical seeds give identical streams on every platform)

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t bits() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double real(double lo, double hi) {
    double u = static_cast<double>(bits() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  int integer(int lo, int hi) {
    return lo + static_cast<int>(bits() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace gen {

inline Vec vec(Rng& rng, int n, double lo, double hi) {
  Vec v(static_cast<std::size_t>(n));
  for (auto& e : v) e = rng.real(lo, hi);
  return v;
}

inline Mat mat(Rng& rng, int rows, int cols, double lo, double hi) {
  Mat m(rows, cols);
  for (auto& e : m.data) e = rng.real(lo, hi);
  return m;
}

inline Ten3 ten3(Rng& rng, int n0, int n1, int n2, double lo, double hi) {
  Ten3 t(n0, n1, n2);
  for (auto& e : t.data) e = rng.real(lo, hi);
  return t;
}

inline Jet1 jet1(Rng& rng, const SuiteConfig& c, int p, int m) {
  Jet1 j;
  j.p = p;
  j.m = m;
  j.x = vec(rng, m, c.value_lo, c.value_hi);
  j.X = mat(rng, m, p, c.value_lo, c.value_hi);
  return j;
}

inline Jet2 jet2(Rng& rng, const SuiteConfig& c, int p, int m) {
  Jet2 j;
  j.p = p;
  j.m = m;
  j.x = vec(rng, m, c.value_lo, c.value_hi);
  j.A = mat(rng, m, 2 * p, c.value_lo, c.value_hi);
  j.B = Ten3(m, 2 * p, 2 * p);
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < 2 * p; ++a)
      for (int b = a; b < 2 * p; ++b) {
        double v = rng.real(c.value_lo, c.value_hi);
        j.B(i, a, b) = v;
        j.B(i, b, a) = v;
      }
  return j;
}

inline DoubleJet doublejet(Rng& rng, const SuiteConfig& c, int p, int m) {
  DoubleJet v;
  v.p = p;
  v.m = m;
  v.x = vec(rng, m, c.value_lo, c.value_hi);
  v.X = mat(rng, m, p, c.value_lo, c.value_hi);
  v.Y = mat(rng, m, p, c.value_lo, c.value_hi);
  v.C = ten3(rng, m, p, p, c.value_lo, c.value_hi);
  return v;
}

inline VBJet vbjet(Rng& rng, const SuiteConfig& c, int p, int m, int k) {
  VBJet v;
  v.p = p;
  v.m = m;
  v.k = k;
  v.x = vec(rng, m, c.value_lo, c.value_hi);
  v.y = vec(rng, k, c.value_lo, c.value_hi);
  v.F = mat(rng, m, p, c.value_lo, c.value_hi);
  v.G = mat(rng, k, p, c.value_lo, c.value_hi);
  return v;
}

// --------------------------------------------------------------------------
// Random DSL maps: bounded-depth expression trees over the operator set.
// log and sqrt are excluded (generated maps are anchored at the origin);
// division only appears in Mode::Full, where rejection filters the poles.

enum class Mode { Polynomial, Total, Full };

inline ExprPtr expr_tree(Rng& rng, int n, int depth, Mode mode, bool split_vars) {
  auto variable = [&] {
    int slot = rng.integer(0, n - 1);
    if (split_vars) {
      int p = n / 2;
      return slot < p ? make_variable('u', slot + 1, slot)
                      : make_variable('w', slot - p + 1, slot);
    }
    return make_variable('x', slot + 1, slot);
  };
  if (depth <= 0 || rng.integer(0, 99) < 20) {
    if (rng.integer(0, 99) < 70) return variable();
    return make_constant(rng.real(-2.0, 2.0));
  }
  struct Choice {
    ExprOp op;
    int weight;
    bool binary;
  };
  static const Choice kPoly[] = {
      {ExprOp::Add, 4, true}, {ExprOp::Sub, 3, true}, {ExprOp::Mul, 4, true},
      {ExprOp::Neg, 2, false}, {ExprOp::Pow, 2, false},
  };
  static const Choice kTotal[] = {
      {ExprOp::Add, 4, true},  {ExprOp::Sub, 3, true},  {ExprOp::Mul, 4, true},
      {ExprOp::Neg, 2, false}, {ExprOp::Pow, 2, false}, {ExprOp::Sin, 2, false},
      {ExprOp::Cos, 2, false}, {ExprOp::Tanh, 2, false}, {ExprOp::Exp, 1, false},
  };
  static const Choice kFull[] = {
      {ExprOp::Add, 4, true},  {ExprOp::Sub, 3, true},  {ExprOp::Mul, 4, true},
      {ExprOp::Div, 1, true},  {ExprOp::Neg, 2, false}, {ExprOp::Pow, 2, false},
      {ExprOp::Sin, 2, false}, {ExprOp::Cos, 2, false}, {ExprOp::Tanh, 2, false},
      {ExprOp::Exp, 1, false},
  };
  const Choice* table = kPoly;
  int count = 5;
  if (mode == Mode::Total) {
    table = kTotal;
    count = 9;
  } else if (mode == Mode::Full) {
    table = kFull;
    count = 10;
  }
  int total_weight = 0;
  for (int i = 0; i < count; ++i) total_weight += table[i].weight;
  int pick = rng.integer(0, total_weight - 1);
  const Choice* ch = table;
  for (int i = 0; i < count; ++i) {
    if (pick < table[i].weight) {
      ch = &table[i];
      break;
    }
    pick -= table[i].weight;
  }
  if (ch->op == ExprOp::Pow)
    return make_pow(expr_tree(rng, n, depth - 1, mode, split_vars),
                    static_cast<double>(rng.integer(2, 3)));
  ExprPtr a = expr_tree(rng, n, depth - 1, mode, split_vars);
  if (!ch->binary) return make_unary(ch->op, a);
  return make_binary(ch->op, a, expr_tree(rng, n, depth - 1, mode, split_vars));
}

inline double data_magnitude(const SecondOrderData& d) {
  double r = 0.0;
  for (double v : d.value) r = std::max(r, std::abs(v));
  for (double v : d.jac.data) r = std::max(r, std::abs(v));
  for (double v : d.hess.data) r = std::max(r, std::abs(v));
  return r;
}

// max componentwise |a - b| / (1 + |a|) over value, Jacobian, and Hessian.
inline double data_rel_diff(const SecondOrderData& a, const SecondOrderData& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.value.size(); ++i)
    r = std::max(r, std::abs(a.value[i] - b.value[i]) / (1.0 + std::abs(a.value[i])));
  for (std::size_t i = 0; i < a.jac.data.size(); ++i)
    r = std::max(r, std::abs(a.jac.data[i] - b.jac.data[i]) / (1.0 + std::abs(a.jac.data[i])));
  for (std::size_t i = 0; i < a.hess.data.size(); ++i)
    r = std::max(r,
                 std::abs(a.hess.data[i] - b.hess.data[i]) / (1.0 + std::abs(a.hess.data[i])));
  return r;
}

// A random map whose second-order data at the origin is finite and bounded.
inline SmoothMap map(Rng& rng, int n, int m, Mode mode, bool split_vars = false,
                     int max_depth = 4, double bound = 50.0) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    SmoothMap candidate;
    candidate.arity_in = n;
    candidate.arity_out = m;
    for (int i = 0; i < m; ++i)
      candidate.components.push_back(
          expr_tree(rng, n, rng.integer(1, max_depth), mode, split_vars));
    try {
      SecondOrderData d = second_order(candidate, Vec(static_cast<std::size_t>(n), 0.0));
      if (data_magnitude(d) <= bound) return candidate;
    } catch (const DomainError&) {
    }
  }
  // deterministic fallback, always within bounds
  SmoothMap fallback;
  fallback.arity_in = n;
  fallback.arity_out = m;
  auto var = [&](int slot) {
    if (split_vars) {
      int p = n / 2;
      return slot < p ? make_variable('u', slot + 1, slot)
                      : make_variable('w', slot - p + 1, slot);
    }
    return make_variable('x', slot + 1, slot);
  };
  for (int i = 0; i < m; ++i) {
    ExprPtr e = make_binary(
        ExprOp::Add, make_constant(rng.real(-1.0, 1.0)),
        make_binary(ExprOp::Mul, make_constant(rng.real(-1.0, 1.0)), var(i % n)));
    e = make_binary(ExprOp::Add, e,
                    make_binary(ExprOp::Mul, var(i % n), var((i + 1) % n)));
    fallback.components.push_back(e);
  }
  return fallback;
}

}  // namespace gen

// ---------------------------------------------------------------------------
// Law registry

struct LawDef {
  std::string name;
  std::function<LawReport(const SuiteConfig&, const Hooks&)> run;
};

namespace detail {

inline DoubleJet apply_ell(const Hooks& hooks, const DoubleJet& v) {
  return hooks.ell ? hooks.ell(v) : ell(v);
}

inline std::uint64_t law_seed(const SuiteConfig& cfg, const std::string& name) {
  return cfg.seed * 0x9E3779B97F4A7C15ULL ^ fnv1a(name);
}

// Runs `trial` config.trials times; stops at the first violation and attaches
// its replayable inputs.
template <class Trial>
LawReport run_trials(const std::string& name, double tol, const SuiteConfig& cfg,
                     Trial&& trial) {
  LawReport rep;
  rep.law = name;
  rep.tolerance = tol;
  rep.seed = cfg.seed;
  Rng rng(law_seed(cfg, name));
  for (int t = 0; t < cfg.trials; ++t) {
    auto [residual, payload] = trial(rng);
    rep.trials = t + 1;
    if (residual > rep.max_residual || !(residual == residual))
      rep.max_residual = residual;
    if (!(residual <= tol)) {
      rep.pass = false;
      payload["trial"] = t;
      payload["residual"] = residual;
      rep.counterexample = std::move(payload);
      break;
    }
  }
  return rep;
}

struct TrialResult {
  double residual;
  json payload;
};

// ---- structure adapters for the vector-bundle axioms ----------------------

struct Jet1Axioms {
  using V = Jet1;
  static constexpr const char* kName = "vb_axioms_jet1";
  static std::array<V, 3> anchored_triple(Rng& rng, const SuiteConfig& c) {
    int p = rng.integer(c.p_min, c.p_max), m = rng.integer(c.m_min, c.m_max);
    std::array<V, 3> t{gen::jet1(rng, c, p, m), gen::jet1(rng, c, p, m),
                       gen::jet1(rng, c, p, m)};
    t[1].x = t[0].x;
    t[2].x = t[0].x;
    return t;
  }
  static V combine(const V& a, const V& b, double lam) { return jet1_combine(a, b, lam); }
  static V zero(const V& a) { return jet1_zero_fiber(a); }
  static double anchor_drift(const V& r, const V& a) { return max_abs_diff(r.x, a.x); }
  static json payload(const V& v) { return to_json(v); }
};

struct VbPrimaryAxioms {
  using V = VBJet;
  static constexpr const char* kName = "vb_axioms_vb_primary";
  static std::array<V, 3> anchored_triple(Rng& rng, const SuiteConfig& c) {
    int p = rng.integer(c.p_min, c.p_max), m = rng.integer(c.m_min, c.m_max),
        k = rng.integer(c.k_min, c.k_max);
    std::array<V, 3> t{gen::vbjet(rng, c, p, m, k), gen::vbjet(rng, c, p, m, k),
                       gen::vbjet(rng, c, p, m, k)};
    for (int i : {1, 2}) {
      t[i].x = t[0].x;
      t[i].y = t[0].y;
    }
    return t;
  }
  static V combine(const V& a, const V& b, double lam) {
    return vb_primary_combine(a, b, lam);
  }
  static V zero(const V& a) { return vb_primary_zero_fiber(a); }
  static double anchor_drift(const V& r, const V& a) {
    return std::max(max_abs_diff(r.x, a.x), max_abs_diff(r.y, a.y));
  }
  static json payload(const V& v) { return to_json(v); }
};

struct VbSecondaryAxioms {
  using V = VBJet;
  static constexpr const char* kName = "vb_axioms_vb_secondary";
  static std::array<V, 3> anchored_triple(Rng& rng, const SuiteConfig& c) {
    int p = rng.integer(c.p_min, c.p_max), m = rng.integer(c.m_min, c.m_max),
        k = rng.integer(c.k_min, c.k_max);
    std::array<V, 3> t{gen::vbjet(rng, c, p, m, k), gen::vbjet(rng, c, p, m, k),
                       gen::vbjet(rng, c, p, m, k)};
    for (int i : {1, 2}) {
      t[i].x = t[0].x;
      t[i].F = t[0].F;
    }
    return t;
  }
  static V combine(const V& a, const V& b, double lam) {
    return vb_secondary_combine(a, b, lam);
  }
  static V zero(const V& a) { return vb_secondary_zero_fiber(a); }
  static double anchor_drift(const V& r, const V& a) {
    return std::max(max_abs_diff(r.x, a.x), max_abs_diff(r.F, a.F));
  }
  static json payload(const V& v) { return to_json(v); }
};

struct DjPrimaryAxioms {
  using V = DoubleJet;
  static constexpr const char* kName = "vb_axioms_dj_primary";
  static std::array<V, 3> anchored_triple(Rng& rng, const SuiteConfig& c) {
    int p = rng.integer(c.p_min, c.p_max), m = rng.integer(c.m_min, c.m_max);
    std::array<V, 3> t{gen::doublejet(rng, c, p, m), gen::doublejet(rng, c, p, m),
                       gen::doublejet(rng, c, p, m)};
    for (int i : {1, 2}) {
      t[i].x = t[0].x;
      t[i].X = t[0].X;
    }
    return t;
  }
  static V combine(const V& a, const V& b, double lam) {
    return dj_primary_combine(a, b, lam);
  }
  static V zero(const V& a) { return dj_primary_zero_fiber(a); }
  static double anchor_drift(const V& r, const V& a) {
    return std::max(max_abs_diff(r.x, a.x), max_abs_diff(r.X, a.X));
  }
  static json payload(const V& v) { return to_json(v); }
};

struct DjSecondaryAxioms {
  using V = DoubleJet;
  static constexpr const char* kName = "vb_axioms_dj_secondary";
  static std::array<V, 3> anchored_triple(Rng& rng, const SuiteConfig& c) {
    int p = rng.integer(c.p_min, c.p_max), m = rng.integer(c.m_min, c.m_max);
    std::array<V, 3> t{gen::doublejet(rng, c, p, m), gen::doublejet(rng, c, p, m),
                       gen::doublejet(rng, c, p, m)};
    for (int i : {1, 2}) {
      t[i].x = t[0].x;
      t[i].Y = t[0].Y;
    }
    return t;
  }
  static V combine(const V& a, const V& b, double lam) {
    return dj_secondary_combine(a, b, lam);
  }
  static V zero(const V& a) { return dj_secondary_zero_fiber(a); }
  static double anchor_drift(const V& r, const V& a) {
    return std::max(max_abs_diff(r.x, a.x), max_abs_diff(r.Y, a.Y));
  }
  static json payload(const V& v) { return to_json(v); }
};

template <class Ops>
TrialResult vb_axioms_trial(Rng& rng, const SuiteConfig& cfg) {
  auto t = Ops::anchored_triple(rng, cfg);
  const auto& a = t[0];
  const auto& b = t[1];
  const auto& c = t[2];
  double lam = rng.real(-2.0, 2.0), mu = rng.real(-2.0, 2.0);
  auto scale = [&](const typename Ops::V& v, double l) {
    return Ops::combine(Ops::zero(v), v, l);
  };
  double r = max_abs_diff(Ops::combine(a, b, 1.0), Ops::combine(b, a, 1.0));
  r = std::max(r, max_abs_diff(Ops::combine(Ops::combine(a, b, 1.0), c, 1.0),
                               Ops::combine(a, Ops::combine(b, c, 1.0), 1.0)));
  r = std::max(r, max_abs_diff(Ops::combine(a, Ops::zero(a), 1.0), a));
  r = std::max(r, max_abs_diff(Ops::combine(a, b, 0.0), a));
  r = std::max(r, max_abs_diff(Ops::combine(a, a, -1.0), Ops::zero(a)));
  r = std::max(r, max_abs_diff(scale(Ops::combine(a, b, 1.0), lam),
                               Ops::combine(scale(a, lam), scale(b, lam), 1.0)));
  r = std::max(r, max_abs_diff(scale(a, lam + mu),
                               Ops::combine(scale(a, lam), scale(a, mu), 1.0)));
  json payload{{"structure", Ops::kName},
               {"a", Ops::payload(a)},
               {"b", Ops::payload(b)},
               {"c", Ops::payload(c)},
               {"lambda", lam},
               {"mu", mu}};
  return {r, std::move(payload)};
}

}  // namespace detail

// Registered laws, in a fixed order. Each runs config.trials fresh random
// instances.
inline const std::vector<LawDef>& law_registry() {
  using detail::run_trials;
  using detail::TrialResult;
  static const std::vector<LawDef> laws = [] {
    std::vector<LawDef> defs;

    defs.push_back({"hessian_symmetry", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("hessian_symmetry", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        int n = rng.integer(1, 4), m = rng.integer(cfg.m_min, cfg.m_max);
        SmoothMap f = gen::map(rng, n, m, gen::Mode::Full);
        Vec origin(static_cast<std::size_t>(n), 0.0);
        double r = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            r = std::max(r, max_abs_diff(mixed_partial(f, origin, a, b),
                                         mixed_partial(f, origin, b, a)));
        r = std::max(r, symmetry_defect(second_order(f, origin).hess));
        return {r, json{{"map", to_string(f)}, {"n", n}, {"m", m}}};
      });
    }});

    defs.push_back({"ad_vs_fd", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("ad_vs_fd", cfg.tol_fd, cfg, [&](Rng& rng) -> TrialResult {
        for (int attempt = 0;; ++attempt) {
          int n = rng.integer(1, 4), m = rng.integer(cfg.m_min, cfg.m_max);
          // no division here: a pole close to the sample point can hide from
          // the magnitude filter behind a near-zero numerator while still
          // wrecking the oracle's truncation error; the rational operators
          // are cross-checked against the oracle deterministically in the
          // unit suite instead
          SmoothMap f = gen::map(rng, n, m, gen::Mode::Total);
          for (int pt = 0; pt < 25; ++pt) {
            Vec x = gen::vec(rng, n, -0.7, 0.7);
            SecondOrderData ad, fd;
            try {
              fd = fd_second_order(f, x, cfg.fd_step);
              if (gen::data_magnitude(fd) > 100.0) continue;
              // admit only points where the O(h^2) oracle has converged:
              // halving the step must leave the estimate essentially fixed.
              // This certifies the oracle without ever consulting the
              // engine under test.
              SecondOrderData fd_half = fd_second_order(f, x, cfg.fd_step / 2.0);
              if (gen::data_rel_diff(fd_half, fd) > cfg.tol_fd / 4.0) continue;
              ad = second_order(f, x);
            } catch (const DomainError&) {
              continue;
            }
            double r = gen::data_rel_diff(ad, fd);
            return {r, json{{"map", to_string(f)}, {"point", x}, {"h", cfg.fd_step}}};
          }
          if (attempt >= 50)
            throw Error("internal", "ad_vs_fd: could not find an admissible point");
        }
      });
    }});

    defs.push_back({"jet2_roundtrip", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("jet2_roundtrip", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        Jet2 j = gen::jet2(rng, cfg, p, m);
        SmoothMap rep = jet2_representative(j);
        double r = max_abs_diff(jet2_of(rep), j);
        return {r, json{{"jet2", to_json(j)}, {"representative", to_string(rep)}}};
      });
    }});

    defs.push_back({detail::Jet1Axioms::kName, [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials(detail::Jet1Axioms::kName, cfg.tol_exact, cfg, [&](Rng& rng) {
        auto t = detail::vb_axioms_trial<detail::Jet1Axioms>(rng, cfg);
        return std::pair<double, json>{t.residual, t.payload};
      });
    }});
    defs.push_back({detail::VbPrimaryAxioms::kName, [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials(detail::VbPrimaryAxioms::kName, cfg.tol_exact, cfg, [&](Rng& rng) {
        auto t = detail::vb_axioms_trial<detail::VbPrimaryAxioms>(rng, cfg);
        return std::pair<double, json>{t.residual, t.payload};
      });
    }});
    defs.push_back({detail::VbSecondaryAxioms::kName, [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials(detail::VbSecondaryAxioms::kName, cfg.tol_exact, cfg, [&](Rng& rng) {
        auto t = detail::vb_axioms_trial<detail::VbSecondaryAxioms>(rng, cfg);
        return std::pair<double, json>{t.residual, t.payload};
      });
    }});
    defs.push_back({detail::DjPrimaryAxioms::kName, [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials(detail::DjPrimaryAxioms::kName, cfg.tol_exact, cfg, [&](Rng& rng) {
        auto t = detail::vb_axioms_trial<detail::DjPrimaryAxioms>(rng, cfg);
        return std::pair<double, json>{t.residual, t.payload};
      });
    }});
    defs.push_back({detail::DjSecondaryAxioms::kName, [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials(detail::DjSecondaryAxioms::kName, cfg.tol_exact, cfg, [&](Rng& rng) {
        auto t = detail::vb_axioms_trial<detail::DjSecondaryAxioms>(rng, cfg);
        return std::pair<double, json>{t.residual, t.payload};
      });
    }});

    defs.push_back({"anchor_preservation", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("anchor_preservation", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        double lam = rng.real(-2.0, 2.0);
        double r = 0.0;
        json payload{{"lambda", lam}};
        {
          auto t = detail::Jet1Axioms::anchored_triple(rng, cfg);
          r = std::max(r, detail::Jet1Axioms::anchor_drift(
                              jet1_combine(t[0], t[1], lam), t[0]));
          payload["jet1_a"] = to_json(t[0]);
        }
        {
          auto t = detail::VbPrimaryAxioms::anchored_triple(rng, cfg);
          r = std::max(r, detail::VbPrimaryAxioms::anchor_drift(
                              vb_primary_combine(t[0], t[1], lam), t[0]));
        }
        {
          auto t = detail::VbSecondaryAxioms::anchored_triple(rng, cfg);
          r = std::max(r, detail::VbSecondaryAxioms::anchor_drift(
                              vb_secondary_combine(t[0], t[1], lam), t[0]));
        }
        {
          auto t = detail::DjPrimaryAxioms::anchored_triple(rng, cfg);
          r = std::max(r, detail::DjPrimaryAxioms::anchor_drift(
                              dj_primary_combine(t[0], t[1], lam), t[0]));
        }
        {
          auto t = detail::DjSecondaryAxioms::anchored_triple(rng, cfg);
          r = std::max(r, detail::DjSecondaryAxioms::anchor_drift(
                              dj_secondary_combine(t[0], t[1], lam), t[0]));
        }
        return {r, std::move(payload)};
      });
    }});

    defs.push_back({"omega_hat_involution", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("omega_hat_involution", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max),
            k = rng.integer(cfg.k_min, cfg.k_max);
        SecondaryChart c{gen::vec(rng, m, cfg.value_lo, cfg.value_hi),
                         gen::mat(rng, m, p, cfg.value_lo, cfg.value_hi),
                         gen::vec(rng, k, cfg.value_lo, cfg.value_hi),
                         gen::mat(rng, k, p, cfg.value_lo, cfg.value_hi)};
        SecondaryChart back = omega_hat_inverse(omega_hat(c));
        double r = std::max(std::max(max_abs_diff(back.x, c.x), max_abs_diff(back.y, c.y)),
                            std::max(max_abs_diff(back.f, c.f), max_abs_diff(back.g, c.g)));
        return {r, json{{"x", c.x}, {"y", c.y}}};
      });
    }});

    defs.push_back({"xi_split_inverse", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("xi_split_inverse", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max),
            k = rng.integer(cfg.k_min, cfg.k_max);
        Mat h = gen::mat(rng, m + k, p, cfg.value_lo, cfg.value_hi);
        auto [f, g] = xi_split(h, m, k);
        double r = max_abs_diff(xi_join(f, g), h);
        return {r, json{{"rows", m + k}, {"cols", p}}};
      });
    }});

    defs.push_back({"product_split_inverse", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("product_split_inverse", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max);
        int m1 = rng.integer(1, 3), m2 = rng.integer(1, 3);
        Jet1 j = gen::jet1(rng, cfg, p, m1 + m2);
        auto [a, b] = product_split(j, m1, m2);
        double r = max_abs_diff(product_join(a, b), j);
        return {r, json{{"jet1", to_json(j)}, {"m1", m1}, {"m2", m2}}};
      });
    }});

    defs.push_back({"flip_involution", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("flip_involution", kInvolutionTol, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        Jet2 j = gen::jet2(rng, cfg, p, m);
        double r = max_abs_diff(flip_jet2(flip_jet2(j)), j);
        return {r, json{{"jet2", to_json(j)}}};
      });
    }});

    defs.push_back({"ell_involution", [](const SuiteConfig& cfg, const Hooks& hooks) {
      return run_trials("ell_involution", kInvolutionTol, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        DoubleJet v = gen::doublejet(rng, cfg, p, m);
        double r = max_abs_diff(detail::apply_ell(hooks, detail::apply_ell(hooks, v)), v);
        return {r, json{{"doublejet", to_json(v)}}};
      });
    }});

    defs.push_back({"descent", [](const SuiteConfig& cfg, const Hooks& hooks) {
      return run_trials("descent", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        Jet2 j = gen::jet2(rng, cfg, p, m);
        DoubleJet lhs = lambda(flip_jet2(j));
        DoubleJet rhs = detail::apply_ell(hooks, lambda(j));
        double r = max_abs_diff(lhs, rhs);
        return {r, json{{"jet2", to_json(j)},
                        {"lambda_flip", to_json(lhs)},
                        {"ell_lambda", to_json(rhs)}}};
      });
    }});

    defs.push_back({"quotient_invariance", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("quotient_invariance", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        Jet2 j = gen::jet2(rng, cfg, p, m);
        Jet2 jp = j;
        // symmetric perturbation of the forgotten uu- and ww-blocks
        for (int i = 0; i < m; ++i)
          for (int a = 0; a < p; ++a)
            for (int b = a; b < p; ++b) {
              double du = rng.real(-10.0, 10.0), dw = rng.real(-10.0, 10.0);
              jp.B(i, a, b) += du;
              if (a != b) jp.B(i, b, a) += du;
              jp.B(i, p + a, p + b) += dw;
              if (a != b) jp.B(i, p + b, p + a) += dw;
            }
        double r = max_abs_diff(lambda(j), lambda(jp));
        return {r, json{{"jet2", to_json(j)}, {"perturbed", to_json(jp)}}};
      });
    }});

    defs.push_back({"fiber_preservation", [](const SuiteConfig& cfg, const Hooks& hooks) {
      return run_trials("fiber_preservation", 0.0, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        DoubleJet v = gen::doublejet(rng, cfg, p, m);
        double r = max_abs_diff(dj_proj_secondary(detail::apply_ell(hooks, v)),
                                dj_proj_primary(v));
        return {r, json{{"doublejet", to_json(v)}}};
      });
    }});

    defs.push_back({"fiber_linearity", [](const SuiteConfig& cfg, const Hooks& hooks) {
      return run_trials("fiber_linearity", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        DoubleJet a = gen::doublejet(rng, cfg, p, m);
        DoubleJet b = gen::doublejet(rng, cfg, p, m);
        b.x = a.x;
        b.X = a.X;
        double lam = rng.real(-2.0, 2.0);
        DoubleJet lhs = detail::apply_ell(hooks, dj_primary_combine(a, b, lam));
        DoubleJet rhs = dj_secondary_combine(detail::apply_ell(hooks, a),
                                             detail::apply_ell(hooks, b), lam);
        double r = max_abs_diff(lhs, rhs);
        return {r, json{{"a", to_json(a)}, {"b", to_json(b)}, {"lambda", lam}}};
      });
    }});

    defs.push_back({"functoriality", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("functoriality", cfg.tol_transcendental, cfg,
                        [&](Rng& rng) -> TrialResult {
        for (int attempt = 0;; ++attempt) {
          int p = rng.integer(cfg.p_min, cfg.p_max);
          int m1 = rng.integer(1, 3), mid = rng.integer(1, 3), q = rng.integer(1, 3);
          Jet1 j;
          j.p = p;
          j.m = m1;
          j.x = gen::vec(rng, m1, -1.0, 1.0);
          j.X = gen::mat(rng, m1, p, cfg.value_lo, cfg.value_hi);
          SmoothMap h = gen::map(rng, m1, mid, gen::Mode::Total);
          SmoothMap g = gen::map(rng, mid, q, gen::Mode::Total);
          SmoothMap gh = compose(g, h);
          try {
            SecondOrderData dh = second_order(h, j.x);
            if (gen::data_magnitude(dh) > 30.0) throw DomainError("gen", "unbounded");
            if (gen::data_magnitude(second_order(g, dh.value)) > 30.0)
              throw DomainError("gen", "unbounded");
            if (gen::data_magnitude(second_order(gh, j.x)) > 1000.0)
              throw DomainError("gen", "unbounded");
            Jet1 lhs = prolong1(gh, j);
            Jet1 rhs = prolong1(g, prolong1(h, j));
            double r = max_abs_diff(lhs, rhs);
            return {r, json{{"h", to_string(h)}, {"g", to_string(g)},
                            {"jet1", to_json(j)}}};
          } catch (const DomainError&) {
            if (attempt >= 100)
              throw Error("internal", "functoriality: no admissible instance found");
          }
        }
      });
    }});

    defs.push_back({"inverse_prolongation", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("inverse_prolongation", cfg.tol_transcendental, cfg,
                        [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        Jet1 j;
        j.p = p;
        j.m = m;
        j.x = gen::vec(rng, m, 0.5, 1.5);
        j.X = gen::mat(rng, m, p, cfg.value_lo, cfg.value_hi);
        SmoothMap exp_map, log_map;
        exp_map.arity_in = exp_map.arity_out = m;
        log_map.arity_in = log_map.arity_out = m;
        for (int i = 0; i < m; ++i) {
          exp_map.components.push_back(
              make_unary(ExprOp::Exp, make_variable('x', i + 1, i)));
          log_map.components.push_back(
              make_unary(ExprOp::Log, make_variable('x', i + 1, i)));
        }
        double r = max_abs_diff(prolong1(log_map, prolong1(exp_map, j)), j);
        r = std::max(r, max_abs_diff(prolong1(compose(log_map, exp_map), j), j));
        return {r, json{{"jet1", to_json(j)}}};
      });
    }});

    defs.push_back({"naturality_ell", [](const SuiteConfig& cfg, const Hooks& hooks) {
      return run_trials("naturality_ell", cfg.tol_transcendental, cfg,
                        [&](Rng& rng) -> TrialResult {
        for (int attempt = 0;; ++attempt) {
          int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
          int q = rng.integer(1, 3);
          DoubleJet v = gen::doublejet(rng, cfg, p, m);
          gen::Mode mode = (rng.integer(0, 1) == 0) ? gen::Mode::Polynomial
                                                    : gen::Mode::Total;
          SmoothMap h = gen::map(rng, m, q, mode);
          try {
            if (gen::data_magnitude(second_order(h, v.x)) > 30.0)
              throw DomainError("gen", "unbounded");
            DoubleJet lhs = prolong_double(h, detail::apply_ell(hooks, v));
            DoubleJet rhs = detail::apply_ell(hooks, prolong_double(h, v));
            double r = max_abs_diff(lhs, rhs);
            return {r, json{{"h", to_string(h)}, {"doublejet", to_json(v)}}};
          } catch (const DomainError&) {
            if (attempt >= 100)
              throw Error("internal", "naturality_ell: no admissible instance found");
          }
        }
      });
    }});

    defs.push_back({"flip_partials", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("flip_partials", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
        SmoothMap f = gen::map(rng, 2 * p, m, gen::Mode::Full, /*split_vars=*/true);
        double r = max_abs_diff(jet2_of(precompose_flip(f)), flip_jet2(jet2_of(f)));
        return {r, json{{"map", to_string(f)}, {"p", p}, {"m", m}}};
      });
    }});

    defs.push_back({"chainrule_lambda", [](const SuiteConfig& cfg, const Hooks&) {
      return run_trials("chainrule_lambda", cfg.tol_exact, cfg, [&](Rng& rng) -> TrialResult {
        for (int attempt = 0;; ++attempt) {
          int p = rng.integer(cfg.p_min, cfg.p_max), m = rng.integer(cfg.m_min, cfg.m_max);
          int q = rng.integer(1, 3);
          Jet2 j = gen::jet2(rng, cfg, p, m);
          SmoothMap h = gen::map(rng, m, q, gen::Mode::Total);
          try {
            if (gen::data_magnitude(second_order(h, j.x)) > 30.0)
              throw DomainError("gen", "unbounded");
            double r = max_abs_diff(lambda(prolong2(h, j)), prolong_double(h, lambda(j)));
            return {r, json{{"h", to_string(h)}, {"jet2", to_json(j)}}};
          } catch (const DomainError&) {
            if (attempt >= 100)
              throw Error("internal", "chainrule_lambda: no admissible instance found");
          }
        }
      });
    }});

    return defs;
  }();
  return laws;
}

// Runs the registered laws (all of them, or the subset named in `filter`,
// kept in registry order). Reports are deterministic for a fixed seed.
inline std::vector<LawReport> run_suite(const SuiteConfig& config,
                                        const std::vector<std::string>& filter = {},
                                        const Hooks& hooks = {}) {
  validate(config);
  const auto& laws = law_registry();
  for (const auto& name : filter) {
    bool found = false;
    for (const auto& def : laws)
      if (def.name == name) {
        found = true;
        break;
      }
    if (!found) throw UnknownLawError(name);
  }
  std::vector<LawReport> reports;
  for (const auto& def : laws) {
    if (!filter.empty()) {
      bool wanted = false;
      for (const auto& name : filter)
        if (def.name == name) {
          wanted = true;
          break;
        }
      if (!wanted) continue;
    }
    reports.push_back(def.run(config, hooks));
  }
  return reports;
}

}  // namespace jetcalc
