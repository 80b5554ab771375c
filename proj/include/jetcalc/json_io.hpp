#pragma once

// JSON encodings of the jet types. Shapes follow the library conventions:
// row i = component i, column a = direction a. On ingestion the Jet2 block B
// may deviate from symmetry by at most 1e-9; it is symmetrized after the
// check.

#include <string>

#include <json.hpp>

#include "jetcalc/errors.hpp"
#include "jetcalc/jet.hpp"
#include "jetcalc/linalg.hpp"

namespace jetcalc {

using json = nlohmann::json;

inline constexpr double kIngestSymmetryTol = 1e-9;

namespace detail {

inline json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json ten3_to_json(const Ten3& t) {
  json out = json::array();
  for (int i = 0; i < t.n0; ++i) {
    json mat = json::array();
    for (int j = 0; j < t.n1; ++j) {
      json row = json::array();
      for (int k = 0; k < t.n2; ++k) row.push_back(t(i, j, k));
      mat.push_back(std::move(row));
    }
    out.push_back(std::move(mat));
  }
  return out;
}

inline double json_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ShapeError(where + ": expected a number");
  return j.get<double>();
}

inline int json_dim(const json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number_integer())
    throw ShapeError(std::string("missing or non-integer field \"") + key + "\"");
  return obj[key].get<int>();
}

inline Vec json_vec(const json& obj, const char* key, int size) {
  if (!obj.contains(key) || !obj[key].is_array() ||
      static_cast<int>(obj[key].size()) != size)
    throw ShapeError(std::string("field \"") + key + "\" must be an array of length " +
                     std::to_string(size));
  Vec v(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i)
    v[static_cast<std::size_t>(i)] = json_number(obj[key][i], key);
  return v;
}

inline Mat json_mat(const json& obj, const char* key, int rows, int cols) {
  if (!obj.contains(key) || !obj[key].is_array() ||
      static_cast<int>(obj[key].size()) != rows)
    throw ShapeError(std::string("field \"") + key + "\" must have " +
                     std::to_string(rows) + " rows");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = obj[key][i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw ShapeError(std::string("field \"") + key + "\" row " + std::to_string(i) +
                       " must have " + std::to_string(cols) + " columns");
    for (int j = 0; j < cols; ++j) m(i, j) = json_number(row[j], key);
  }
  return m;
}

inline Ten3 json_ten3(const json& obj, const char* key, int n0, int n1, int n2) {
  if (!obj.contains(key) || !obj[key].is_array() ||
      static_cast<int>(obj[key].size()) != n0)
    throw ShapeError(std::string("field \"") + key + "\" must have " +
                     std::to_string(n0) + " slices");
  Ten3 t(n0, n1, n2);
  for (int i = 0; i < n0; ++i) {
    const json& mat = obj[key][i];
    if (!mat.is_array() || static_cast<int>(mat.size()) != n1)
      throw ShapeError(std::string("field \"") + key + "\" slice " + std::to_string(i) +
                       " must have " + std::to_string(n1) + " rows");
    for (int j = 0; j < n1; ++j) {
      const json& row = mat[j];
      if (!row.is_array() || static_cast<int>(row.size()) != n2)
        throw ShapeError(std::string("field \"") + key + "\" must have rows of length " +
                         std::to_string(n2));
      for (int k = 0; k < n2; ++k) t(i, j, k) = json_number(row[k], key);
    }
  }
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Encoding

inline json to_json(const Jet1& j) {
  return json{{"p", j.p}, {"m", j.m}, {"x", j.x}, {"X", detail::mat_to_json(j.X)}};
}

inline json to_json(const Jet2& j) {
  return json{{"p", j.p},
              {"m", j.m},
              {"x", j.x},
              {"A", detail::mat_to_json(j.A)},
              {"B", detail::ten3_to_json(j.B)}};
}

inline json to_json(const DoubleJet& v) {
  return json{{"p", v.p},          {"m", v.m},
              {"x", v.x},          {"X", detail::mat_to_json(v.X)},
              {"Y", detail::mat_to_json(v.Y)}, {"C", detail::ten3_to_json(v.C)}};
}

inline json to_json(const VBJet& v) {
  return json{{"p", v.p},
              {"m", v.m},
              {"k", v.k},
              {"x", v.x},
              {"y", v.y},
              {"F", detail::mat_to_json(v.F)},
              {"G", detail::mat_to_json(v.G)}};
}

// ---------------------------------------------------------------------------
// Decoding

inline Jet1 jet1_from_json(const json& obj) {
  if (!obj.is_object()) throw ShapeError("Jet1: expected a JSON object");
  Jet1 j;
  j.p = detail::json_dim(obj, "p");
  j.m = detail::json_dim(obj, "m");
  if (j.p < 1 || j.m < 1) throw ShapeError("Jet1: dimensions must be positive");
  j.x = detail::json_vec(obj, "x", j.m);
  j.X = detail::json_mat(obj, "X", j.m, j.p);
  validate(j);
  return j;
}

inline Jet2 jet2_from_json(const json& obj) {
  if (!obj.is_object()) throw ShapeError("Jet2: expected a JSON object");
  Jet2 j;
  j.p = detail::json_dim(obj, "p");
  j.m = detail::json_dim(obj, "m");
  if (j.p < 1 || j.m < 1) throw ShapeError("Jet2: dimensions must be positive");
  j.x = detail::json_vec(obj, "x", j.m);
  j.A = detail::json_mat(obj, "A", j.m, 2 * j.p);
  j.B = detail::json_ten3(obj, "B", j.m, 2 * j.p, 2 * j.p);
  double defect = symmetry_defect(j.B);
  if (defect > kIngestSymmetryTol)
    throw ShapeError("Jet2: B asymmetry " + std::to_string(defect) + " exceeds tolerance");
  symmetrize(j.B);
  validate(j);
  return j;
}

inline DoubleJet doublejet_from_json(const json& obj) {
  if (!obj.is_object()) throw ShapeError("DoubleJet: expected a JSON object");
  DoubleJet v;
  v.p = detail::json_dim(obj, "p");
  v.m = detail::json_dim(obj, "m");
  if (v.p < 1 || v.m < 1) throw ShapeError("DoubleJet: dimensions must be positive");
  v.x = detail::json_vec(obj, "x", v.m);
  v.X = detail::json_mat(obj, "X", v.m, v.p);
  v.Y = detail::json_mat(obj, "Y", v.m, v.p);
  v.C = detail::json_ten3(obj, "C", v.m, v.p, v.p);
  validate(v);
  return v;
}

inline VBJet vbjet_from_json(const json& obj) {
  if (!obj.is_object()) throw ShapeError("VBJet: expected a JSON object");
  VBJet v;
  v.p = detail::json_dim(obj, "p");
  v.m = detail::json_dim(obj, "m");
  v.k = detail::json_dim(obj, "k");
  if (v.p < 1 || v.m < 1 || v.k < 1) throw ShapeError("VBJet: dimensions must be positive");
  v.x = detail::json_vec(obj, "x", v.m);
  v.y = detail::json_vec(obj, "y", v.k);
  v.F = detail::json_mat(obj, "F", v.m, v.p);
  v.G = detail::json_mat(obj, "G", v.k, v.p);
  validate(v);
  return v;
}

enum class PayloadType { Jet1, Jet2, DoubleJet, VBJet };

// Classify a payload by its field set.
inline PayloadType payload_type(const json& obj) {
  if (!obj.is_object()) throw ShapeError("payload must be a JSON object");
  if (obj.contains("F") && obj.contains("G")) return PayloadType::VBJet;
  if (obj.contains("C")) return PayloadType::DoubleJet;
  if (obj.contains("A") && obj.contains("B")) return PayloadType::Jet2;
  if (obj.contains("X")) return PayloadType::Jet1;
  throw ShapeError("payload does not match any jet encoding");
}

}  // namespace jetcalc
