#pragma once

#include "snacert/error.hpp"
#include "snacert/rational.hpp"

#include <json.hpp>

namespace snacert::json_util {

using nlohmann::json;

// Rationals travel as strings "p/q" or "p". Integer JSON numbers are accepted
// on input; floating-point numbers are rejected.
inline Rational to_rational(const json& j) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }
  if (j.is_number_integer()) return Rational::parse(j.dump());
  throw InputError("expected a rational string, got " + j.dump());
}

inline RationalVector to_vector(const json& j) {
  if (!j.is_array()) throw InputError("expected an array of rationals, got " + j.dump());
  RationalVector v;
  v.reserve(j.size());
  for (const auto& x : j) v.push_back(to_rational(x));
  return v;
}

inline RationalMatrix to_matrix(const json& j) {
  if (!j.is_array()) throw InputError("expected a matrix (array of rows)");
  RationalMatrix m;
  for (const auto& row : j) m.push_back(to_vector(row));
  return m;
}

inline json from_vector(std::span<const Rational> v) { return json(to_strings(v)); }

inline json from_matrix(const RationalMatrix& m) {
  json rows = json::array();
  for (const auto& r : m) rows.push_back(from_vector(r));
  return rows;
}

inline json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("JSON syntax error: ") + e.what());
  }
}

}  // namespace snacert::json_util
