#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "catalysis/report.hpp"
#include "catalysis/statekit/density_matrix.hpp"
#include "catalysis/statekit/layout.hpp"
#include "catalysis/statekit/probability_vector.hpp"

namespace catalysis::io {

using Json = nlohmann::ordered_json;

/// Malformed input; the message names the offending path.
class SchemaError : public ValidationError {
 public:
  SchemaError(const std::string& path, const std::string& what) : ValidationError(path + ": " + what) {}
};

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

inline const Json* optional_field(const Json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline std::size_t count(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(path, "expected a non-negative integer");
  return j.get<std::size_t>();
}

inline std::vector<double> numbers(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<std::size_t> indices(const Json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of integers");
  std::vector<std::size_t> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(count(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Eigen::MatrixXd real_rows(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const auto row = numbers(j[static_cast<std::size_t>(r)], rp);
    if (r == 0) m.resize(rows, static_cast<Eigen::Index>(row.size()));
    if (static_cast<Eigen::Index>(row.size()) != m.cols()) throw SchemaError(rp, "row length differs from row 0");
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

/// {"re": [[...]], "im": [[...]]}; "im" may be omitted.
inline Matrix matrix(const Json& j, const std::string& path) {
  const Eigen::MatrixXd re = real_rows(field(j, "re", path), path + ".re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (const Json* p = optional_field(j, "im")) {
    im = real_rows(*p, path + ".im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw SchemaError(path + ".im", "shape differs from re");
  }
  Matrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

template <class F>
auto wrap(const std::string& path, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const SchemaError&) {
    throw;
  } catch (const CatalysisError& e) {
    throw SchemaError(path, e.what());
  }
}

inline ProbabilityVector probability(const Json& j, const std::string& path) {
  auto v = numbers(j, path);
  return wrap(path, [&] { return ProbabilityVector(std::move(v)); });
}

/// Matrix object, or an array of numbers read as a diagonal state.
inline DensityMatrix density(const Json& j, const std::string& path) {
  if (j.is_array()) {
    const auto p = probability(j, path);
    return DensityMatrix::diagonal(p);
  }
  Matrix m = matrix(j, path);
  return wrap(path, [&] { return DensityMatrix(std::move(m)); });
}

inline SubsystemLayout layout(const Json& j, const std::string& path) {
  std::vector<std::string> labels;
  const Json& l = field(j, "labels", path);
  if (!l.is_array()) throw SchemaError(path + ".labels", "expected an array of strings");
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (!l[i].is_string()) throw SchemaError(path + ".labels[" + std::to_string(i) + "]", "expected a string");
    labels.push_back(l[i].get<std::string>());
  }
  auto dims = indices(field(j, "dims", path), path + ".dims");
  return wrap(path, [&] { return SubsystemLayout(std::move(dims), std::move(labels)); });
}

// Writers.

/// Non-finite numbers become null.
inline Json real(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json array(std::span<const double> v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json a = Json::array();
    Json b = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      a.push_back(m(r, c).real());
      b.push_back(m(r, c).imag());
    }
    re.push_back(std::move(a));
    im.push_back(std::move(b));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Json to_json(const SubsystemLayout& l) { return Json{{"dims", l.dims()}, {"labels", l.labels()}}; }

inline Json to_json(const TransitionReport& r, bool timings) {
  Json out{{"pass", r.pass},
           {"catalyst_invariance_residual", real(r.catalyst_residual)},
           {"output_distance", real(r.output_distance)},
           {"epsilon_certified", real(r.eps_certified)},
           {"epsilon_claim", real(r.eps_claim)},
           {"epsilon_ncopy", real(r.eps_ncopy)},
           {"entropy_in", real(r.entropy_in)},
           {"entropy_out", real(r.entropy_out)},
           {"mutual_information", real(r.mutual_information)},
           {"spectrum_residual", real(r.spectrum_residual)},
           {"dims",
            {{"system", r.dims.system},
             {"catalyst_total", r.dims.catalyst_total},
             {"n", r.dims.n},
             {"A", r.dims.a},
             {"R", r.dims.r}}},
           {"fallback", r.fallback},
           {"bypass", r.bypass},
           {"output", array(r.output)}};
  if (r.output_matrix.size() > 0) out["output_state"] = to_json(r.output_matrix);
  if (timings) {
    Json t = Json::object();
    for (const auto& [name, seconds] : r.timings) t[name] = seconds;
    out["timings"] = std::move(t);
  }
  return out;
}

}  // namespace catalysis::io
