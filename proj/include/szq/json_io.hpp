#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "szq/analysis.hpp"
#include "szq/matrix_function.hpp"
#include "szq/potential.hpp"
#include "szq/spectral.hpp"
#include "szq/types.hpp"

namespace szq {

using Json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError("expected [re, im] pair in " + where);
  return Complex(j[0].get<double>(), j[1].get<double>());
}

}  // namespace detail

// {"breakpoints": [...], "pieces": [piece...], "extension": "constant"|"zero"}
// where a piece is the coefficient list of its polynomial and each
// coefficient matrix is stored row-major as [re, im] pairs.
inline Json matrix_function_to_json(const MatrixFunction& f) {
  Json j;
  j["breakpoints"] = f.breakpoints();
  Json pieces = Json::array();
  for (const auto& piece : f.pieces()) {
    Json coeffs = Json::array();
    for (const auto& c : piece) {
      Json mat = Json::array();
      for (int r = 0; r < f.dim(); ++r)
        for (int col = 0; col < f.dim(); ++col)
          mat.push_back(detail::complex_to_json(c(r, col)));
      coeffs.push_back(std::move(mat));
    }
    pieces.push_back(std::move(coeffs));
  }
  j["pieces"] = std::move(pieces);
  j["extension"] = f.extension() == Extension::constant ? "constant" : "zero";
  return j;
}

inline MatrixFunction matrix_function_from_json(int m, const Json& j,
                                                const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  detail::reject_unknown_keys(j, {"breakpoints", "pieces", "extension"}, where);
  if (!j.contains("pieces")) throw ConfigError(where + " missing \"pieces\"");
  std::vector<double> breakpoints;
  if (j.contains("breakpoints"))
    breakpoints = j["breakpoints"].get<std::vector<double>>();
  Extension ext = Extension::constant;
  if (j.contains("extension")) {
    const std::string e = j["extension"].get<std::string>();
    if (e == "constant")
      ext = Extension::constant;
    else if (e == "zero")
      ext = Extension::zero;
    else
      throw ConfigError(where + ".extension must be \"constant\" or \"zero\"");
  }
  std::vector<std::vector<Matrix>> pieces;
  for (const auto& piece : j["pieces"]) {
    std::vector<Matrix> coeffs;
    for (const auto& cj : piece) {
      if (!cj.is_array() || static_cast<int>(cj.size()) != m * m)
        throw ConfigError(where + ": coefficient matrix must have m*m entries");
      Matrix c(m, m);
      int k = 0;
      for (int r = 0; r < m; ++r)
        for (int col = 0; col < m; ++col)
          c(r, col) = detail::complex_from_json(cj[k++], where);
      coeffs.push_back(std::move(c));
    }
    pieces.push_back(std::move(coeffs));
  }
  try {
    return MatrixFunction(m, std::move(breakpoints), std::move(pieces), ext);
  } catch (const std::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline Json potential_to_json(const Potential& p) {
  Json j;
  j["m"] = p.dim();
  j["Q"] = matrix_function_to_json(p.Q());
  j["s"] = matrix_function_to_json(p.s());
  return j;
}

inline Potential potential_from_json(const Json& j,
                                     const std::string& where = "potential") {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  detail::reject_unknown_keys(j, {"m", "Q", "s"}, where);
  if (!j.contains("m") || !j["m"].is_number_integer())
    throw ConfigError(where + ": field \"m\" missing or not an integer");
  const int m = j["m"].get<int>();
  if (m <= 0) throw ConfigError(where + ": field \"m\" must be positive");
  if (!j.contains("Q")) throw ConfigError(where + ": field \"Q\" missing");
  if (!j.contains("s")) throw ConfigError(where + ": field \"s\" missing");
  return Potential(matrix_function_from_json(m, j["Q"], where + ".Q"),
                   matrix_function_from_json(m, j["s"], where + ".s"));
}

inline Json spectral_report_to_json(const SpectralReport& rep) {
  Json j;
  Json evs = Json::array();
  for (const auto& e : rep.eigenvalues) {
    Json ev;
    ev["lambda"] = detail::complex_to_json(e.lambda);
    ev["miss"] = e.miss;
    ev["multiplicity"] = e.multiplicity;
    evs.push_back(std::move(ev));
  }
  j["eigenvalues"] = std::move(evs);
  j["oracle_deltas"] = rep.oracle_deltas;
  j["notes"] = rep.notes;
  j["R"] = rep.R;
  j["det_scale"] = rep.det_scale;
  return j;
}

inline Json form_report_to_json(const FormReport& f) {
  Json j;
  j["value"] = detail::complex_to_json(f.value);
  j["real_part"] = f.real_part;
  j["kinetic"] = detail::complex_to_json(f.kinetic);
  j["q_term"] = detail::complex_to_json(f.q_term);
  j["s_term"] = detail::complex_to_json(f.s_term);
  j["quadrature_error"] = f.quadrature_error;
  return j;
}

inline Json scan_report_to_json(const ScanReport& r) {
  Json j;
  j["min_real"] = r.min_real;
  j["argmin_label"] = r.argmin_label;
  j["argmin_adjoint"] = r.argmin_adjoint;
  j["negative_witness"] = r.negative_witness();
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json ej;
    ej["label"] = e.label;
    ej["adjoint_op"] = e.adjoint_op;
    ej["value"] = detail::complex_to_json(e.value);
    ej["real_part"] = e.real_part;
    entries.push_back(std::move(ej));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline Json kernel_growth_report_to_json(const KernelGrowthReport& r) {
  Json j;
  j["shift"] = r.shift;
  j["n_max"] = r.n_max;
  j["slope_bound"] = r.slope_bound;
  j["all_excluded"] = r.all_excluded;
  Json dirs = Json::array();
  for (const auto& d : r.directions) {
    Json dj;
    dj["label"] = d.label;
    dj["ratios"] = d.ratios;
    dj["tail_masses"] = d.tail_masses;
    dj["aborted"] = d.aborted;
    if (d.aborted) dj["abort_x"] = d.abort_x;
    switch (d.verdict) {
      case DirectionVerdict::kernel_candidate: dj["verdict"] = "kernel_candidate"; break;
      case DirectionVerdict::excluded_growth: dj["verdict"] = "excluded_growth"; break;
      case DirectionVerdict::excluded_blowup: dj["verdict"] = "excluded_blowup"; break;
    }
    dirs.push_back(std::move(dj));
  }
  j["directions"] = std::move(dirs);
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("parse error in " + path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace szq
