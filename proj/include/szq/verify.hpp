#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "szq/analysis.hpp"
#include "szq/corpus.hpp"
#include "szq/json_io.hpp"
#include "szq/spectral.hpp"

namespace szq {

struct VerifyCheck {
  std::string entry;
  std::string check;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace detail

// Re-derive every documented corpus expectation.  Nothing is hard-coded as
// passing: classification, scans, eigenvalue searches and cross-checks all
// run from scratch.
inline VerifyReport verify_all(unsigned seed = 1) {
  VerifyReport rep;
  auto add = [&rep](const std::string& entry, const std::string& check,
                    bool ok, const std::string& detail) {
    rep.checks.push_back({entry, check, ok, detail});
  };

  for (const auto& e : corpus()) {
    // symmetry classification
    {
      const SymmetryClass got = classify_symmetry(e.potential);
      add(e.name, "symmetry_class", got == e.expected_class,
          std::string("expected ") + to_string(e.expected_class) + ", got " +
              to_string(got));
    }
    // accretivity scan sign
    {
      const auto family = default_scan_family(e.potential, seed);
      const ScanReport scan = accretivity_scan(e.potential, family);
      const bool ok = scan.negative_witness() == e.expect_negative_witness;
      add(e.name, "accretivity_scan", ok,
          "min Re form = " + detail::fmt(scan.min_real) + " at " +
              scan.argmin_label);
      if (scan.negative_witness()) {
        // scan soundness: the reported witness must reproduce
        const Potential& op = scan.argmin_adjoint
                                  ? adjoint_potential(e.potential)
                                  : e.potential;
        for (const auto& cand : family)
          if (cand.label == scan.argmin_label &&
              cand.adjoint_op == scan.argmin_adjoint) {
            const double re = form_value(op, cand.w).real_part;
            add(e.name, "scan_witness_reproducible",
                std::abs(re - scan.min_real) <= 1e-10,
                "recomputed " + detail::fmt(re) + " vs " +
                    detail::fmt(scan.min_real));
            break;
          }
      }
    }
    // bound-state / spectrum-window expectations
    if (e.bound_state) {
      const auto& bs = *e.bound_state;
      TruncatedProblem tp(e.potential, e.search_radius, bs.window);
      const SpectralReport sr = truncated_eigenvalues(tp);
      const int found = static_cast<int>(sr.eigenvalues.size());
      add(e.name, "eigenvalue_count", found == bs.count,
          "expected " + std::to_string(bs.count) + " in window, found " +
              std::to_string(found));
      if (bs.approx && found == bs.count && bs.count >= 1) {
        const double got = sr.eigenvalues.front().lambda.real();
        add(e.name, "eigenvalue_value", std::abs(got - *bs.approx) <= bs.tol,
            "lambda = " + detail::fmt(got) + ", expected " +
                detail::fmt(*bs.approx) + " +- " + detail::fmt(bs.tol));
        if (e.potential.dim() == 1) {
          const OracleEstimate oe =
              fd_oracle_eigenvalue(tp, sr.eigenvalues.front().lambda, 250);
          const double delta =
              std::abs(sr.eigenvalues.front().lambda - oe.extrapolated);
          add(e.name, "fd_oracle_agreement", delta <= oe.error_bar,
              "delta " + detail::fmt(delta) + " vs bar " +
                  detail::fmt(oe.error_bar));
        }
      }
    }
    // conjugation identity for symmetric complex potentials
    if (e.expected_class == SymmetryClass::complex_symmetric) {
      CauchyData d;
      d.x0 = 0.0;
      d.c0 = Vector::Ones(e.potential.dim());
      d.c1 = Vector::Zero(e.potential.dim());
      const double res = j_symmetry_residual(e.potential, d, Complex(0.0, 1.0),
                                             -e.search_radius, e.search_radius);
      add(e.name, "j_symmetry_residual", res <= 1e-8, detail::fmt(res));

      TruncatedProblem tp(e.potential, e.search_radius,
                          Window::rect(0.01, 0.7, -0.05, 0.25));
      const SpectralReport sr = truncated_eigenvalues(tp);
      bool off_axis = false;
      double max_im = 0.0;
      for (const auto& ev : sr.eigenvalues) {
        max_im = std::max(max_im, std::abs(ev.lambda.imag()));
        if (std::abs(ev.lambda.imag()) > 1e-3) off_axis = true;
      }
      add(e.name, "eigenvalues_off_real_axis", off_axis,
          "max |Im lambda| = " + detail::fmt(max_im) + " over " +
              std::to_string(sr.eigenvalues.size()) + " eigenvalues");
    }
  }
  return rep;
}

inline Json verify_report_to_json(const VerifyReport& rep) {
  Json j;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["entry"] = c.entry;
    cj["check"] = c.check;
    cj["passed"] = c.passed;
    cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["all_passed"] = rep.all_passed();
  return j;
}

}  // namespace szq
