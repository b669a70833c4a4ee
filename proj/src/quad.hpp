#pragma once

#include <functional>

#include "common.hpp"

namespace slb::quad {

// Tolerances and budget for one integration call. At least one of the
// tolerances must be strictly positive.
struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;
  int rule_order = 15;  // Gauss-Kronrod pair size (15 = G7K15)
  // When set, budget exhaustion returns the best value found (with its
  // error estimate) instead of throwing NonConvergence. Intended for
  // oscillatory integrands whose Kronrod estimate is pessimistic because
  // adjacent panels cancel; callers must check error_estimate or validate
  // the result against an independent reference.
  bool best_effort = false;

  void validate() const {
    if (abs_tol < 0 || rel_tol < 0 || (abs_tol == 0 && rel_tol == 0))
      throw ValidationError("QuadSpec: need abs_tol > 0 or rel_tol > 0");
    if (max_subdivisions < 1)
      throw ValidationError("QuadSpec: max_subdivisions >= 1 required");
  }
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evaluations = 0;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod over [a, b]; either endpoint may be +/-infinity
// (handled by rational substitution). Integrable endpoint singularities
// (r^{-1+eps}) are supported through bisection refinement toward the
// endpoint; use integrate_tanh_sinh for a doubly-exponential rule when the
// singularity is harsh.
IntegralResult integrate(const Fn& f, double a, double b,
                         const QuadSpec& spec = {});

// tanh-sinh (doubly exponential) quadrature on a finite interval; excellent
// for endpoint singularities. Levels are refined until the tolerance or the
// level cap is hit.
IntegralResult integrate_tanh_sinh(const Fn& f, double a, double b,
                                   const QuadSpec& spec = {});

}  // namespace slb::quad
