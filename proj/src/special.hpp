#pragma once

#include <utility>

#include "quad.hpp"

namespace slb::special {

// Dawson's integral F(x) = e^{-x^2} int_0^x e^{t^2} dt, odd extension.
// Absolute error <= 1e-12 for |x| <= 50 (uniformly ~1e-15 in practice).
double dawson(double x);

// Standard error function (delegates to the correctly-rounded libm erf).
double erf(double x);

// The two closed-form integrals involving the Dawson function:
//   int_{-inf}^{inf} F(y) e^{-y^2} / y dy  = pi^{3/2}/4
//   int_{-inf}^{inf} x F(x) e^{-x^2} dx    = sqrt(pi)/4
// computed by quadrature (not by returning the constants).
std::pair<double, double> dawson_identity_integrals(
    const quad::QuadSpec& spec = {1e-12, 1e-12, 4000, 15});

}  // namespace slb::special
