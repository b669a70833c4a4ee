#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quad.hpp"

using namespace slb;
using quad::integrate;
using quad::integrate_tanh_sinh;
using quad::QuadSpec;

TEST_CASE("exponential tail integral") {
  auto r = integrate([](double x) { return std::exp(-x); }, 0.0, kInf);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gaussian over the whole line") {
  auto r = integrate([](double x) { return std::exp(-x * x); }, -kInf, kInf);
  CHECK(r.value == doctest::Approx(kSqrtPi).epsilon(1e-10));
}

TEST_CASE("inverse square-root endpoint singularity") {
  QuadSpec s{1e-10, 1e-10, 4000, 15};
  auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, s);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-8));
  quad::QuadSpec tight{1e-13, 1e-13, 4000, 15};
  auto rts = integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(x); },
                                 0.0, 1.0, tight);
  CHECK(rts.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("oscillatory damped integral has a closed form") {
  // int_0^inf cos(3 xi) e^{-xi} dxi = 1/10
  auto r = integrate([](double x) { return std::cos(3 * x) * std::exp(-x); },
                     0.0, kInf);
  CHECK(r.value == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("reported error bound is honest on smooth integrands") {
  auto r = integrate([](double x) { return std::sin(x); }, 0.0, 2.0);
  CHECK(std::abs(r.value - (1.0 - std::cos(2.0))) <=
        std::max(r.error_estimate, 1e-13));
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(5 * x); };
  auto a = integrate(f, -kInf, kInf);
  auto b = integrate(f, -kInf, kInf);
  CHECK(a.value == b.value);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("invalid domains are rejected") {
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 1.0),
                  InvalidDomain);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 2.0, 1.0),
                  InvalidDomain);
}

TEST_CASE("budget exhaustion raises NonConvergence") {
  QuadSpec s{1e-14, 1e-14, 10, 15};
  CHECK_THROWS_AS(
      integrate([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, s),
      NonConvergence);
}

TEST_CASE("quad spec validation") {
  QuadSpec s{0.0, 0.0, 100, 15};
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, s),
                  ValidationError);
}
