#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mollikit/error.hpp"
#include "mollikit/mollify.hpp"
#include "oracles.hpp"

using namespace mollikit;

namespace {

constexpr double kBumpMu1 = 0.3344539977099753;
constexpr double kBumpMu2 = 0.15811363626379823;

const SmoothingOptions kPureQuadrature{.abs_tol = 1e-11, .polynomial_windows = false};

std::vector<LossSpec> catalog() {
  return {LossSpec::absolute(), LossSpec::check(0.3), LossSpec::huber(1.0), LossSpec::relu()};
}

std::vector<MollifierKernel> kernels() { return {MollifierKernel::bump(), MollifierKernel::gaussian()}; }

double dist_to_kinks(const LossSpec& loss, double u) {
  double d = INFINITY;
  for (double k : loss.kinks()) d = std::min(d, std::abs(u - k));
  return d;
}

}  // namespace

TEST_CASE("scale must be positive") {
  for (double m : {0.0, -1.0, std::nan("")}) {
    try {
      SmoothedLoss(LossSpec::absolute(), MollifierKernel::bump(), m);
      FAIL("expected an error");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::InvalidScale);
    }
  }
  CHECK_THROWS_AS(expected_derivative_gap(LossSpec::absolute(), MollifierKernel::bump(), 0.0,
                                          ErrorDensity::standard_normal()),
                  Error);
}

TEST_CASE("closed form availability") {
  CHECK(SmoothedLoss::closed_form_available(LossSpec::absolute(), MollifierKernel::gaussian()));
  CHECK(SmoothedLoss::closed_form_available(LossSpec::relu(), MollifierKernel::gaussian()));
  CHECK_FALSE(SmoothedLoss::closed_form_available(LossSpec::huber(1.0), MollifierKernel::gaussian()));
  CHECK_FALSE(SmoothedLoss::closed_form_available(LossSpec::absolute(), MollifierKernel::bump()));
  CHECK(SmoothedLoss(LossSpec::check(0.3), MollifierKernel::gaussian(), 2.0).method() == SmoothingMethod::ClosedForm);
  CHECK(SmoothedLoss(LossSpec::huber(1.0), MollifierKernel::gaussian(), 2.0).method() == SmoothingMethod::Quadrature);
  CHECK_THROWS_AS(SmoothedLoss(LossSpec::huber(1.0), MollifierKernel::gaussian(), 2.0, SmoothingMethod::ClosedForm),
                  Error);
}

TEST_CASE("smooth value examples") {
  for (double m : {1.0, 3.0, 10.0, 50.0}) {
    const SmoothedLoss s(LossSpec::absolute(), MollifierKernel::bump(), m);
    CHECK(std::abs(s.value(0.0) - kBumpMu1 / m) < 1e-11);
  }
  const SmoothedLoss abs10(LossSpec::absolute(), MollifierKernel::bump(), 10.0, kPureQuadrature);
  CHECK(std::abs(abs10.value(0.5) - 0.5) < 1e-11);
  const double relu_ref = 0.5 / std::sqrt(2.0 * std::numbers::pi);
  const SmoothedLoss relu_cf(LossSpec::relu(), MollifierKernel::gaussian(), 2.0);
  const SmoothedLoss relu_q(LossSpec::relu(), MollifierKernel::gaussian(), 2.0, SmoothingMethod::Quadrature);
  CHECK(relu_cf.value(0.0) == doctest::Approx(relu_ref).epsilon(1e-14));
  CHECK(std::abs(relu_q.value(0.0) - relu_ref) < 1e-11);
}

TEST_CASE("quadrature path agrees with an independent Simpson convolution") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  for (const auto& loss : catalog()) {
    for (double m : {1.0, 4.0, 12.0}) {
      const SmoothedLoss s(loss, MollifierKernel::bump(), m, kPureQuadrature);
      for (int i = 0; i < 8; ++i) {
        const double u = pick(rng);
        const double ref = oracle::bump_smooth([&](double x) { return loss.value(x); }, m, u, loss.kinks());
        CHECK(std::abs(s.value(u) - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("polynomial windows reproduce pure quadrature") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  for (const auto& loss : catalog()) {
    for (const auto& kernel : kernels()) {
      for (double m : {2.0, 10.0, 40.0}) {
        const SmoothedLoss fast(loss, kernel, m, SmoothingMethod::Quadrature);
        const SmoothedLoss slow(loss, kernel, m, SmoothingMethod::Quadrature, kPureQuadrature);
        for (int i = 0; i < 50; ++i) {
          const double u = pick(rng);
          const auto a = fast.evaluate(u);
          const auto b = slow.evaluate(u);
          CHECK(std::abs(a.value - b.value) < 1e-10);
          CHECK(std::abs(a.first - b.first) < 1e-10);
          CHECK(std::abs(a.second - b.second) < 1e-9 * std::max(1.0, m));
        }
      }
    }
  }
}

TEST_CASE("smooth derivative examples") {
  for (const auto& kernel : kernels()) {
    CHECK(std::abs(SmoothedLoss(LossSpec::absolute(), kernel, 7.0).derivative(0.0)) < 1e-12);
  }
  const SmoothedLoss check(LossSpec::check(0.3), MollifierKernel::gaussian(), 5.0);
  CHECK(std::abs(check.derivative(3.0) - 0.3) < 1e-6);
  const SmoothedLoss relu(LossSpec::relu(), MollifierKernel::bump(), 10.0, kPureQuadrature);
  CHECK(std::abs(relu.derivative(-0.5)) < 1e-10);
}

TEST_CASE("smooth second derivative examples") {
  for (double tau : {0.2, 0.5, 0.9}) {
    const SmoothedLoss cf(LossSpec::check(tau), MollifierKernel::gaussian(), 4.0);
    const SmoothedLoss q(LossSpec::check(tau), MollifierKernel::gaussian(), 4.0, SmoothingMethod::Quadrature);
    const double ref = 4.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(cf.second_derivative(0.0) == doctest::Approx(ref).epsilon(1e-14));
    CHECK(std::abs(q.second_derivative(0.0) - ref) < 1e-9);
  }
  const SmoothedLoss abs(LossSpec::absolute(), MollifierKernel::bump(), 10.0, kPureQuadrature);
  CHECK(std::abs(abs.second_derivative(2.0)) < 1e-10);
}

TEST_CASE("second derivative equals the curvature measure convolved with phi_m") {
  // rho_m'' = sum_atoms mass * phi_m(k - u) + int density(u + v/m) phi(v) dv
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pick(-1.5, 1.5);
  for (const auto& loss : catalog()) {
    for (double m : {2.0, 9.0}) {
      const SmoothedLoss s(loss, MollifierKernel::bump(), m, kPureQuadrature);
      const auto measure = loss.curvature();
      for (int i = 0; i < 20; ++i) {
        const double u = pick(rng);
        double ref = 0.0;
        for (const auto& atom : measure.atoms) ref += atom.mass * m * oracle::bump(m * (atom.location - u));
        for (const auto& piece : measure.density) {
          const double lo = std::max(piece.lo, u - 1.0 / m);
          const double hi = std::min(piece.hi, u + 1.0 / m);
          if (hi > lo) {
            ref += piece.value * oracle::simpson([&](double x) { return m * oracle::bump(m * (x - u)); }, lo, hi, 20000);
          }
        }
        CHECK(std::abs(s.second_derivative(u) - ref) < 1e-9 * std::max(1.0, m));
      }
    }
  }
}

TEST_CASE("derivative chain matches finite differences") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> pick_u(-2.0, 2.0);
  std::uniform_real_distribution<double> pick_m(1.0, 20.0);
  for (const auto& loss : catalog()) {
    for (const auto& kernel : kernels()) {
      for (int i = 0; i < 20; ++i) {
        const double m = pick_m(rng);
        const double u = pick_u(rng);
        const SmoothedLoss s(loss, kernel, m);
        const double h = 1e-5;
        const double fd1 = (s.value(u + h) - s.value(u - h)) / (2 * h);
        const double fd2 = (s.derivative(u + h) - s.derivative(u - h)) / (2 * h);
        CHECK(std::abs(fd1 - s.derivative(u)) <= 1e-4 * std::max(std::abs(s.derivative(u)), 1.0));
        CHECK(std::abs(fd2 - s.second_derivative(u)) <= 1e-3 * std::max(std::abs(s.second_derivative(u)), 1.0));
        CHECK(s.second_derivative(u) >= -1e-10);
      }
    }
  }
}

TEST_CASE("convexity is preserved") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  for (const auto& loss : catalog()) {
    for (const auto& kernel : kernels()) {
      for (double m : {1.0, 5.0, 20.0}) {
        const SmoothedLoss s(loss, kernel, m);
        for (int i = 0; i < 300; ++i) {
          const double u = pick(rng);
          const double v = pick(rng);
          CHECK(s.value(0.5 * (u + v)) <= 0.5 * (s.value(u) + s.value(v)) + 1e-10);
        }
      }
    }
  }
}

TEST_CASE("uniform bound with the explicit constant") {
  const auto grid = make_grid(-3.0, 3.0, 0.01);
  for (const auto& loss : catalog()) {
    for (const auto& kernel : kernels()) {
      for (double m : {1.0, 5.0, 20.0}) {
        const SmoothedLoss s(loss, kernel, m);
        CHECK(sup_error(s, grid) <= loss.lipschitz() * kernel.abs_moment(1) / m + 1e-9);
      }
    }
  }
}

TEST_CASE("sup error examples") {
  const auto grid = make_grid(-3.0, 3.0, 0.001);
  const SmoothedLoss abs10(LossSpec::absolute(), MollifierKernel::bump(), 10.0);
  CHECK(std::abs(sup_error(abs10, grid) - kBumpMu1 / 10.0) < 1e-10);

  const SmoothedLoss huber(LossSpec::huber(1.0), MollifierKernel::bump(), 100.0, kPureQuadrature);
  const auto interior = make_grid(-0.99, 0.99, 0.01);
  CHECK(std::abs(sup_error(huber, interior) - kBumpMu2 / (2.0 * 100.0 * 100.0)) < 1e-10);

  for (const auto& loss : catalog()) {
    const SmoothedLoss s(loss, MollifierKernel::bump(), 10.0, kPureQuadrature);
    const double edge = loss.kind() == LossKind::Huber ? loss.parameter() : 0.0;
    CHECK(sup_error(s, make_grid(edge + 0.1 + 1e-9, 3.0, 0.01)) < 1e-10);
    CHECK(sup_error(s, make_grid(-3.0, -edge - 0.1 - 1e-9, 0.01)) < 1e-10);
  }
}

TEST_CASE("parallel and serial grid kernels agree") {
  const auto grid = make_grid(-3.0, 3.0, 0.003);
  for (const auto& loss : catalog()) {
    const SmoothedLoss s(loss, MollifierKernel::bump(), 7.0);
    CHECK(sup_error(s, grid, 4) == sup_error_serial(s, grid));
    CHECK(smooth_values(s, grid, 4) == smooth_values_serial(s, grid));
  }
}

TEST_CASE("rate halving") {
  const auto grid = make_grid(-3.0, 3.0, 0.001);
  for (const auto& loss : {LossSpec::absolute(), LossSpec::check(0.3), LossSpec::relu()}) {
    for (const auto& kernel : kernels()) {
      const double ratio = sup_error(SmoothedLoss(loss, kernel, 10.0), grid) /
                           sup_error(SmoothedLoss(loss, kernel, 20.0), grid);
      CHECK(ratio >= 1.8);
      CHECK(ratio <= 2.2);
    }
  }
  const auto interior = make_grid(-0.9, 0.9, 0.001);
  const double huber_ratio =
      sup_error(SmoothedLoss(LossSpec::huber(1.0), MollifierKernel::bump(), 10.0, kPureQuadrature), interior) /
      sup_error(SmoothedLoss(LossSpec::huber(1.0), MollifierKernel::bump(), 20.0, kPureQuadrature), interior);
  CHECK(huber_ratio >= 3.6);
  CHECK(huber_ratio <= 4.4);
}

TEST_CASE("closed form and quadrature agree") {
  const auto grid = make_grid(-3.0, 3.0, 0.01);
  for (const auto& loss : {LossSpec::absolute(), LossSpec::check(0.3), LossSpec::relu()}) {
    for (double m : {1.0, 5.0, 10.0, 15.0}) {
      const SmoothedLoss cf(loss, MollifierKernel::gaussian(), m, SmoothingMethod::ClosedForm);
      const SmoothedLoss q(loss, MollifierKernel::gaussian(), m, SmoothingMethod::Quadrature);
      for (double u : grid) {
        const auto a = cf.evaluate(u);
        const auto b = q.evaluate(u);
        CHECK(std::abs(a.value - b.value) < 1e-9);
        CHECK(std::abs(a.first - b.first) < 1e-9);
        CHECK(std::abs(a.second - b.second) < 1e-9 * m);
      }
    }
  }
}

TEST_CASE("pointwise derivative convergence away from kinks") {
  for (const auto& loss : catalog()) {
    for (const auto& kernel : kernels()) {
      const SmoothedLoss s(loss, kernel, 100.0);
      for (double u : make_grid(-3.0, 3.0, 0.05)) {
        if (dist_to_kinks(loss, u) <= 0.1) continue;
        CHECK(std::abs(s.derivative(u) - loss.subgradient(u)) < 1e-3);
      }
    }
  }
}

TEST_CASE("grid helpers") {
  const auto g = parse_grid("-2:2:0.5");
  CHECK(g.size() == 9);
  CHECK(g.front() == -2.0);
  CHECK(g.back() == 2.0);
  CHECK(make_grid(-3.0, 3.0, 0.001).size() == 6001);
  CHECK_THROWS_AS(parse_grid("1:2"), Error);
  CHECK_THROWS_AS(parse_grid("a:2:0.1"), Error);
  CHECK_THROWS_AS(parse_grid("0:1:0"), Error);
}

TEST_CASE("expected derivative gap") {
  const auto normal = ErrorDensity::standard_normal();
  const auto check = LossSpec::check(0.5);
  const auto bump = MollifierKernel::bump();
  const double g10 = expected_derivative_gap(check, bump, 10.0, normal);
  const double g20 = expected_derivative_gap(check, bump, 20.0, normal);
  // Bound lipschitz * mu1 * int|f'| / m, with int|f'| = 2 f(0) for the normal.
  const double int_abs_fprime = 2.0 * oracle::simpson([](double u) { return u * oracle::normal_pdf(u); }, 0.0, 40.0);
  CHECK(g10 <= check.lipschitz() * bump.abs_moment(1) * int_abs_fprime / 10.0);
  CHECK(g10 / g20 >= 1.6);
  CHECK(g10 / g20 <= 2.4);
  CHECK(expected_derivative_gap(check, bump, 1e4, normal) < 1e-3);

  // Independent route: int |rho_m' - psi| f by Simpson on the kink window.
  const SmoothedLoss s(check, bump, 10.0);
  auto integrand = [&](double u) { return std::abs(s.derivative(u) - check.subgradient(u)) * normal(u); };
  const double ref = oracle::simpson(integrand, -0.1, 0.0, 4000) + oracle::simpson(integrand, 0.0, 0.1, 4000);
  CHECK(std::abs(g10 - ref) < 1e-9);
}
