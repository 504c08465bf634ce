#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <random>

#include "vortgrad/error.hpp"
#include "vortgrad/model_ode.hpp"

using namespace vortgrad;

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

// (-c1 int_0^x ln(y^2 + s^2) ds, c1 int_0^y ln(x^2 + s^2) ds), split where the
// integrand bends.
Vec2 quadrature_velocity(double x, double y, double c1) {
  auto integral = [](double upper, double other) {
    auto f = [other](double s) { return std::log(other * other + s * s); };
    const double knee = std::min(upper, other);
    double v = GK::integrate(f, 0.0, knee, 12, 1e-13);
    if (upper > knee) v += GK::integrate(f, knee, upper, 12, 1e-13);
    return v;
  };
  return {-c1 * integral(x, y), c1 * integral(y, x)};
}

double d5(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

const CrossFieldVariant kExact{};
const CrossFieldVariant kLeading{VariantKind::Leading, 0.5, 1.0};

}  // namespace

TEST_SUITE("model-ode") {

TEST_CASE("cross velocity examples") {
  const Vec2 l = cross_velocity(0.001, 0.01, kLeading);
  CHECK(l.x == doctest::Approx(0.0046052).epsilon(1e-4));
  CHECK(l.y == doctest::Approx(-0.0460517).epsilon(1e-5));
  const Vec2 e = cross_velocity(0.001, 0.01, kExact);
  CHECK(e.x == doctest::Approx(0.0046035).epsilon(1e-4));
  CHECK(e.y == doctest::Approx(-0.0545308).epsilon(1e-5));
  CHECK_THROWS_AS(cross_velocity(0.0, 0.01, kExact), InvalidInput);
  CHECK_THROWS_AS(cross_velocity(0.01, -1.0, kLeading), InvalidInput);
}

TEST_CASE("closed form matches quadrature of the defining integrals") {
  const AlephRegion R{1e-8, 0.05};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double y = std::exp(std::log(std::sqrt(R.eps1)) + (std::log(R.eps2) - std::log(std::sqrt(R.eps1))) * u(rng));
    const double x = std::exp(std::log(R.eps1) + (std::log(y * y) - std::log(R.eps1)) * u(rng));
    REQUIRE(R.contains(x, y));
    const Vec2 c = cross_velocity(x, y, kExact);
    const Vec2 q = quadrature_velocity(x, y, 0.5);
    worst = std::max({worst, std::abs(c.x / q.x - 1), std::abs(c.y / q.y - 1)});
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("analytic Jacobian matches finite differences; exact field is divergence free") {
  for (auto [x, y] : {std::pair{0.001, 0.01}, std::pair{2e-5, 0.03}, std::pair{0.3, 0.2}}) {
    for (const auto& v : {kExact, kLeading}) {
      const Mat2 J = cross_jacobian(x, y, v);
      auto ux = [&](double s) { return cross_velocity(s, y, v).x; };
      auto uy = [&](double s) { return cross_velocity(x, s, v).x; };
      auto vx = [&](double s) { return cross_velocity(s, y, v).y; };
      auto vy = [&](double s) { return cross_velocity(x, s, v).y; };
      CHECK(J.a11 == doctest::Approx(d5(ux, x, 1e-3 * x)).epsilon(1e-8));
      CHECK(J.a12 == doctest::Approx(d5(uy, y, 1e-3 * y)).epsilon(1e-8));
      CHECK(J.a21 == doctest::Approx(d5(vx, x, 1e-3 * x)).epsilon(1e-8));
      CHECK(J.a22 == doctest::Approx(d5(vy, y, 1e-3 * y)).epsilon(1e-8));
    }
    auto ux = [&](double s) { return cross_velocity(s, y, kExact).x; };
    auto vy = [&](double s) { return cross_velocity(x, s, kExact).y; };
    CHECK(std::abs(d5(ux, x, 1e-3 * x) + d5(vy, y, 1e-3 * y)) <= 1e-10);
    CHECK(cross_jacobian(x, y, kLeading).trace() == doctest::Approx(1.0));
  }
}

TEST_CASE("region and perturbation admissibility") {
  const AlephRegion R{1e-6, 0.1};
  CHECK(R.contains(1e-4, 0.05));
  CHECK_FALSE(R.contains(1e-4, 0.005));  // y < sqrt(x)
  CHECK_FALSE(R.contains(1e-7, 0.05));
  CHECK_FALSE(R.contains(1e-4, 0.1));

  const double ups = 1e-3;
  const Perturbation zero;
  const auto r0 = admissible_perturbation_check(zero, R, 200);
  CHECK(r0.pass);
  CHECK(std::isinf(r0.value_margin));

  Perturbation half{[ups](double x, double y, double) { return Vec2{0.5e-4 * ups * std::hypot(x, y), 0.0}; }, ups};
  CHECK(admissible_perturbation_check(half, R, 200).pass);

  Perturbation big{[ups](double x, double y, double) { return Vec2{2e-4 * ups * std::hypot(x, y), 0.0}; }, ups};
  const auto rb = admissible_perturbation_check(big, R, 200);
  CHECK_FALSE(rb.pass);
  CHECK(rb.violated == "|nu| < 1e-4 upsilon r");
  CHECK(rb.value_margin == doctest::Approx(0.5));
  CHECK(R.contains(rb.value_witness.x, rb.value_witness.y));
  CHECK_THROWS_AS(admissible_perturbation_check(zero, R, 10), InvalidInput);
}

TEST_CASE("leading variant closed forms") {
  const AlephRegion R{1e-9, 0.2};
  const double beta = 0.1, alpha = 1e-6, T = std::log(2.0);
  const Trajectory tr = integrate_variational({alpha, beta}, T, {}, kLeading, R, {1e-4});
  const PhaseState& f = tr.final_state();
  CHECK(f.t == T);
  CHECK(f.y == doctest::Approx(0.01).epsilon(1e-8));
  CHECK(f.x == doctest::Approx(1e-5).epsilon(1e-8));
  CHECK(f.jac->a11 == doctest::Approx(10.0).epsilon(1e-8));
  // div = c2, so det J = e^T.
  CHECK(f.jac->det() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_FALSE(tr.exit_time);
  const auto fit = leading_error_bound(tr, kLeading, R);
  CHECK(fit.fitted_C <= 1e-12);
}

TEST_CASE("exact variant: bracket, area, monotonicity") {
  const AlephRegion R{1e-9, 0.2};
  const double beta = 0.1, alpha = 1e-6, T = std::log(2.0);
  const Trajectory tr = integrate_variational({alpha, beta}, T, {}, kExact, R, {1e-4});
  const auto fit = leading_error_bound(tr, kExact, R);
  CHECK(fit.fitted_C <= 3.0);
  const double C = fit.fitted_C;
  const double y = tr.final_state().y;
  CHECK(y >= std::exp(std::exp(T) * (std::log(beta) - C)));
  CHECK(y <= std::exp(std::exp(T) * (std::log(beta) + C)));
  for (std::size_t i = 1; i < tr.path.size(); ++i) {
    CHECK(tr.path[i].x >= tr.path[i - 1].x);
    CHECK(tr.path[i].y <= tr.path[i - 1].y);
  }
  double worst = 0.0;
  for (const auto& s : tr.path) worst = std::max(worst, std::abs(s.jac->det() - 1.0));
  CHECK(worst <= 1e-6);
}

TEST_CASE("variational derivative matches centred differences") {
  const AlephRegion R{1e-9, 0.2};
  for (const auto& v : {kExact, kLeading}) {
    const double alpha = 2e-6, beta = 0.08, T = 0.6;
    const Trajectory tr = integrate_variational({alpha, beta}, T, {}, v, R, {1e-4});
    const double d = 1e-6 * alpha;
    const double xp = integrate_trajectory({alpha + d, beta}, T, {}, v, R, {1e-4}).final_state().x;
    const double xm = integrate_trajectory({alpha - d, beta}, T, {}, v, R, {1e-4}).final_state().x;
    CHECK(tr.final_state().jac->a11 == doctest::Approx((xp - xm) / (2 * d)).epsilon(1e-4));
  }
}

TEST_CASE("error bound fit shrinks with the region") {
  const AlephRegion R{1e-12, 0.06};
  const Trajectory tr = integrate_trajectory({1e-9, 0.055}, 2.0, {}, kExact, R, {1e-4, 10});
  double prev = INFINITY;
  for (double e2 : {0.05, 0.02, 0.01}) {
    const auto fit = leading_error_bound(tr, kExact, {1e-12, e2});
    CHECK(fit.samples_used > 0);
    CHECK(fit.fitted_C <= prev);
    prev = fit.fitted_C;
  }
  CHECK(prev <= 3.0);
}

TEST_CASE("trajectory errors") {
  const AlephRegion R{1e-9, 0.2};
  CHECK_THROWS_AS(integrate_trajectory({0.5, 0.1}, 1.0, {}, kExact, R), InvalidInput);
  CHECK_THROWS_AS(integrate_trajectory({1e-6, 0.1}, 1.0, {}, kExact, R, {0.0}), InvalidInput);
  const Trajectory tr = integrate_trajectory({1e-6, 0.1}, 3.0, {}, kExact, R, {1e-3, 1, true});
  REQUIRE(tr.exit_time);  // x overtakes y^2 before t = 3
  CHECK(*tr.exit_time > 0.0);
}

TEST_CASE("kappa") {
  CHECK(kappa(std::log(2.0), 0.1, 0.0) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(kappa(0.0, 0.37, 0.0) == doctest::Approx(0.37).epsilon(1e-14));
  const double lk = log_kappa(3.0, 1e-3, 1.0);
  CHECK(lk == doctest::Approx(std::exp(3.0) * (std::log(1e-3) - 1.0)));
  CHECK(std::isfinite(lk));
  CHECK(kappa(3.0, 1e-3, 1.0) >= 0.0);
}

TEST_CASE("Omega_0 membership") {
  const ParameterLadder L = resolve_ladder(1.0, 2.0, LadderMode::Relaxed);
  CHECK_FALSE(omega0_contains(2e-7, L.eps2(), L));
  CHECK(*omega0_violation(L.eps1(), 0.99 * L.eps2(), L) == "alpha-above-eps1");
  const double beta = 0.95 * L.eps2();
  const double alpha = std::sqrt(L.eps1() * std::pow(beta, L.omega_exponent));
  CHECK(omega0_contains(alpha, beta, L));
  CHECK(*omega0_violation(2 * std::pow(beta, L.omega_exponent), beta, L) == "alpha-below-beta-power");
  const ParameterLadder F = resolve_ladder(1.0, 10.0, LadderMode::Faithful);
  CHECK_FALSE(omega0_contains(1e-300, 1e-3, F));
}

TEST_CASE("no exit before T for Omega_0 data in the relaxed regime") {
  const ParameterLadder L = resolve_ladder(1.0, 2.0, LadderMode::Relaxed);
  const AlephRegion R = AlephRegion::from_ladder(L);
  for (double fb : {0.85, 0.9, 0.95, 0.99}) {
    const double beta = fb * L.eps2();
    const double alpha = std::sqrt(L.eps1() * std::pow(beta, L.omega_exponent));
    REQUIRE(omega0_contains(alpha, beta, L));
    const Trajectory tr = integrate_trajectory({alpha, beta}, L.T, {}, kExact, R, {1e-4});
    CHECK_FALSE(tr.exit_time);
  }
}

TEST_CASE("path csv") {
  const AlephRegion R{1e-9, 0.2};
  const Trajectory tr = integrate_variational({1e-6, 0.1}, 0.01, {}, kExact, R, {1e-3});
  const std::string csv = tr.to_csv();
  CHECK(csv.rfind("t,x,y,xa,ya,xb,yb,detJ\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
}

}
