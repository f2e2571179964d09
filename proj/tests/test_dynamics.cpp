#include <cmath>

#include "doctest.h"
#include "soc/dynamics.hpp"

using namespace soc;

namespace {

constexpr double kPi = 3.14159265358979323846;

SampledDynamics make_dubins(double tau = 0.65) {
  SampledDynamics d;
  d.model = VehicleModel::dubins;
  d.state_dim = 3;
  d.input_dim = 2;
  d.tau = tau;
  d.input_bounds = Box({20.0, -0.5}, {50.0, 0.5});
  d.disturbance = Box({-5.0, -2.0, -0.04}, {5.0, 2.0, 0.04});
  d.jacobian_bound = default_jacobian_bound(VehicleModel::dubins, d.input_bounds);
  return d;
}

SampledDynamics make_bicycle() {
  SampledDynamics d;
  d.model = VehicleModel::bicycle;
  d.state_dim = 4;
  d.input_dim = 2;
  d.tau = 0.1;
  d.input_bounds = Box({-6.0, -0.5}, {4.0, 0.5});
  d.disturbance = Box({0.0, 0.0, -0.01, -0.1}, {0.0, 0.0, 0.01, 0.1});
  d.jacobian_bound = default_jacobian_bound(VehicleModel::bicycle, d.input_bounds, 18.0);
  return d;
}

SampledDynamics make_integrator(std::size_t n, double tau) {
  SampledDynamics d;
  d.model = VehicleModel::integrator;
  d.state_dim = n;
  d.input_dim = n;
  d.tau = tau;
  d.input_bounds = Box(Vec(n, -1.0), Vec(n, 1.0));
  d.disturbance = Box(Vec(n, 0.0), Vec(n, 0.0));
  d.jacobian_bound = default_jacobian_bound(VehicleModel::integrator, d.input_bounds, 0, n);
  return d;
}

}  // namespace

TEST_CASE("vector fields match the model formulas") {
  Vec out(4);
  SUBCASE("dubins straight east") {
    vector_field(VehicleModel::dubins, Vec{0, 0, 0}, Vec{20, 0}, std::span(out.data(), 3));
    CHECK(out[0] == doctest::Approx(20.0));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(0.0));
  }
  SUBCASE("dubins heading north") {
    vector_field(VehicleModel::dubins, Vec{1, 2, kPi / 2}, Vec{30, 0.5}, std::span(out.data(), 3));
    CHECK(std::abs(out[0]) < 1e-12);  // cos(pi/2) under IEEE rounding
    CHECK(out[1] == doctest::Approx(30.0));
    CHECK(out[2] == doctest::Approx(0.5));
  }
  SUBCASE("bicycle straight line, zero steering") {
    vector_field(VehicleModel::bicycle, Vec{0, 0, 0, 5}, Vec{1, 0}, std::span(out.data(), 4));
    CHECK(out[0] == doctest::Approx(5.0));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(0.0));
    CHECK(out[3] == doctest::Approx(1.0));
  }
  SUBCASE("bicycle coordinate change") {
    // alpha = arctan(tan(u2)/2), beta = 1/cos(alpha)
    const double u2 = 0.4;
    const double alpha = std::atan(std::tan(u2) / 2.0);
    const double beta = 1.0 / std::cos(alpha);
    vector_field(VehicleModel::bicycle, Vec{0, 0, 0.3, 7}, Vec{-2, u2}, std::span(out.data(), 4));
    CHECK(out[0] == doctest::Approx(7 * std::cos(alpha + 0.3) * beta));
    CHECK(out[1] == doctest::Approx(7 * std::sin(alpha + 0.3) * beta));
    CHECK(out[2] == doctest::Approx(7 * std::tan(u2)));
    CHECK(out[3] == doctest::Approx(-2.0));
  }
}

TEST_CASE("step: exact flows") {
  SUBCASE("integrator moves u*tau") {
    const auto d = make_integrator(1, 0.1);
    const Vec got = step(d, Vec{0.0}, Vec{1.0}, Vec{0.0});
    CHECK(got[0] == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("dubins constant heading") {
    const auto d = make_dubins();
    const Vec got = step(d, Vec{0, 0, 0}, Vec{20, 0}, Vec{0, 0, 0});
    CHECK(got[0] == doctest::Approx(13.0).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(0.0));
    CHECK(got[2] == doctest::Approx(0.0));
  }
  SUBCASE("dubins with constant disturbance superposes") {
    const auto d = make_dubins();
    const Vec got = step(d, Vec{0, 0, 0}, Vec{20, 0}, Vec{5, 0, 0});
    CHECK(got[0] == doctest::Approx(16.25).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(0.0));
  }
}

TEST_CASE("step wraps the heading") {
  const auto d = make_dubins();
  const Vec a = step(d, Vec{0, 0, 6.2}, Vec{20, 0.5}, Vec{0, 0, 0});
  CHECK(a[2] >= 0.0);
  CHECK(a[2] < 6.283185307179587);
}

TEST_CASE("step periodicity in the heading") {
  const auto d = make_dubins();
  const double two_pi = 6.283185307179586476925286766559;
  const Vec a = step(d, Vec{10, 20, 1.0}, Vec{35, 0.25}, Vec{1, -1, 0.01});
  const Vec b = step(d, Vec{10, 20, 1.0 + two_pi}, Vec{35, 0.25}, Vec{1, -1, 0.01});
  CHECK(std::abs(a[0] - b[0]) < 1e-9);
  CHECK(std::abs(a[1] - b[1]) < 1e-9);
  const double dtheta = std::abs(a[2] - b[2]);
  CHECK(std::min(dtheta, two_pi - dtheta) < 1e-9);
}

TEST_CASE("RK4 order on dubins") {
  // halving the substep size must shrink the error vs a fine reference by
  // roughly 2^4; tau is stretched so truncation dominates rounding noise
  auto d = make_dubins(5.0);
  const Vec x0{0, 0, 0.7};
  const Vec u{50.0, 0.5};
  const Vec w{0, 0, 0};
  d.substeps = 1000000;
  const Vec ref = step(d, x0, u, w);
  auto err_with = [&](int nsub) {
    d.substeps = nsub;
    const Vec got = step(d, x0, u, w);
    double e = 0;
    for (std::size_t i = 0; i < 3; ++i) e = std::max(e, std::abs(got[i] - ref[i]));
    return e;
  };
  const double e10 = err_with(10);
  const double e20 = err_with(20);
  REQUIRE(e20 > 0);
  const double ratio = e10 / e20;
  CHECK(ratio >= 8.0);
  CHECK(ratio <= 32.0);
}

TEST_CASE("growth radius closed forms") {
  SUBCASE("no expansion without coupling or disturbance") {
    auto d = make_integrator(2, 0.5);
    const Vec r = growth_radius(d, Vec{0.3, 0.4}, 0.5);
    CHECK(r[0] == doctest::Approx(0.3));
    CHECK(r[1] == doctest::Approx(0.4));
  }
  SUBCASE("scalar exponential growth") {
    auto d = make_integrator(1, std::log(2.0));
    d.jacobian_bound = {{1.0}};
    const Vec r = growth_radius(d, Vec{1.0}, std::log(2.0));
    CHECK(r[0] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("pure disturbance integration") {
    auto d = make_integrator(1, 0.5);
    d.disturbance = Box({-1.0}, {1.0});
    const Vec r = growth_radius(d, Vec{0.25}, 0.5);
    CHECK(r[0] == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("dubins nilpotent coupling") {
    const auto d = make_dubins();
    const Vec r = growth_radius(d, Vec{1.0, 1.0, 0.1}, 0.65);
    // exp(L t) = I + L t for this L; plus int exp(L s) wbar ds
    const double expect_xy = 1.0 + 0.65 * 50.0 * 0.1;
    const double dist_x = 5.0 * 0.65 + 50.0 * 0.04 * 0.65 * 0.65 / 2.0;
    CHECK(r[0] == doctest::Approx(expect_xy + dist_x).epsilon(1e-9));
    CHECK(r[2] == doctest::Approx(0.1 + 0.04 * 0.65).epsilon(1e-12));
  }
}

TEST_CASE("growth radius is monotone in r0 and W") {
  SplitMix64 rng(7);
  for (int k = 0; k < 200; ++k) {
    auto d = make_bicycle();
    Vec r0(4), r1(4);
    for (int i = 0; i < 4; ++i) {
      r0[i] = rng.next_double();
      r1[i] = r0[i] + rng.next_double();
    }
    const Vec a = growth_radius(d, r0, 0.3);
    const Vec b = growth_radius(d, r1, 0.3);
    for (int i = 0; i < 4; ++i) CHECK(b[i] >= a[i] - 1e-12);

    auto d2 = d;
    for (std::size_t i = 0; i < 4; ++i) {
      d2.disturbance.lower[i] -= rng.next_double();
      d2.disturbance.upper[i] += rng.next_double();
    }
    const Vec c = growth_radius(d2, r0, 0.3);
    for (int i = 0; i < 4; ++i) CHECK(c[i] >= a[i] - 1e-12);
  }
}

TEST_CASE("default jacobian bounds dominate sampled partial derivatives") {
  SplitMix64 rng(11);
  auto sample_max = [&](const SampledDynamics& d, const Box& state_box) {
    std::vector<Vec> maxj(d.state_dim, Vec(d.state_dim, 0.0));
    const double h = 1e-6;
    Vec x(d.state_dim), u(d.input_dim), fp(d.state_dim), fm(d.state_dim);
    for (int s = 0; s < 4000; ++s) {
      for (std::size_t i = 0; i < d.state_dim; ++i)
        x[i] = rng.next_in(state_box.lower[i], state_box.upper[i]);
      for (std::size_t i = 0; i < d.input_dim; ++i)
        u[i] = rng.next_in(d.input_bounds.lower[i], d.input_bounds.upper[i]);
      for (std::size_t j = 0; j < d.state_dim; ++j) {
        Vec xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        vector_field(d.model, xp, u, std::span(fp.data(), d.state_dim));
        vector_field(d.model, xm, u, std::span(fm.data(), d.state_dim));
        for (std::size_t i = 0; i < d.state_dim; ++i)
          maxj[i][j] = std::max(maxj[i][j], std::abs(fp[i] - fm[i]) / (2 * h));
      }
    }
    return maxj;
  };

  SUBCASE("dubins") {
    const auto d = make_dubins();
    const auto mj = sample_max(d, Box({0, 0, 0}, {100, 100, 6.28}));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(d.jacobian_bound[i][j] >= mj[i][j] - 1e-3);
  }
  SUBCASE("bicycle with speed range [0,18]") {
    const auto d = make_bicycle();
    const auto mj = sample_max(d, Box({0, 0, 0, 0}, {80, 52, 6.28, 18}));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) CHECK(d.jacobian_bound[i][j] >= mj[i][j] - 1e-3);
  }
}

TEST_CASE("disturbance sampler stays inside W and is deterministic") {
  const Box W({-5.0, -2.0, -0.04}, {5.0, 2.0, 0.04});
  DisturbancePolicy pol{DisturbancePolicy::Mode::uniform_random, 99};
  DisturbanceSampler s1(pol, W), s2(pol, W);
  for (int k = 0; k < 1000; ++k) {
    const Vec a = s1.next();
    const Vec b = s2.next();
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(a[d] == b[d]);
      CHECK(a[d] >= W.lower[d]);
      CHECK(a[d] <= W.upper[d]);
    }
  }
  DisturbanceSampler corner(DisturbancePolicy{DisturbancePolicy::Mode::corner_adversarial, 1}, W);
  for (int k = 0; k < 100; ++k) {
    const Vec w = corner.next();
    for (std::size_t d = 0; d < 3; ++d)
      CHECK((w[d] == W.lower[d] || w[d] == W.upper[d]));
  }
  DisturbanceSampler none(DisturbancePolicy{DisturbancePolicy::Mode::none, 1}, W);
  const Vec z = none.next();
  for (std::size_t d = 0; d < 3; ++d) CHECK(z[d] == 0.0);
}

TEST_CASE("dynamics validation") {
  auto d = make_dubins();
  d.disturbance = Box({1.0, 1.0, 1.0}, {2.0, 2.0, 2.0});  // does not contain 0
  CHECK_THROWS_AS(d.validate(), validation_error);
  auto d2 = make_dubins();
  d2.tau = 0;
  CHECK_THROWS_AS(d2.validate(), validation_error);
}
