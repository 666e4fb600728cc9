#include <doctest.h>

#include <cmath>
#include <vector>

#include "cdspin/errors.hpp"
#include "cdspin/numerics.hpp"

using namespace cdspin::numerics;

TEST_CASE("stencils are exact on quartics") {
  auto f = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t - 0.3 * t * t * t + 0.1 * t * t * t * t; };
  auto df = [](double t) { return -2.0 + t - 0.9 * t * t + 0.4 * t * t * t; };
  const double h = 0.1;
  std::vector<double> v;
  for (int i = 0; i < 12; ++i) v.push_back(f(i * h));
  const auto d = differentiate(v, h);
  for (int i = 0; i < 12; ++i) CHECK(d[i] == doctest::Approx(df(i * h)).epsilon(1e-10));
}

TEST_CASE("differentiation converges at fourth order") {
  auto max_error = [](int n) {
    const double h = 1.0 / (n - 1);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(3.0 * i * h);
    const auto d = differentiate(v, h);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(d[i] - 3.0 * std::cos(3.0 * i * h)));
    return e;
  };
  const double ratio = max_error(41) / max_error(81);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
  CHECK_THROWS_AS(differentiate(std::vector<double>{1.0}, 0.1), cdspin::GridError);
}

TEST_CASE("cubic interpolation") {
  auto cubic = [](double t) { return 2.0 - t + 0.25 * t * t * t; };
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(cubic(0.5 + 0.2 * i));
  const UniformCubic interp(0.5, 0.2, v);
  for (int i = 0; i <= 10; ++i) CHECK(interp(0.5 + 0.2 * i) == doctest::Approx(v[i]).epsilon(1e-14));
  CHECK(interp(0.5) == v[0]);
  for (double t = 0.5; t <= 2.5; t += 0.013) CHECK(interp(t) == doctest::Approx(cubic(t)).epsilon(1e-12));
  CHECK(interp(-3.0) == v.front());
  CHECK(interp(10.0) == v.back());
}

TEST_CASE("line fit") {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y{1.0, -1.0, -3.0, -5.0};
  const auto fit = fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(-2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line(std::vector<double>{1.0}, std::vector<double>{1.0}), cdspin::ValidationError);
}

TEST_CASE("spaced ranges") {
  const auto lin = spaced(-0.2, 0.2, 41);
  CHECK(lin.size() == 41);
  CHECK(lin[20] == 0.0);
  CHECK(lin.front() == -0.2);
  CHECK(lin.back() == 0.2);
  const auto lg = spaced(0.2, 11.0, 25, true);
  CHECK(lg.front() == 0.2);
  CHECK(lg.back() == 11.0);
  for (std::size_t i = 1; i + 1 < lg.size(); ++i) {
    CHECK(lg[i] * lg[i] == doctest::Approx(lg[i - 1] * lg[i + 1]).epsilon(1e-12));
  }
  CHECK(spaced(3.0, 5.0, 1) == std::vector<double>{3.0});
  CHECK_THROWS_AS(spaced(0.0, 1.0, 5, true), cdspin::GridError);
}
