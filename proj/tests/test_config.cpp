#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "cdspin/config.hpp"
#include "cdspin/errors.hpp"

using namespace cdspin;

TEST_CASE("zeeman splitting") {
  // 0.44 * 3.7 * 0.057883818 by hand
  CHECK(zeeman_splitting(-0.44, 3.7) == doctest::Approx(-0.094234855704).epsilon(1e-12));
  CHECK(zeeman_splitting(0.0, 3.7) == 0.0);
  CHECK(zeeman_splitting(-0.44, 0.0) == 0.0);

  // The quoted 0.06 is a rounded 0.0577.
  const auto p = DotParams::defaults();
  CHECK(two_level_ratio(p) == doctest::Approx(0.0576514).epsilon(1e-5));
  CHECK(std::abs(two_level_ratio(p) - 0.06) < 0.005);
}

TEST_CASE("reduce") {
  SUBCASE("GaAs defaults") {
    const auto rc = reduce(DotParams::defaults());
    CHECK(rc.Z0 == doctest::Approx(-(0.1 - 0.094234855704) / 6.582120e-4).epsilon(1e-10));
    CHECK(rc.Z0 == doctest::Approx(-8.76).epsilon(1e-3));
    CHECK(rc.hbar == 6.582120e-4);
    CHECK(rc.muB == 5.7883818e-2);
  }
  SUBCASE("Zeeman cancels exchange") {
    DotParams p = DotParams::defaults();
    p.g = -p.J / (units::kBohrMagneton * p.B);
    CHECK(std::abs(reduce(p).Z0) < 1e-12);
  }
  SUBCASE("weak field breaks the two-level reduction") {
    DotParams p = DotParams::defaults();
    p.B = 1.0;
    CHECK(two_level_ratio(p) == doctest::Approx(0.745).epsilon(1e-3));
    CHECK_THROWS_AS(reduce(p), ValidationError);
  }
  SUBCASE("bit-identical and round trip") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> J(0.05, 0.5), ratio(-0.19, 0.19);
    for (int i = 0; i < 200; ++i) {
      DotParams p = DotParams::defaults();
      p.J = J(rng);
      // choose g so that (J + Δ)/J is the sampled ratio
      p.g = (ratio(rng) * p.J - p.J) / (units::kBohrMagneton * p.B);
      const auto a = reduce(p);
      const auto b = reduce(p);
      CHECK(a.Z0 == b.Z0);
      CHECK(a.Delta == b.Delta);
      CHECK(-a.Z0 * a.hbar - a.Delta == doctest::Approx(p.J).epsilon(1e-12));
    }
  }
}

TEST_CASE("validation rejects non-physical parameters") {
  auto bad = [](auto mutate) {
    DotParams p = DotParams::defaults();
    mutate(p);
    return p;
  };
  CHECK_NOTHROW(validate(DotParams::defaults()));
  CHECK_THROWS_AS(validate(bad([](DotParams& p) { p.J = 0.0; })), ValidationError);
  CHECK_THROWS_AS(validate(bad([](DotParams& p) { p.t_f = -1.0; })), ValidationError);
  CHECK_THROWS_AS(validate(bad([](DotParams& p) { p.w_R = 0.0; })), ValidationError);
  CHECK_THROWS_AS(validate(bad([](DotParams& p) { p.a_L = NAN; })), ValidationError);
}

TEST_CASE("defaults are the calibrated drive") {
  const auto p = DotParams::defaults();
  const auto rc = reduce(p);
  CHECK(p.A0_beta == doctest::Approx(std::abs(rc.Z0) / 2).epsilon(1e-15));
  CHECK(p.A0_alpha == kDefaultA0Alpha);
  CHECK(p.a_L == 0.54);
  CHECK(p.a_R == 0.48);
  CHECK(p.w_L == 0.1);
  CHECK(p.w_R == 0.1);
  CHECK(p.t_f == 11.0);
}

TEST_CASE("config file parsing") {
  const std::string full =
      "# comment\n"
      "J = 0.1\n g = -0.44  # inline\nB=3.7\nA0_beta = auto\nA0_alpha = 29\n"
      "a_L = 0.54\na_R = 0.48\nw_L = 0.1\nw_R = 0.1\nt_f = 11\n";
  SUBCASE("shipped defaults") {
    std::istringstream in(full);
    CHECK(parse_config(in) == DotParams::defaults());
  }
  SUBCASE("unknown key") {
    std::istringstream in(full + "alpha = 3\n");
    CHECK_THROWS_AS(parse_config(in), ValidationError);
  }
  SUBCASE("missing key") {
    std::istringstream in("J = 0.1\n");
    CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("missing key"), ValidationError);
  }
  SUBCASE("duplicate key") {
    std::istringstream in(full + "J = 0.2\n");
    CHECK_THROWS_AS(parse_config(in), ValidationError);
  }
  SUBCASE("malformed number") {
    std::string text = full;
    text.replace(text.find("29"), 2, "29x");
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_config(in), ValidationError);
  }
  SUBCASE("line without '='") {
    std::istringstream in(full + "t_f 11\n");
    CHECK_THROWS_AS(parse_config(in), ValidationError);
  }
  SUBCASE("values are validated") {
    std::string text = full;
    text.replace(text.find("B=3.7"), 5, "B=1.0");
    std::istringstream in(text);
    CHECK_THROWS_AS(parse_config(in), ValidationError);
  }
}

TEST_CASE("format_config round-trips random parameter sets") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 100; ++i) {
    DotParams p = DotParams::defaults();
    p.A0_alpha = 100 * u(rng);
    p.A0_beta = 10 * u(rng);
    p.a_L = u(rng);
    p.a_R = u(rng);
    p.w_L = u(rng);
    p.w_R = u(rng);
    p.t_f = 20 * u(rng);
    std::istringstream in(format_config(p));
    CHECK(parse_config(in) == p);
  }
}

TEST_CASE("set_param and get_param") {
  DotParams p = DotParams::defaults();
  set_param(p, "t_f", "2.5");
  CHECK(get_param(p, "t_f") == 2.5);
  set_param(p, "A0_beta", "1");
  set_param(p, "A0_beta", "auto");
  CHECK(p.A0_beta == DotParams::defaults().A0_beta);
  CHECK_THROWS_AS(set_param(p, "beta", "1"), ValidationError);
  CHECK_THROWS_AS(get_param(p, "beta"), ValidationError);
}
