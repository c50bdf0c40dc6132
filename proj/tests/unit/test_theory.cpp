#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coevo/random.hpp"
#include "coevo/theory.hpp"

using namespace coevo;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("theorem 3 bound matches its formula term by term") {
  const Theorem3Inputs in{3, 10, 0.5, {0.25, 0.5}, 2.0};
  const auto b = theorem3_bound(in);
  CHECK(b.prefactor == doctest::Approx(2.0 * 10 / 0.5));
  CHECK(b.level_term == 300.0);
  CHECK(b.sum_term == doctest::Approx(16.0 * (4.0 + 2.0)));
  CHECK(b.value == doctest::Approx(40.0 * (300.0 + 96.0)));
}

TEST_CASE("theorem 3 bound rejects bad inputs") {
  CHECK_THROWS_AS(theorem3_bound({0, 10, 0.5, {}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem3_bound({2, 10, 0.0, {0.5}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem3_bound({2, 10, 1.5, {0.5}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem3_bound({2, 10, 0.5, {0.5}, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(theorem3_bound({3, 10, 0.5, {0.5}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem3_bound({2, 10, 0.5, {0.0}, 1.0}), std::invalid_argument);
}

TEST_CASE("mutation parameter and its inverse") {
  CHECK(theorem9_chi(0.01) == doctest::Approx(0.5 * std::log(42.0 / (41.0 * 1.01))));
  RandomStream rng(1);
  for (int i = 0; i < 100; ++i) {
    const double delta = (1.0 / 41.0) * (0.001 + 0.998 * rng.uniform01());
    CHECK(rel(theorem9_delta(theorem9_chi(delta)), delta) < 1e-9);
  }
  CHECK_THROWS_AS(theorem9_chi(0.0), std::invalid_argument);
  CHECK_THROWS_AS(theorem9_chi(1.0 / 41.0), std::invalid_argument);
  CHECK_THROWS_AS(theorem9_delta(0.5), std::invalid_argument);
}

TEST_CASE("theorem 9 budget matches its formula") {
  const double chi = theorem9_chi(0.01);
  const auto b = theorem9_budget({100, 100, chi, 0.9, 0.05, 0.1, 1.0, 1.0});
  const double delta = 42.0 / 41.0 * std::exp(-2.0 * chi) - 1.0;
  const double expected =
      2.0 * 100 / delta * (1e6 + 23.0 * 100 / chi * std::log(1.0 / (0.05 * 0.2)));
  CHECK(rel(b.value, expected) < 1e-12);
  CHECK(b.delta == doctest::Approx(0.01));
  CHECK(b.generations() == doctest::Approx(expected / 100));
  CHECK_THROWS_AS(theorem9_budget({100, 100, chi, 0.9, 0.0, 0.1, 1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem9_budget({100, 100, chi, 0.9, 0.05, 0.1, 0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(theorem9_budget({100, 100, 1.0, 0.9, 0.05, 0.1, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("error threshold") {
  CHECK(error_threshold(0.01) == doctest::Approx(std::log(2.0) / 0.98));
  CHECK(error_threshold(1e-9) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(error_threshold(0.5), std::invalid_argument);
  CHECK_THROWS_AS(error_threshold(0.0), std::invalid_argument);
}

TEST_CASE("square-root sandwich holds on a grid") {
  const auto c = check_sqrt_sandwich(200);
  CHECK(c.points == 200 * 200);
  CHECK(c.pass());
}

TEST_CASE("power-exponential inequality holds on a grid") {
  const auto c = check_power_exponential(200, 50);
  CHECK(c.points > 0);
  CHECK(c.pass());
}

TEST_CASE("product mgf bound holds by simulation") {
  const auto c = check_product_mgf({{20, 0.9, 0.9, 0.5}, {10, 0.7, 0.7, 0.3}}, 100000, 3);
  CHECK(c.points == 2);
  CHECK(c.pass());
}

TEST_CASE("an empty check does not pass") {
  InequalityCheck c;
  CHECK_FALSE(c.pass());
}
