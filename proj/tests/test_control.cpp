#include <doctest.h>

#include <cmath>
#include <random>

#include "crlearn/control.hpp"
#include "crlearn/error.hpp"
#include "oracles.hpp"

using namespace crlearn;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("control") {
  TEST_CASE("exploration probability") {
    const EpsilonSchedule s{0.05};
    CHECK(epsilon(0.10, 1.0, s) == doctest::Approx(0.5));
    CHECK(epsilon(0.05, 1.0, s) == 0.0);
    CHECK(epsilon(0.04, 1.0, s) == 0.0);
    CHECK(epsilon(2.0, 10.0, s) == doctest::Approx(0.75));
    try {
      (void)epsilon(1.0, 0.0, s);
      FAIL("expected ZeroEstimate");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroEstimate);
    }
  }

  TEST_CASE("waterfilling examples") {
    const Vec ones = Vec::Ones(2);
    Vec p = exploit_waterfill(vec2(1, 1), ones, ones, vec2(10, 10));
    CHECK(p(0) == doctest::Approx(0.5));
    CHECK(p(1) == doctest::Approx(0.5));

    p = exploit_waterfill(vec2(1, 2), ones, ones, vec2(1e6, 1e6));
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(1) == doctest::Approx(0.0).epsilon(1e-9));

    p = exploit_waterfill(vec2(0.01, 1), ones, ones, vec2(10, 10));
    CHECK(p(0) == doctest::Approx(10.0));
    CHECK(p(1) == doctest::Approx(0.9));
  }

  TEST_CASE("inactive constraint returns full power") {
    const Vec p = exploit_waterfill(vec2(0.01, 0.02), Vec::Ones(2), Vec::Ones(2), vec2(10, 10));
    CHECK(p == vec2(10, 10));
  }

  TEST_CASE("negligible gains get full power") {
    const Vec p = exploit_waterfill(vec2(1e-14, 1.0), Vec::Ones(2), Vec::Ones(2), vec2(5, 5));
    CHECK(p(0) == 5.0);
    CHECK(1e-14 * p(0) + p(1) == doctest::Approx(1.0));
  }

  TEST_CASE("waterfilling beats a fine grid") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
      const Vec g = vec2(u(rng), u(rng));
      const Vec h = vec2(u(rng), u(rng));
      const Vec noise = vec2(u(rng), u(rng));
      const Vec p_max = vec2(u(rng), u(rng));
      const Vec p = exploit_waterfill(g, h, noise, p_max);
      CHECK((p.array() >= 0.0).all());
      CHECK((p.array() <= p_max.array()).all());
      if (g.dot(p_max) > 1.0) CHECK(std::abs(g.dot(p) - 1.0) <= 1e-9);

      double grid_best = 0.0;
      for (int a = 0; a < 200; ++a) {
        for (int b = 0; b < 200; ++b) {
          const Vec q = vec2(p_max(0) * a / 199.0, p_max(1) * b / 199.0);
          if (g.dot(q) > 1.0) continue;
          grid_best = std::max(grid_best, oracle::shannon(q, h, noise));
        }
      }
      CHECK(capacity(p, h, noise) >= grid_best - 1e-6);
    }
  }

  TEST_CASE("waterfilling satisfies the optimality conditions") {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 6;
      Vec g(n), h(n), noise(n), p_max(n);
      for (int i = 0; i < n; ++i) {
        g(i) = u(rng);
        h(i) = u(rng);
        noise(i) = u(rng);
        p_max(i) = u(rng);
      }
      const Vec p = exploit_waterfill(g, h, noise, p_max);
      if (g.dot(p_max) <= 1.0) continue;
      // Marginal utility per unit of interference: equal for interior powers,
      // at least that for capped powers, at most that for zero powers.
      double level = -1.0;
      for (int i = 0; i < n; ++i) {
        const double m = h(i) / (noise(i) + h(i) * p(i)) / g(i);
        if (p(i) > 1e-12 && p(i) < p_max(i) - 1e-12) {
          if (level < 0.0) level = m;
          CHECK(m == doctest::Approx(level).epsilon(1e-8));
        }
      }
      if (level < 0.0) continue;
      for (int i = 0; i < n; ++i) {
        const double m = h(i) / (noise(i) + h(i) * p(i)) / g(i);
        if (p(i) >= p_max(i) - 1e-12) CHECK(m >= level * (1 - 1e-8));
        if (p(i) <= 1e-12) CHECK(m <= level * (1 + 1e-8));
      }
    }
  }

  TEST_CASE("exploration sample lies on the estimated constraint") {
    Rng rng(33);
    Vec g(4);
    g << 0.3, 0.1, 0.5, 0.2;
    const Vec p_max = Vec::Constant(4, 2.0);
    for (int k = 0; k < 500; ++k) {
      const Vec p = explore_sample(g, p_max, rng);
      CHECK(std::abs(g.dot(p) - 1.0) < 1e-9);
      CHECK((p.array() >= 0.0).all());
      CHECK((p.array() <= p_max.array()).all());
    }
  }

  TEST_CASE("exploration on a segment is uniform") {
    Rng rng(34);
    Vec sum = Vec::Zero(2);
    const int n = 4000;
    for (int k = 0; k < n; ++k) sum += explore_sample(vec2(1, 1), vec2(1, 1), rng);
    sum /= n;
    CHECK(std::abs(sum(0) - 0.5) <= 0.02);
    CHECK(std::abs(sum(1) - 0.5) <= 0.02);
  }

  TEST_CASE("exploration edge cases") {
    Rng rng(35);
    Vec g(1), p_max(1);
    g << 0.5;
    p_max << 10.0;
    CHECK(explore_sample(g, p_max, rng)(0) == doctest::Approx(2.0));
    try {
      (void)explore_sample(vec2(0.01, 0.01), vec2(1, 1), rng);
      FAIL("expected EmptySlice");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptySlice);
    }
  }

  TEST_CASE("capacity") {
    CHECK(capacity(Vec::Zero(2), Vec::Ones(2), Vec::Ones(2)) == 0.0);
    Vec one(1);
    one << 1.0;
    CHECK(capacity(one, one, one) == doctest::Approx(1.0));
    CHECK(capacity(vec2(1.0, 2.0), Vec::Ones(2), Vec::Ones(2)) >
          capacity(vec2(1.0, 1.5), Vec::Ones(2), Vec::Ones(2)));
  }
}
