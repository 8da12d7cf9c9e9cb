#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "crlearn/acm.hpp"
#include "crlearn/error.hpp"
#include "crlearn/rng.hpp"
#include "crlearn/scenario.hpp"
#include "crlearn/units.hpp"

using namespace crlearn;

namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("acm") {
  TEST_CASE("default ladder has five ascending levels") {
    const AcmProtocol p = AcmProtocol::default_ladder();
    REQUIRE(p.levels() == 5);
    CHECK(p.label(1) == "BPSK 1/2");
    CHECK(p.label(5) == "16QAM 1/2");
    CHECK(p.gamma_db(4) == doctest::Approx(9.0));
    CHECK(p.label(kOutage) == "Outage");
    for (int j = 1; j < p.levels(); ++j) CHECK(p.gamma_db(j) < p.gamma_db(j + 1));
  }

  TEST_CASE("ladder validation") {
    CHECK(code_of([] { AcmProtocol({{"a", 5.0}}); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { AcmProtocol({{"a", 5.0}, {"b", 5.0}}); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { AcmProtocol({{"a", 7.0}, {"b", 5.0}}); }) == ErrorCode::InvalidConfig);
    CHECK_THROWS_AS(AcmProtocol::default_ladder().entry(6), std::out_of_range);
  }

  TEST_CASE("unit conversions") {
    CHECK(dbm_to_mw(23.0) == doctest::Approx(199.526).epsilon(1e-5));
    CHECK(mw_to_dbm(1.0) == doctest::Approx(0.0));
    CHECK(std::isinf(mw_to_dbm(0.0)));
    CHECK(linear_to_db(db_to_linear(-96.97)) == doctest::Approx(-96.97));
  }
}

TEST_SUITE("scenario") {
  TEST_CASE("path loss law") {
    CHECK(path_gain(1000.0) == doctest::Approx(1e-12));
    CHECK(path_gain(100.0) == doctest::Approx(1e-8));
  }

  TEST_CASE("generated topology respects geometry and PU budget") {
    ScenarioConfig cfg;
    cfg.n_su = 40;
    Rng rng = derive_rng(3, 0, Stream::Topology);
    const Topology t = generate_topology(cfg, rng);
    CHECK(t.received_pu_power_dbm == doctest::Approx(-83.0));
    REQUIRE(t.g.size() == 40);
    for (int i = 0; i < 40; ++i) {
      const double d = t.su_pu_dist_m[static_cast<std::size_t>(i)];
      CHECK(d >= cfg.su_min_dist_m);
      CHECK(d <= cfg.su_range_m);
      CHECK(t.g(i) == doctest::Approx(std::pow(d, -4.0)).epsilon(1e-12));
      const double l = t.su_link_dist_m[static_cast<std::size_t>(i)];
      CHECK(l >= cfg.su_link_dist_lo_m);
      CHECK(l <= cfg.su_link_dist_hi_m);
      CHECK(t.h(i) == doctest::Approx(std::pow(l, -4.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("positions are area-uniform in the annulus") {
    ScenarioConfig cfg;
    cfg.n_su = 100;
    Rng rng = derive_rng(11, 0, Stream::Topology);
    const double r_min = cfg.su_min_dist_m, r_max = cfg.su_range_m;
    const double r_half = std::sqrt(0.5 * (r_min * r_min + r_max * r_max));
    int inside = 0, total = 0;
    for (int k = 0; k < 200; ++k) {
      const Topology t = generate_topology(cfg, rng);
      for (double d : t.su_pu_dist_m) {
        inside += d <= r_half;
        ++total;
      }
    }
    // Half the annulus area lies inside r_half; binomial 3-sigma is ~0.0075.
    CHECK(static_cast<double>(inside) / total == doctest::Approx(0.5).epsilon(0.02));
  }

  TEST_CASE("same stream gives the same topology") {
    ScenarioConfig cfg;
    Rng a = derive_rng(5, 2, Stream::Topology), b = derive_rng(5, 2, Stream::Topology);
    const Topology ta = generate_topology(cfg, a), tb = generate_topology(cfg, b);
    CHECK(ta.g == tb.g);
    CHECK(ta.h == tb.h);
    Rng c = derive_rng(5, 3, Stream::Topology);
    CHECK(generate_topology(cfg, c).g != ta.g);
  }

  TEST_CASE("block fading redraws only the interference gains") {
    ScenarioConfig cfg;
    Rng rng = derive_rng(9, 0, Stream::Topology);
    const Topology t0 = generate_topology(cfg, rng);
    Rng ch = derive_rng(9, 0, Stream::Channel);
    const Topology t1 = evolve_block_fading(t0, cfg, ch);
    const Topology t2 = evolve_block_fading(t1, cfg, ch);
    CHECK(t1.g != t0.g);
    CHECK(t2.g != t1.g);
    CHECK(t1.h == t0.h);
    CHECK(t1.received_pu_power_dbm == t0.received_pu_power_dbm);
    for (int i = 0; i < cfg.n_su; ++i) {
      CHECK(t1.g(i) == doctest::Approx(std::pow(t1.su_pu_dist_m[static_cast<std::size_t>(i)], -4.0)).epsilon(1e-12));
    }
  }

  TEST_CASE("admissible topologies sit inside the prior box and can reach the PU") {
    ScenarioConfig cfg;
    Rng rng = derive_rng(1, 0, Stream::Topology);
    for (int k = 0; k < 50; ++k) {
      const Topology t = draw_admissible_topology(cfg, rng);
      const Vec q = normalized_gains(t, cfg);
      CHECK(q.maxCoeff() <= cfg.prior_g_ub);
      CHECK(q.sum() * cfg.p_max_mw() >= cfg.min_full_power_load);
    }
  }

  TEST_CASE("normalized gains use the top-level threshold") {
    ScenarioConfig cfg;
    CHECK(mw_to_dbm(reference_threshold_mw(cfg)) == doctest::Approx(-96.966).epsilon(1e-4));
    Rng rng = derive_rng(2, 0, Stream::Topology);
    const Topology t = generate_topology(cfg, rng);
    const Vec q = normalized_gains(t, cfg);
    for (int i = 0; i < cfg.n_su; ++i) {
      CHECK(q(i) == doctest::Approx(t.g(i) / reference_threshold_mw(cfg)));
    }
  }

  TEST_CASE("config validation names the offending key") {
    auto message_of = [](ScenarioConfig cfg) -> std::string {
      try {
        cfg.validate();
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidConfig);
        return e.what();
      }
      return "";
    };
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_su = 0;
    CHECK(message_of(c).find("n_su") != std::string::npos);
    c = {};
    c.prior_g_ub = 0.0;
    CHECK(message_of(c).find("prior_g_ub") != std::string::npos);
    c = {};
    c.d_th = 0.0;
    CHECK(message_of(c).find("d_th") != std::string::npos);
    c = {};
    c.fading = FadingConfig{4, 3};
    CHECK(message_of(c).find("fading.t_c") != std::string::npos);
    c = {};
    c.pu_clear_sinr_db = 3.0;
    CHECK(message_of(c).find("pu_clear_sinr_db") != std::string::npos);
  }

  TEST_CASE("window length and sampler defaults") {
    ScenarioConfig cfg;
    cfg.fading = FadingConfig{250, 3};
    CHECK(cfg.window_length() == 50);
    CHECK(cfg.effective_hr_samples() == 2500);
    CHECK(cfg.effective_hr_burn_in() == 500);
    cfg.n_su = 2;
    CHECK(cfg.effective_hr_samples() == 2000);
  }

  TEST_CASE("derived streams are independent") {
    Rng a = derive_rng(1, 0, Stream::Learner), b = derive_rng(1, 0, Stream::Channel),
        c = derive_rng(1, 1, Stream::Learner);
    const auto x = a(), y = b(), z = c();
    CHECK(x != y);
    CHECK(x != z);
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform01(a);
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
    }
  }
}
