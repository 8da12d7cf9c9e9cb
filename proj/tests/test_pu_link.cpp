#include <doctest.h>

#include <cmath>

#include "crlearn/error.hpp"
#include "crlearn/pu_link.hpp"
#include "crlearn/units.hpp"
#include "oracles.hpp"

using namespace crlearn;

namespace {

Topology two_su_link() {
  Topology t;
  t.g = Vec(2);
  t.g << 1e-12, 4e-12;
  t.h = Vec::Ones(2);
  t.received_pu_power_dbm = -83.0;
  t.pu_noise_dbm = -103.0;
  return t;
}

}  // namespace

TEST_SUITE("pu_link") {
  TEST_CASE("SINR with the CRN silent is the clear SINR") {
    CHECK(pu_sinr(two_su_link(), Vec::Zero(2)) == doctest::Approx(20.0));
  }

  TEST_CASE("interference equal to the noise costs 3 dB") {
    Topology t = two_su_link();
    const double noise = dbm_to_mw(-103.0);
    Vec p(2);
    p << noise / t.g(0), 0.0;
    CHECK(pu_sinr(t, p) == doctest::Approx(20.0 - 10.0 * std::log10(2.0)).epsilon(1e-9));
  }

  TEST_CASE("aggregate interference is linear") {
    Topology t = two_su_link();
    Vec p(2);
    p << 3.0, 7.0;
    CHECK(aggregate_interference_mw(t, 2.0 * p) == doctest::Approx(2.0 * aggregate_interference_mw(t, p)));
  }

  TEST_CASE("MCS selection") {
    const AcmProtocol p = AcmProtocol::default_ladder();
    CHECK(select_mcs(20.0, p) == 5);
    CHECK(select_mcs(8.0, p) == 3);
    CHECK(select_mcs(9.0, p) == 4);
    CHECK(select_mcs(5.0, p) == 1);
    CHECK(select_mcs(4.9, p) == kOutage);
  }

  TEST_CASE("threshold algebra") {
    const AcmProtocol p = AcmProtocol::default_ladder();
    const auto th = interference_thresholds(p, -83.0, -103.0);
    REQUIRE(th.size() == 5);
    CHECK(th[4] == doctest::Approx(-96.97).epsilon(0.1 / 96.97));
    CHECK(th[0] == doctest::Approx(-88.14).epsilon(0.01 / 88.14));
    for (int j = 0; j < 5; ++j) {
      CHECK(th[static_cast<std::size_t>(j)] ==
            doctest::Approx(mw_to_dbm(oracle::threshold_mw(-83.0, -103.0, p.gamma_db(j + 1)))));
    }
    for (int j = 0; j + 1 < 5; ++j) CHECK(th[static_cast<std::size_t>(j)] > th[static_cast<std::size_t>(j + 1)]);
  }

  TEST_CASE("thresholds shift with a common offset") {
    const AcmProtocol p = AcmProtocol::default_ladder();
    const auto a = interference_thresholds(p, -83.0, -103.0);
    const auto b = interference_thresholds(p, -73.0, -93.0);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(b[j] == doctest::Approx(a[j] + 10.0));
  }

  TEST_CASE("unreachable level is rejected") {
    const AcmProtocol p({{"low", 5.0}, {"high", 25.0}});
    try {
      (void)interference_thresholds(p, -83.0, -103.0);
      FAIL("expected NonPositiveThreshold");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveThreshold);
    }
  }

  TEST_CASE("observed level matches the threshold bin of the interference") {
    const AcmProtocol protocol = AcmProtocol::default_ladder();
    const auto th = interference_thresholds(protocol, -83.0, -103.0);
    Topology t = two_su_link();
    for (int a = 0; a <= 60; ++a) {
      for (int b = 0; b <= 60; ++b) {
        Vec p(2);
        p << a * 2.5, b * 2.5;
        const double i_mw = aggregate_interference_mw(t, p);
        const int j = select_mcs(pu_sinr(t, p), protocol);
        if (j == kOutage) {
          CHECK(i_mw > dbm_to_mw(th[0]) * (1 - 1e-12));
          continue;
        }
        CHECK(i_mw <= dbm_to_mw(th[static_cast<std::size_t>(j - 1)]) * (1 + 1e-12));
        if (j < protocol.levels()) CHECK(i_mw > dbm_to_mw(th[static_cast<std::size_t>(j)]) * (1 - 1e-12));
      }
    }
  }

  TEST_CASE("probe records the current level") {
    PuState s{-83.0, -103.0, 5};
    Topology t = two_su_link();
    Vec p(2);
    p << 0.0, 1e9;  // drives the PU into outage
    CHECK(probe(s, t, p, AcmProtocol::default_ladder()) == kOutage);
    CHECK(s.current_mcs == kOutage);
    CHECK(probe(s, t, Vec::Zero(2), AcmProtocol::default_ladder()) == 5);
  }
}
