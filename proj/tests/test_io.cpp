#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "crlearn/config_io.hpp"
#include "crlearn/error.hpp"
#include "crlearn/trace_io.hpp"

using namespace crlearn;

namespace {

ErrorCode parse_error(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    (void)parse_config(in, "test.cfg");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("trace round trip is lossless") {
    std::vector<TraceRow> rows{
        {1, 0.123456789012345678, -97.1234567, 41.5, 0.95, 5, true},
        {2, 1.0 / 3.0, -std::numeric_limits<double>::infinity(), 0.0, 0.0, 0, false},
        {3, 1e-300, -150.0, 1e10, 0.5, 4, false},
    };
    std::stringstream s;
    write_trace(s, rows);
    std::string header;
    std::getline(s, header);
    CHECK(header == "flop,error,i_pu_dbm,capacity,epsilon,mcs,explored");
    std::string line;
    while (std::getline(s, line)) CHECK(std::count(line.begin(), line.end(), ',') == 6);

    std::stringstream again;
    write_trace(again, rows);
    CHECK(read_trace(again) == rows);
  }

  TEST_CASE("malformed traces are rejected") {
    std::istringstream no_header("1,0.1,-90,1,0,5,0\n");
    CHECK_THROWS_AS(read_trace(no_header), Error);
    std::istringstream short_row(std::string(kTraceHeader) + "\n1,0.1,-90,1,0,5\n");
    CHECK_THROWS_AS(read_trace(short_row), Error);
    std::istringstream bad_number(std::string(kTraceHeader) + "\n1,zero,-90,1,0,5,0\n");
    CHECK_THROWS_AS(read_trace(bad_number), Error);
    std::istringstream bad_flag(std::string(kTraceHeader) + "\n1,0.1,-90,1,0,5,2\n");
    CHECK_THROWS_AS(read_trace(bad_flag), Error);
  }

  TEST_CASE("trace file written from a run parses back") {
    RunTrace tr;
    for (int t = 1; t <= 3; ++t) {
      FlopRecord r;
      r.flop = t;
      r.rel_error = 1.0 / t;
      r.i_pu_dbm = -100.0 + t;
      r.mcs = 5 - t;
      r.explored = t % 2 == 1;
      tr.records.push_back(r);
    }
    const auto dir = std::filesystem::temp_directory_path() / "crlearn_io_test";
    std::filesystem::remove_all(dir);
    write_trace_file(dir / "nested" / "trace.csv", tr);
    std::ifstream in(dir / "nested" / "trace.csv");
    CHECK(read_trace(in) == to_rows(tr));

    write_mean_error_file(dir / "mean.csv", {0.5, 0.25});
    std::ifstream mean(dir / "mean.csv");
    std::string a, b, c;
    std::getline(mean, a);
    std::getline(mean, b);
    std::getline(mean, c);
    CHECK(a == "flop,mean_error");
    CHECK(b == "1,0.5");
    CHECK(c == "2,0.25");
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("config file with every key") {
    std::istringstream in(R"(# comment line
n_su = 7
seed = 99   # trailing comment
su_range_m = 2500
su_min_dist_m = 40
p_max_dbm = 20
pu_noise_dbm = -100
pu_clear_sinr_db = 21
d_th = 0.04
prior_g_ub = 0.2
min_full_power_load = 1.5
hr_samples = 900
hr_burn_in = 70
newton_tol = 1e-9
newton_max_iter = 50
fading.t_c = 300
fading.n_blocks = 2
su_link_dist_m = 80, 400
su_noise_dbm = -101
sensing.p_correct = 0.9
ratio_model = high_snr
learner = accpm
feedback = binary
flops = 123
n_topologies = 12
mcs = A, 4
mcs = B, 8
mcs = C, 12
)");
    const ScenarioConfig c = parse_config(in);
    CHECK(c.n_su == 7);
    CHECK(c.seed == 99);
    CHECK(c.su_range_m == 2500);
    CHECK(c.su_min_dist_m == 40);
    CHECK(c.p_max_dbm == 20);
    CHECK(c.pu_noise_dbm == -100);
    CHECK(c.pu_clear_sinr_db == 21);
    CHECK(c.d_th == 0.04);
    CHECK(c.prior_g_ub == 0.2);
    CHECK(c.min_full_power_load == 1.5);
    CHECK(c.hr_samples == 900);
    CHECK(c.hr_burn_in == 70);
    CHECK(c.newton_tol == 1e-9);
    CHECK(c.newton_max_iter == 50);
    REQUIRE(c.fading);
    CHECK(c.fading->t_c == 300);
    CHECK(c.fading->n_blocks == 2);
    CHECK(c.su_link_dist_lo_m == 80);
    CHECK(c.su_link_dist_hi_m == 400);
    CHECK(c.su_noise_dbm == -101);
    CHECK(c.sensing_p_correct == 0.9);
    CHECK(c.ratio_model == RatioModel::HighSnr);
    CHECK(c.learner == LearnerKind::Accpm);
    CHECK(c.feedback == FeedbackKind::Binary);
    CHECK(c.flops == 123);
    CHECK(c.n_topologies == 12);
    REQUIRE(c.protocol.levels() == 3);
    CHECK(c.protocol.label(2) == "B");
    CHECK(c.protocol.gamma_db(3) == 12);
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("config errors name the key") {
    std::string msg;
    CHECK(parse_error("n_su = 5\nbogus = 1\n", &msg) == ErrorCode::UnknownKey);
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("test.cfg:2") != std::string::npos);
    CHECK(parse_error("n_su = five\n", &msg) == ErrorCode::InvalidConfig);
    CHECK(msg.find("n_su") != std::string::npos);
    CHECK(parse_error("just words\n") == ErrorCode::InvalidConfig);
    CHECK(parse_error("mcs = A, 9\nmcs = B, 7\n") == ErrorCode::InvalidConfig);
    CHECK(parse_error("learner = newton\n") == ErrorCode::InvalidConfig);
    CHECK(parse_error("su_link_dist_m = 100\n") == ErrorCode::InvalidConfig);
  }

  TEST_CASE("overrides") {
    ScenarioConfig c;
    apply_override(c, "n_su=9");
    apply_override(c, " learner = accpm ");
    apply_override(c, "fading=on");
    CHECK(c.n_su == 9);
    CHECK(c.learner == LearnerKind::Accpm);
    CHECK(c.fading.has_value());
    apply_override(c, "fading=off");
    CHECK_FALSE(c.fading.has_value());
    CHECK_THROWS_AS(apply_override(c, "n_su"), Error);
    CHECK_THROWS_AS(apply_override(c, "mcs=A,3"), Error);
    try {
      apply_override(c, "nope=1");
      FAIL("expected UnknownKey");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnknownKey);
    }
  }

  TEST_CASE("missing config file") {
    try {
      (void)load_config_file("/nonexistent/dir/x.cfg");
      FAIL("expected Io");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Io);
    }
  }
}
