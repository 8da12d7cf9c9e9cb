#include "crlearn/config_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "crlearn/error.hpp"

namespace crlearn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorCode::InvalidConfig,
              std::string(key) + ": " + std::string(why) + " (got '" + std::string(value) + "')");
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T out{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc{} || ptr != end || text.empty()) bad_value(key, text, "not a valid number");
  return out;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view key, std::string_view v) {
  const auto comma = v.find(',');
  if (comma == std::string_view::npos) bad_value(key, v, "expected two comma-separated fields");
  return {trim(v.substr(0, comma)), trim(v.substr(comma + 1))};
}

FadingConfig& fading_of(ScenarioConfig& cfg) {
  if (!cfg.fading) cfg.fading = FadingConfig{};
  return *cfg.fading;
}

}  // namespace

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  auto dbl = [&] { return parse_number<double>(key, value); };
  auto integer = [&] { return parse_number<int>(key, value); };

  if (key == "n_su") cfg.n_su = integer();
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "su_range_m") cfg.su_range_m = dbl();
  else if (key == "su_min_dist_m") cfg.su_min_dist_m = dbl();
  else if (key == "p_max_dbm") cfg.p_max_dbm = dbl();
  else if (key == "pu_noise_dbm") cfg.pu_noise_dbm = dbl();
  else if (key == "pu_clear_sinr_db") cfg.pu_clear_sinr_db = dbl();
  else if (key == "d_th") cfg.d_th = dbl();
  else if (key == "prior_g_ub") cfg.prior_g_ub = dbl();
  else if (key == "min_full_power_load") cfg.min_full_power_load = dbl();
  else if (key == "hr_samples") cfg.hr_samples = integer();
  else if (key == "hr_burn_in") cfg.hr_burn_in = integer();
  else if (key == "newton_tol") cfg.newton_tol = dbl();
  else if (key == "newton_max_iter") cfg.newton_max_iter = integer();
  else if (key == "fading.t_c") fading_of(cfg).t_c = integer();
  else if (key == "fading.n_blocks") fading_of(cfg).n_blocks = integer();
  else if (key == "fading") {
    if (value == "off" || value == "none") cfg.fading.reset();
    else if (value == "on") fading_of(cfg);
    else bad_value(key, value, "expected on or off");
  } else if (key == "su_link_dist_m") {
    auto [lo, hi] = split_pair(key, value);
    cfg.su_link_dist_lo_m = parse_number<double>(key, lo);
    cfg.su_link_dist_hi_m = parse_number<double>(key, hi);
  } else if (key == "su_noise_dbm") cfg.su_noise_dbm = dbl();
  else if (key == "sensing.p_correct") cfg.sensing_p_correct = dbl();
  else if (key == "ratio_model") {
    if (value == "exact") cfg.ratio_model = RatioModel::Exact;
    else if (value == "high_snr") cfg.ratio_model = RatioModel::HighSnr;
    else bad_value(key, value, "expected exact or high_snr");
  } else if (key == "learner") {
    if (value == "cgcpm") cfg.learner = LearnerKind::Cgcpm;
    else if (value == "accpm") cfg.learner = LearnerKind::Accpm;
    else bad_value(key, value, "expected cgcpm or accpm");
  } else if (key == "feedback") {
    if (value == "mcc") cfg.feedback = FeedbackKind::Mcc;
    else if (value == "binary") cfg.feedback = FeedbackKind::Binary;
    else bad_value(key, value, "expected mcc or binary");
  } else if (key == "flops") cfg.flops = integer();
  else if (key == "n_topologies") cfg.n_topologies = integer();
  else if (key == "mcs") {
    throw Error(ErrorCode::InvalidConfig, "mcs: only accepted in a config file");
  } else {
    throw Error(ErrorCode::UnknownKey, "unknown key '" + std::string(key) + "'");
  }
}

void apply_override(ScenarioConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw Error(ErrorCode::InvalidConfig,
                "override '" + std::string(assignment) + "' is not of the form key=value");
  }
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

ScenarioConfig parse_config(std::istream& in, std::string_view source) {
  ScenarioConfig cfg;
  std::vector<McsEntry> ladder;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, where + "expected key = value");
    }
    const auto key = trim(view.substr(0, eq));
    const auto value = trim(view.substr(eq + 1));
    try {
      if (key == "mcs") {
        auto [label, gamma] = split_pair(key, value);
        if (label.empty()) bad_value(key, value, "empty label");
        ladder.push_back({std::string(label), parse_number<double>(key, gamma)});
      } else {
        apply_setting(cfg, key, value);
      }
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
  }
  if (!ladder.empty()) cfg.protocol = AcmProtocol(std::move(ladder));
  return cfg;
}

ScenarioConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
  return parse_config(in, path.string());
}

}  // namespace crlearn
