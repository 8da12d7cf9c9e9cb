// Command-line front end. Talks to the library only through the C interface.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crlearn/crlearn.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  std::string figure;
};

struct ConfigDeleter {
  void operator()(crl_config* c) const { crl_config_destroy(c); }
};
struct TraceDeleter {
  void operator()(crl_trace* t) const { crl_trace_destroy(t); }
};
struct EnsembleDeleter {
  void operator()(crl_ensemble* e) const { crl_ensemble_destroy(e); }
};
using ConfigPtr = std::unique_ptr<crl_config, ConfigDeleter>;
using TracePtr = std::unique_ptr<crl_trace, TraceDeleter>;
using EnsemblePtr = std::unique_ptr<crl_ensemble, EnsembleDeleter>;

// Thrown to unwind to main with a ready exit code.
struct Failure {
  int exit_code;
};

int exit_code_for(crl_status s) {
  switch (s) {
    case CRL_ERR_INVALID_CONFIG:
    case CRL_ERR_UNKNOWN_KEY:
    case CRL_ERR_NON_POSITIVE_THRESHOLD:
    case CRL_ERR_TRUTH_OUTSIDE_PRIOR:
    case CRL_ERR_INVALID_ARGUMENT:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

void check(crl_status s, const std::string& context) {
  if (s == CRL_OK) return;
  std::fprintf(stderr, "error (%s) %s: %s\n", crl_status_name(s), context.c_str(), crl_last_error());
  throw Failure{exit_code_for(s)};
}

ConfigPtr build_config(const Options& opt) {
  crl_config* raw = nullptr;
  if (opt.config.empty()) {
    check(crl_config_create(&raw), "creating default config");
  } else {
    check(crl_config_load(opt.config.c_str(), &raw), "loading " + opt.config);
  }
  ConfigPtr cfg(raw);
  for (const std::string& s : opt.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error (invalid_config) --set '%s': expected key=value\n", s.c_str());
      throw Failure{kExitConfig};
    }
    check(crl_config_set(cfg.get(), s.substr(0, eq).c_str(), s.substr(eq + 1).c_str()),
          "--set " + s);
  }
  if (opt.seed) {
    check(crl_config_set(cfg.get(), "seed", std::to_string(*opt.seed).c_str()), "--seed");
  }
  check(crl_config_validate(cfg.get()), "validating config");
  return cfg;
}

ConfigPtr derive(const crl_config* base, std::initializer_list<std::pair<const char*, std::string>> kv) {
  crl_config* raw = nullptr;
  check(crl_config_clone(base, &raw), "cloning config");
  ConfigPtr cfg(raw);
  for (const auto& [k, v] : kv) check(crl_config_set(cfg.get(), k, v.c_str()), std::string("setting ") + k);
  check(crl_config_validate(cfg.get()), "validating derived config");
  return cfg;
}

std::string format_flops(int32_t flops) { return flops < 0 ? "not reached" : std::to_string(flops); }

int cmd_run(const Options& opt) {
  ConfigPtr cfg = build_config(opt);
  crl_trace* raw = nullptr;
  check(crl_run(cfg.get(), &raw), "run");
  TracePtr trace(raw);
  const auto path = (std::filesystem::path(opt.out) / "trace.csv").string();
  check(crl_trace_write_csv(trace.get(), path.c_str()), "writing " + path);

  crl_run_summary s{};
  check(crl_trace_get_summary(trace.get(), &s), "summary");
  crl_trace_row last{};
  const size_t n = crl_trace_length(trace.get());
  if (n > 0) check(crl_trace_row_at(trace.get(), n - 1, &last), "last row");
  std::printf("trace            %s\n", path.c_str());
  std::printf("flops            %zu\n", n);
  std::printf("reference_mcs    %d\n", s.reference_mcs);
  std::printf("final_error      %.6g\n", last.error);
  std::printf("flops_to_1pct    %s\n", format_flops(s.flops_to_1pct).c_str());
  std::printf("mean_i_pu_dbm    %.3f\n", s.mean_i_pu_dbm);
  std::printf("mean_capacity    %.4f\n", s.mean_capacity);
  std::printf("dropped_obs      %d\n", s.dropped_observations);
  std::printf("recoveries       %d\n", s.geometry_recoveries);
  return 0;
}

void run_combo(const crl_config* cfg, crl_learner learner, crl_feedback feedback, int32_t n_topo,
               int32_t flops, const std::filesystem::path& file) {
  crl_ensemble* raw = nullptr;
  check(crl_ensemble_run(cfg, learner, feedback, n_topo, flops, 0, &raw), "ensemble " + file.string());
  EnsemblePtr ens(raw);
  check(crl_ensemble_write_csv(ens.get(), file.string().c_str()), "writing " + file.string());
  crl_ensemble_summary s{};
  check(crl_ensemble_get_summary(ens.get(), &s), "summary");
  std::printf("%-28s runs=%d converged=%d mean_flops_to_1pct=%.2f mean_i_pu_dbm=%.3f mean_capacity=%.4f\n",
              file.filename().string().c_str(), s.n_runs, s.n_converged, s.mean_flops_to_1pct,
              s.mean_i_pu_dbm, s.mean_capacity);
  std::fflush(stdout);
}

const char* learner_name(crl_learner l) { return l == CRL_LEARNER_ACCPM ? "accpm" : "cgcpm"; }
const char* feedback_name(crl_feedback f) { return f == CRL_FEEDBACK_BINARY ? "binary" : "mcc"; }

int cmd_replicate(const Options& opt) {
  ConfigPtr base = build_config(opt);
  const std::filesystem::path out(opt.out);
  // Passing 0 lets the library take n_topologies and the flop budget from the config.

  const crl_learner learners[] = {CRL_LEARNER_CGCPM, CRL_LEARNER_ACCPM};
  if (opt.figure == "fig3") {
    ConfigPtr cfg = derive(base.get(), {{"n_su", "5"}, {"fading", "off"}});
    for (crl_learner l : learners) {
      for (crl_feedback f : {CRL_FEEDBACK_MCC, CRL_FEEDBACK_BINARY}) {
        run_combo(cfg.get(), l, f, 0, 0,
                  out / (std::string("fig3_") + learner_name(l) + "_" + feedback_name(f) + ".csv"));
      }
    }
  } else if (opt.figure == "fig8") {
    ConfigPtr cfg = derive(base.get(), {{"n_su", "5"}, {"fading", "on"}});
    for (crl_learner l : learners) {
      run_combo(cfg.get(), l, CRL_FEEDBACK_MCC, 0, 0,
                out / (std::string("fig8_") + learner_name(l) + "_mcc.csv"));
    }
  } else {
    for (int n : {5, 10}) {
      ConfigPtr cfg = derive(base.get(), {{"n_su", std::to_string(n)}, {"fading", "off"}});
      for (crl_learner l : learners) {
        run_combo(cfg.get(), l, CRL_FEEDBACK_MCC, 0, 0,
                  out / ("fig11_n" + std::to_string(n) + "_" + learner_name(l) + "_mcc.csv"));
      }
    }
  }
  return 0;
}

int cmd_thresholds(const Options& opt) {
  ConfigPtr cfg = build_config(opt);
  size_t count = 0;
  crl_thresholds(cfg.get(), nullptr, 0, &count);
  std::vector<crl_threshold_row> rows(count);
  check(crl_thresholds(cfg.get(), rows.data(), rows.size(), &count), "thresholds");
  std::printf("%-12s %9s %12s %10s %10s\n", "mcs", "gamma_db", "i_th_dbm", "c_gamma", "c_exact");
  for (const auto& r : rows) {
    char exact[32];
    if (std::isnan(r.threshold_ratio)) std::snprintf(exact, sizeof exact, "-");
    else std::snprintf(exact, sizeof exact, "%.4f", r.threshold_ratio);
    std::printf("%-12s %9.2f %12.2f %10.4f %10s\n", r.label, r.gamma_db, r.i_th_dbm, r.gamma_ratio, exact);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive-radio interference learning with cutting-plane localization"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Config file (key = value lines)");
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_option("--seed", opt.seed, "Master seed override");
    sub->add_option("--set", opt.sets, "Override key=value (repeatable)")->take_all();
  };
  CLI::App* run = app.add_subcommand("run", "Single run; writes <out>/trace.csv");
  add_common(run);
  CLI::App* rep = app.add_subcommand("replicate", "Ensemble runs behind one figure");
  add_common(rep);
  rep->add_option("figure", opt.figure, "fig3, fig8 or fig11")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig8", "fig11"}));
  CLI::App* thr = app.add_subcommand("thresholds", "Print the interference threshold table");
  add_common(thr);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (rep->parsed()) return cmd_replicate(opt);
    return cmd_thresholds(opt);
  } catch (const Failure& f) {
    return f.exit_code;
  }
}
