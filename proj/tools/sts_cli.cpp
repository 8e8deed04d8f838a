#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include "sts/amr.hpp"
#include "sts/config.hpp"
#include "sts/convergence.hpp"
#include "sts/errors.hpp"
#include "sts/io.hpp"
#include "sts/monotone.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STS_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return n;
}

struct Overrides {
  std::string config;
  std::string out;
  std::string family;
  double threshold = NAN;
  double snapshot_decades = NAN;
};

sts::RunConfig load(const Overrides& o) {
  sts::RunConfig cfg = o.config.empty() ? sts::default_config(sts::Problem::semilinear_heat) : sts::load_config(o.config);
  if (!o.family.empty()) {
    cfg.family = sts::parse_family(o.family);
    if (cfg.s0 < sts::min_stages(cfg.family)) throw sts::ConfigError("s0", "too small for " + o.family);
  }
  if (std::isfinite(o.threshold)) {
    if (!(o.threshold > 0.0)) throw sts::ConfigError("threshold", "must be positive");
    cfg.threshold = o.threshold;
  }
  if (std::isfinite(o.snapshot_decades)) {
    if (!(o.snapshot_decades > 0.0)) throw sts::ConfigError("snapshot_decades", "must be positive");
    cfg.snapshot_decades = o.snapshot_decades;
  }
  if (!o.out.empty()) cfg.output_dir = o.out;
  return cfg;
}

void print_summary(const sts::RunReport& r) {
  std::printf("%s %s: %s after %ld steps, t = %.17g, value = %.6g, %zu refinements, %.3f s\n",
              std::string(sts::to_string(r.config.problem)).c_str(), r.scheme.c_str(),
              std::string(sts::to_string(r.termination)).c_str(), r.steps, r.final_time.value(), r.final_value,
              r.refinements.size(), r.wall_seconds);
}

int cmd_run(const Overrides& o) {
  const sts::RunConfig cfg = load(o);
  const sts::RunReport r = sts::run(cfg);
  print_summary(r);
  if (!sts::is_success(r.termination)) {
    std::cerr << "run failed: " << r.message << '\n';
    return kExitFailure;
  }
  return 0;
}

int cmd_verify(const std::string& family, int smax, const std::string& out) {
  std::vector<sts::SchemeFamily> families;
  if (family == "all") {
    families = {sts::SchemeFamily::rkl1, sts::SchemeFamily::rkl2, sts::SchemeFamily::rkg1, sts::SchemeFamily::rkg2};
  } else {
    families = {sts::parse_family(family)};
  }
  if (smax < 1) throw sts::InvalidArgument("--smax must be >= 1");
  std::vector<std::pair<sts::SchemeFamily, int>> jobs;
  for (auto f : families) {
    for (int s = 1; s <= smax; ++s) jobs.emplace_back(f, s);
  }
  std::vector<sts::monotone::Certificate> certs(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < jobs.size();) {
      certs[i] = sts::monotone::verify_monotone(jobs[i].first, jobs[i].second, sts::monotone::default_samples());
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(jobs.size()));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const nlohmann::json j = sts::certificates_json(certs);
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    sts::write_json(out, j);
  }
  std::size_t failed = 0;
  for (const auto& c : certs) failed += !(c.monotone && c.consistent);
  std::fprintf(stderr, "%zu certificates, %zu failed\n", certs.size(), failed);
  return failed ? kExitFailure : 0;
}

int cmd_convergence(const std::string& family, int s) {
  std::vector<sts::SchemeFamily> families;
  if (family == "all") {
    families = {sts::SchemeFamily::rkl1, sts::SchemeFamily::rkl2, sts::SchemeFamily::rkg1, sts::SchemeFamily::rkg2};
  } else {
    families = {sts::parse_family(family)};
  }
  std::printf("family,s,dt,error\n");
  for (auto f : families) {
    const sts::ConvergenceStudy st = sts::heat_convergence(f, s);
    for (const auto& row : st.rows) {
      std::printf("%s,%d,%.17g,%.17g\n", std::string(sts::to_string(f)).c_str(), s, row.dt, row.error);
    }
    std::fprintf(stderr, "%s s=%d observed order %.4f\n", std::string(sts::to_string(f)).c_str(), s, st.order);
  }
  return 0;
}

int cmd_compare(const Overrides& o) {
  sts::RunConfig cfg = load(o);
  const std::string root = cfg.output_dir;
  cfg.integrator = sts::Integrator::sts;
  if (!root.empty()) cfg.output_dir = (std::filesystem::path(root) / "sts").string();
  const sts::RunReport a = sts::run(cfg);
  print_summary(a);
  cfg.integrator = cfg.problem == sts::Problem::semilinear_heat ? sts::Integrator::semi_implicit
                                                                : sts::Integrator::backward_euler;
  if (!root.empty()) cfg.output_dir = (std::filesystem::path(root) / "baseline").string();
  const sts::RunReport b = sts::run(cfg);
  print_summary(b);
  const double rel = std::abs(a.final_value - b.final_value) / std::abs(b.final_value);
  nlohmann::json j = {{"sts_scheme", a.scheme},
                      {"baseline", b.scheme},
                      {"sts_wall_seconds", a.wall_seconds},
                      {"baseline_wall_seconds", b.wall_seconds},
                      {"wall_time_ratio", b.wall_seconds / a.wall_seconds},
                      {"sts_final_value", a.final_value},
                      {"baseline_final_value", b.final_value},
                      {"final_value_relative_difference", rel},
                      {"sts_final_time", a.final_time.value()},
                      {"baseline_final_time", b.final_time.value()},
                      {"sts_steps", a.steps},
                      {"baseline_steps", b.steps}};
  if (root.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    sts::write_json((std::filesystem::path(root) / "comparison.json").string(), j);
  }
  return sts::is_success(a.termination) && sts::is_success(b.termination) ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super-time-stepping solver for blow-up and pinch-off problems"};
  app.require_subcommand(1);
  Overrides o;
  std::string family = "all";
  int smax = 64;
  int stages = 8;
  std::string cert_out;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--family", o.family, "Scheme family (rkl1, rkl2, rkg1, rkg2)");
    sub->add_option("--threshold", o.threshold, "Override the termination threshold");
    sub->add_option("--snapshot-decades", o.snapshot_decades, "Decades between snapshots");
  };
  CLI::App* run = app.add_subcommand("run", "Run one configuration");
  add_run_flags(run);
  CLI::App* verify = app.add_subcommand("verify-monotone", "Exact monotonicity certificates");
  verify->add_option("--family", family, "Family or 'all'");
  verify->add_option("--smax", smax, "Largest stage count");
  verify->add_option("--out", cert_out, "Certificate JSON path (default stdout)");
  CLI::App* conv = app.add_subcommand("convergence", "Temporal convergence study on the heat equation");
  conv->add_option("--family", family, "Family or 'all'");
  conv->add_option("--stages", stages, "Stage count s");
  CLI::App* cmp = app.add_subcommand("compare-baseline", "STS against the implicit baseline");
  add_run_flags(cmp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o);
    if (verify->parsed()) return cmd_verify(family, smax, cert_out);
    if (conv->parsed()) return cmd_convergence(family, stages);
    if (cmp->parsed()) return cmd_compare(o);
  } catch (const sts::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sts::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const sts::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
