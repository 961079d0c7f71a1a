#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kpq/runner.hpp"

namespace {

unsigned jobs_from_env() {
  if (const char* v = std::getenv("KPQ_JOBS")) {
    try {
      const long n = std::stol(v);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpq: numerical lab for (k,p,q)-differential subalgebras"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  long long seed = -1;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "output directory (overrides output_dir)");
  run->add_option("--seed", seed, "seed override")->check(CLI::NonNegativeNumber);
  run->add_option("--jobs", jobs, "worker threads (default: KPQ_JOBS or 1)");

  std::string report_path;
  unsigned replay_jobs = 0;
  auto* rep = app.add_subcommand("replay", "recompute a report and compare digests");
  rep->add_option("report", report_path, "report.json")->required();
  rep->add_option("--jobs", replay_jobs, "worker threads (default: KPQ_JOBS or 1)");

  auto* list = app.add_subcommand("list-instances", "print the instance registry");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << kpq::list_instances();
    return kpq::exit_pass;
  }
  kpq::RunResult res;
  if (run->parsed()) {
    kpq::RunOverrides o;
    if (!out.empty()) o.out = out;
    if (seed >= 0) o.seed = static_cast<std::uint64_t>(seed);
    o.jobs = jobs ? jobs : jobs_from_env();
    res = kpq::run_file(config_path, o);
  } else {
    res = kpq::replay(report_path, replay_jobs ? replay_jobs : jobs_from_env());
  }
  (res.exit_code == kpq::exit_error ? std::cerr : std::cout) << res.message << '\n';
  return res.exit_code;
}
