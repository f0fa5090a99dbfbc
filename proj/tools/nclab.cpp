// nclab: runs one experiment from a JSON config and writes CSV/JSON artifacts.
//
// exit 0 when every check passes, 1 check failure, 2 bad config or
// usage, 3 resource cap, 4 other runtime error.

#include <chrono>
#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

using namespace nclab;
using namespace nclab::cli;

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  unsigned threads = 0;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "experiment config (JSON)");
  sub->add_option("--seed", f.seed, "override base_seed");
  sub->add_option("--out", f.out, "override the output directory");
  sub->add_option("--threads", f.threads, "worker threads (results do not depend on it)");
}

int run(const std::string& kind, const Flags& f, CLI::App* sub) {
  json doc = json::object();
  if (!f.config.empty()) doc = load_json(f.config);
  if (sub->count("--seed")) doc["base_seed"] = f.seed;
  if (sub->count("--threads")) doc["threads"] = f.threads;
  if (sub->count("--out")) doc["output"] = {{"dir", f.out}};
  const ExperimentConfig cfg = materialize(doc, kind);

  const auto t0 = std::chrono::steady_clock::now();
  const Report rep = run_experiment(cfg);
  const json summary = write_outputs(cfg, rep);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  for (const auto& c : summary["checks"])
    std::cout << c["status"].get<std::string>() << "  " << c["name"].get<std::string>() << "  value=" << c["value"]
              << " tol=" << c["tolerance"] << '\n';
  std::cout << cfg.experiment << ": " << summary["status"].get<std::string>() << " (config " << cfg.hash() << ", seed "
            << cfg.base_seed << ", " << secs << " s) -> " << cfg.out_dir << '\n';
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nclab experiment runner"};
  app.require_subcommand(1);
  Flags flags;
  std::vector<std::pair<std::string, CLI::App*>> subs;
  for (const auto& k : experiment_kinds()) subs.emplace_back(k, app.add_subcommand(k, "run the " + k + " experiment"));
  subs.emplace_back("", app.add_subcommand("run", "run the experiment named in --config"));
  for (auto& [k, s] : subs) add_flags(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (auto& [k, s] : subs)
      if (s->parsed()) return run(k, flags, s);
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_resource_cap() ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 2;
}
