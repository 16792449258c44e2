// Command-line front end: parameter calculus, end-to-end sessions with
// optional adversaries, transcript re-verification, benchmarks and the
// empirical privacy audit.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "vdp/cli_commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"verifiable differentially private counting queries"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read defaults from an INI/TOML file; flags override it");

  // params
  auto* params = app.add_subcommand("params", "convert between (epsilon, delta) and coin count");
  std::optional<double> p_epsilon;
  std::optional<uint64_t> p_coins;
  std::string p_delta = "2^-10";
  params->add_option("--epsilon", p_epsilon, "privacy budget epsilon");
  params->add_option("--coins", p_coins, "binomial coin count n_b");
  params->add_option("--delta", p_delta, "privacy parameter delta (decimal or 2^-k)");

  // run
  auto* run = app.add_subcommand("run", "run one end-to-end session and write the transcript");
  vdp::cli::RunOptions run_opts;
  run_opts.group = vdp::cli::default_group();
  std::string r_delta = "2^-10";
  run->add_option("--k", run_opts.session.k_provers, "number of provers")->capture_default_str();
  run->add_option("--n", run_opts.session.n_clients, "number of clients")->capture_default_str();
  run->add_option("--bins", run_opts.session.bins, "histogram bins")->capture_default_str();
  run->add_option("--epsilon", run_opts.session.epsilon, "privacy budget epsilon")
      ->capture_default_str();
  run->add_option("--delta", r_delta, "privacy parameter delta (decimal or 2^-k)")
      ->capture_default_str();
  run->add_option("--coins", [&](const std::vector<std::string>& vals) {
        run_opts.session.coins = std::stoull(vals[0]);
        return true;
      }, "override the coin count directly");
  run->add_option("--seed", run_opts.session.seed, "master seed")->capture_default_str();
  run->add_option("--inputs", run_opts.session.input_spec,
                  "client input generator (zeros|ones|bernoulli:p|onehot:uniform|onehot:j)")
      ->capture_default_str();
  run->add_option("--out", run_opts.out_path, "transcript output path")->capture_default_str();
  run->add_option("--adversary", run_opts.adversaries,
                  "adversary spec, e.g. prover1:tamper_output (repeatable)");
  run->add_option("--group", run_opts.group, "group backend")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "re-verify a transcript file");
  std::string v_in;
  verify->add_option("--in", v_in, "transcript path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "phase benchmarks, CSV output");
  vdp::cli::BenchOptions bench_opts;
  bench->add_option("--sweep", bench_opts.sweep, "sweep dimension (coins|clients|bins)")
      ->capture_default_str();
  bench->add_option("--n", bench_opts.n_clients, "client count")->capture_default_str();
  bench->add_option("--coins", bench_opts.n_b, "coin count")->capture_default_str();
  bench->add_option("--reps", bench_opts.reps, "repetitions per configuration")
      ->capture_default_str();
  bench->add_option("--budget-seconds", bench_opts.budget_seconds,
                    "reduce repetitions to fit a time budget (0 = unlimited)")
      ->capture_default_str();
  bench->add_option("--out", bench_opts.out_path, "CSV output path")->capture_default_str();
  bench->add_option("--group", bench_opts.group, "group backend")->capture_default_str();
  bench->add_option("--seed", bench_opts.seed, "benchmark seed")->capture_default_str();

  // audit
  auto* audit = app.add_subcommand("audit", "empirical privacy audit on neighboring inputs");
  vdp::cli::AuditOptions audit_opts;
  audit->add_option("--coins", audit_opts.coins, "coin count n_b")->capture_default_str();
  audit->add_option("--trials", audit_opts.trials, "sessions per input")->capture_default_str();
  audit->add_option("--delta", audit_opts.delta_text, "privacy parameter delta")
      ->capture_default_str();
  audit->add_option("--out", audit_opts.out_path, "JSON report path")->capture_default_str();
  audit->add_option("--group", audit_opts.group, "group backend")->capture_default_str();
  audit->add_option("--seed", audit_opts.seed, "audit seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return vdp::cli::kExitUsage;
  }

  try {
    if (params->parsed()) {
      return vdp::cli::cmd_params(std::cout, std::cerr, p_epsilon, p_coins, p_delta);
    }
    if (run->parsed()) {
      run_opts.session.delta = vdp::cli::parse_delta(r_delta);
      return vdp::cli::cmd_run(std::cout, std::cerr, run_opts);
    }
    if (verify->parsed()) {
      return vdp::cli::cmd_verify(std::cout, std::cerr, v_in);
    }
    if (bench->parsed()) {
      return vdp::cli::cmd_bench(std::cout, std::cerr, bench_opts);
    }
    if (audit->parsed()) {
      return vdp::cli::cmd_audit(std::cout, std::cerr, audit_opts);
    }
  } catch (const vdp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vdp::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return vdp::cli::kExitUsage;
  }
  return vdp::cli::kExitUsage;
}
