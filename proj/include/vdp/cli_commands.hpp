#pragma once

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vdp/groups/ristretto255.hpp"
#include "vdp/groups/zp1024.hpp"
#include "vdp/groups/zp_subgroup.hpp"
#include "vdp/harness.hpp"

namespace vdp::cli {

// exit code contract: 0 accept/success, 2 usage or configuration error,
// 3 protocol rejection
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRejected = 3;

constexpr const char* kDefaultGroup = "ristretto255";

/// Accepts plain decimals ("0.001", "9.765625e-4") and the power-of-two
/// shorthand "2^-10".
inline double parse_delta(const std::string& text) {
  if (text.rfind("2^-", 0) == 0) {
    const int k = std::stoi(text.substr(3));
    if (k <= 0 || k > 1000) throw ConfigError("delta exponent out of range");
    return std::ldexp(1.0, -k);
  }
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw ConfigError("trailing characters in delta");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError("could not parse delta '" + text + "'");
  }
}

inline std::string default_group() {
  if (const char* env = std::getenv("VDP_GROUP"); env && *env) return env;
  return kDefaultGroup;
}

/// Dispatches a template callable over the supported group backends.
template <typename F>
int with_group(const std::string& id, std::ostream& err, F&& f) {
  if (id == Ristretto255::id()) return f.template operator()<Ristretto255>();
  if (id == Zp1024::id()) return f.template operator()<Zp1024>();
  if (id == Zp61::id()) return f.template operator()<Zp61>();
  if (id == Zp16::id()) return f.template operator()<Zp16>();
  err << "error: unknown group backend '" << id << "' (supported: " << Ristretto255::id() << ", "
      << Zp1024::id() << ", " << Zp61::id() << ", " << Zp16::id() << ")\n";
  return kExitUsage;
}

// ---------------------------------------------------------------------------

inline int cmd_params(std::ostream& out, std::ostream& err, std::optional<double> epsilon,
                      std::optional<uint64_t> coins, const std::string& delta_text) {
  try {
    const double delta = parse_delta(delta_text);
    if (epsilon.has_value() == coins.has_value()) {
      err << "error: give exactly one of --epsilon or --coins\n";
      return kExitUsage;
    }
    PrivacyParams p = epsilon ? PrivacyParams::for_epsilon(*epsilon, delta)
                              : PrivacyParams::for_coins(*coins, delta);
    out << "epsilon: " << std::fixed << std::setprecision(4) << p.epsilon << "\n";
    out << "delta:   " << delta_text << " (" << std::setprecision(10) << std::defaultfloat
        << p.delta << ")\n";
    out << "coins:   " << p.n_b << "\n";
    out << "expected |noise| per prover: " << std::fixed << std::setprecision(1)
        << expected_noise_magnitude(1, p.n_b) << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

// ---------------------------------------------------------------------------

struct RunOptions {
  SessionConfig session;
  std::string group = kDefaultGroup;
  std::string out_path = "transcript.json";
  std::vector<std::string> adversaries;
};

inline int cmd_run(std::ostream& out, std::ostream& err, const RunOptions& opts) {
  return with_group(opts.group, err, [&]<GroupBackend G>() {
    try {
      std::vector<AdversarySpec> specs;
      for (const auto& a : opts.adversaries) specs.push_back(AdversarySpec::parse(a));

      const auto t = run_session<G>(opts.session, specs);
      const auto text = transcript_to_string(t);
      {
        std::ofstream f(opts.out_path, std::ios::binary);
        if (!f) {
          err << "error: cannot write " << opts.out_path << "\n";
          return kExitUsage;
        }
        f << text;
      }
      out << "transcript: " << opts.out_path << "\n";

      // trust nothing in memory: the verdict reported is the file's
      const auto back = transcript_from_string<G>(text);
      const auto verdict = verify_session(back);
      if (!verdict.accepted) {
        out << "rejected at " << verdict.phase << ": " << verdict.reason;
        if (!verdict.blame.empty()) out << " (blame: " << verdict.blame << ")";
        out << "\n";
        return kExitRejected;
      }
      for (size_t m = 0; m < back.aggregates.size(); m++) {
        out << "estimate[" << m << "]: " << back.aggregates[m].estimate << "\n";
      }
      return kExitOk;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  });
}

// ---------------------------------------------------------------------------

inline int cmd_verify(std::ostream& out, std::ostream& err, const std::string& in_path) {
  std::ifstream f(in_path, std::ios::binary);
  if (!f) {
    err << "error: cannot read " << in_path << "\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();

  std::string gid;
  try {
    gid = transcript_group_id(text);
  } catch (const ParseError& e) {
    err << "malformed transcript: " << e.what() << "\n";
    return kExitUsage;
  }
  return with_group(gid, err, [&]<GroupBackend G>() {
    try {
      const auto t = transcript_from_string<G>(text);
      const auto verdict = verify_session(t);
      if (verdict.accepted) {
        out << "accepted\n";
        return kExitOk;
      }
      out << "rejected at " << verdict.phase << ": " << verdict.reason;
      if (!verdict.blame.empty()) out << " (blame: " << verdict.blame << ")";
      out << "\n";
      return kExitRejected;
    } catch (const MalformedPayload& e) {
      out << "rejected at " << e.phase << ": " << e.what() << "\n";
      return kExitRejected;
    } catch (const ParseError& e) {
      err << "malformed transcript: " << e.what() << "\n";
      return kExitUsage;
    }
  });
}

// ---------------------------------------------------------------------------

struct BenchOptions {
  std::string sweep = "coins";
  std::string group = Zp1024::id();  // big-integer field backend, like the reference pipeline
  std::string out_path = "report.csv";
  uint32_t reps = 5;
  double budget_seconds = 0;
  uint64_t n_clients = 10000;
  uint64_t n_b = 4096;
  uint64_t seed = 7;
};

inline int cmd_bench(std::ostream& out, std::ostream& err, const BenchOptions& opts) {
  return with_group(opts.group, err, [&]<GroupBackend G>() {
    try {
      std::vector<BenchConfig> configs;
      BenchConfig base;
      base.n_clients = opts.n_clients;
      base.n_b = opts.n_b;
      base.reps = opts.reps;
      base.budget_seconds = opts.budget_seconds;
      base.seed = opts.seed;
      if (opts.sweep == "coins") {
        for (uint64_t n_b : {1024u, 2048u, 4096u, 8192u, 16384u}) {
          auto c = base;
          c.n_b = n_b;
          configs.push_back(c);
        }
      } else if (opts.sweep == "clients") {
        for (uint64_t n : {1000u, 10000u, 100000u}) {
          auto c = base;
          c.n_clients = n;
          configs.push_back(c);
        }
      } else if (opts.sweep == "bins") {
        for (uint32_t m : {1u, 2u, 4u, 8u}) {
          auto c = base;
          c.bins = m;
          configs.push_back(c);
        }
      } else {
        err << "error: unknown sweep '" << opts.sweep << "' (coins|clients|bins)\n";
        return kExitUsage;
      }

      BenchReport merged;
      for (const auto& c : configs) {
        auto r = run_phase_benchmark<G>(c);
        merged.rows.insert(merged.rows.end(), r.rows.begin(), r.rows.end());
      }
      {
        std::ofstream f(opts.out_path, std::ios::binary);
        if (!f) {
          err << "error: cannot write " << opts.out_path << "\n";
          return kExitUsage;
        }
        f << merged.to_csv();
      }
      out << merged.to_csv();
      const double us = measure_single_exponentiation_us<G>();
      out << "single exponentiation on " << G::id() << ": " << std::fixed << std::setprecision(3)
          << us << " us (laptop-class reference points: ~35 us for a big-integer field group, "
          << "~328 us for Curve25519)\n";
      return kExitOk;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  });
}

// ---------------------------------------------------------------------------

struct AuditOptions {
  uint64_t coins = 100;
  uint64_t trials = 100000;
  std::string delta_text = "2^-10";
  std::string group = Zp61::id();
  std::string out_path = "audit.json";
  uint64_t seed = 13;
};

inline int cmd_audit(std::ostream& out, std::ostream& err, const AuditOptions& opts) {
  return with_group(opts.group, err, [&]<GroupBackend G>() {
    try {
      SessionConfig cfg;
      cfg.k_provers = 1;
      cfg.n_clients = 1;
      cfg.coins = opts.coins;
      cfg.delta = parse_delta(opts.delta_text);
      cfg.seed = opts.seed;
      const std::vector<std::vector<uint8_t>> xa{{1}};
      const std::vector<std::vector<uint8_t>> xb{{0}};
      const auto report = audit_privacy<G>(cfg, xa, xb, opts.trials);
      {
        std::ofstream f(opts.out_path, std::ios::binary);
        if (!f) {
          err << "error: cannot write " << opts.out_path << "\n";
          return kExitUsage;
        }
        f << report.to_json().dump(1);
      }
      out << "trials:          " << report.trials << " per input\n";
      out << "coins:           " << report.n_b << "\n";
      out << "formula epsilon: " << std::fixed << std::setprecision(4) << report.formula_epsilon
          << "\n";
      out << "measured epsilon: " << std::setprecision(4) << report.epsilon_hat << "\n";
      out << (report.epsilon_hat <= report.formula_epsilon
                  ? "measured leakage is within the configured budget\n"
                  : "WARNING: measured leakage exceeds the configured budget\n");
      return kExitOk;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  });
}

}  // namespace vdp::cli
