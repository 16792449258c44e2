#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vdp/parallel.hpp"
#include "vdp/transcript.hpp"

namespace vdp {

// ---------------------------------------------------------------------------
// Session configuration and adversary specifications.

struct SessionConfig {
  uint32_t k_provers = 2;
  uint32_t n_clients = 100;
  uint32_t bins = 1;
  double epsilon = 1.0;
  double delta = 0.0009765625;  // 2^-10
  std::optional<uint64_t> coins;  // overrides the epsilon-derived count
  uint64_t seed = 0;
  std::string input_spec = "bernoulli:0.5";

  PrivacyParams privacy() const {
    return coins ? PrivacyParams::for_coins(*coins, delta)
                 : PrivacyParams::for_epsilon(epsilon, delta);
  }
};

struct AdversarySpec {
  enum class Role { Prover, Client, Verifier };
  enum class Behavior {
    Honest,
    TamperOutput,
    NonBitCommitment,
    MorraMisreveal,
    MorraAdaptive,
    ExcludeClient,
    ColludeIllegalInput,
  };

  Role role = Role::Prover;
  uint32_t index = 0;
  Behavior behavior = Behavior::Honest;
  uint32_t target = 0;  // excluded client, or colluding prover for a client

  /// "prover1:tamper_output", "client3:collude_illegal_input:0",
  /// "prover0:exclude_client:5"
  static AdversarySpec parse(const std::string& text);
  std::string describe() const;
  void validate(const SessionConfig& cfg) const;
};

inline AdversarySpec AdversarySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("adversary spec needs role:behavior");
  const std::string who = text.substr(0, colon);
  std::string rest = text.substr(colon + 1);
  std::string behavior = rest;
  std::string arg;
  if (const auto c2 = rest.find(':'); c2 != std::string::npos) {
    behavior = rest.substr(0, c2);
    arg = rest.substr(c2 + 1);
  }

  AdversarySpec spec;
  auto parse_index = [&](size_t prefix_len) {
    try {
      spec.index = static_cast<uint32_t>(std::stoul(who.substr(prefix_len)));
    } catch (...) {
      throw ConfigError("bad adversary index in '" + who + "'");
    }
  };
  if (who.rfind("prover", 0) == 0) {
    spec.role = Role::Prover;
    parse_index(6);
  } else if (who.rfind("client", 0) == 0) {
    spec.role = Role::Client;
    parse_index(6);
  } else if (who == "verifier") {
    spec.role = Role::Verifier;
  } else {
    throw ConfigError("unknown adversary role '" + who + "'");
  }

  static const std::map<std::string, Behavior> kNames = {
      {"honest", Behavior::Honest},
      {"tamper_output", Behavior::TamperOutput},
      {"nonbit_commitment", Behavior::NonBitCommitment},
      {"morra_misreveal", Behavior::MorraMisreveal},
      {"morra_adaptive", Behavior::MorraAdaptive},
      {"exclude_client", Behavior::ExcludeClient},
      {"collude_illegal_input", Behavior::ColludeIllegalInput},
  };
  const auto it = kNames.find(behavior);
  if (it == kNames.end()) throw ConfigError("unknown adversary behavior '" + behavior + "'");
  spec.behavior = it->second;
  if (!arg.empty()) {
    try {
      spec.target = static_cast<uint32_t>(std::stoul(arg));
    } catch (...) {
      throw ConfigError("bad adversary argument '" + arg + "'");
    }
  }
  return spec;
}

inline std::string AdversarySpec::describe() const {
  std::string who = role == Role::Prover   ? "prover:" + std::to_string(index)
                    : role == Role::Client ? "client:" + std::to_string(index)
                                           : "verifier";
  static const char* kNames[] = {"honest",         "tamper_output",  "nonbit_commitment",
                                 "morra_misreveal", "morra_adaptive", "exclude_client",
                                 "collude_illegal_input"};
  return who + ":" + kNames[static_cast<int>(behavior)];
}

inline void AdversarySpec::validate(const SessionConfig& cfg) const {
  switch (behavior) {
    case Behavior::Honest:
      return;
    case Behavior::TamperOutput:
    case Behavior::NonBitCommitment:
    case Behavior::MorraMisreveal:
    case Behavior::MorraAdaptive:
      if (role != Role::Prover) throw ConfigError("behavior requires a prover role");
      break;
    case Behavior::ExcludeClient:
      if (role != Role::Prover) throw ConfigError("behavior requires a prover role");
      if (target >= cfg.n_clients) throw ConfigError("excluded client out of range");
      break;
    case Behavior::ColludeIllegalInput:
      if (role != Role::Client) throw ConfigError("behavior requires a client role");
      if (target >= cfg.k_provers) throw ConfigError("colluding prover out of range");
      break;
  }
  if (role == Role::Prover && index >= cfg.k_provers) throw ConfigError("prover index out of range");
  if (role == Role::Client && index >= cfg.n_clients) throw ConfigError("client index out of range");
}

// ---------------------------------------------------------------------------
// Client input generation.

inline std::vector<std::vector<uint8_t>> generate_inputs(const SessionConfig& cfg,
                                                         SeededRng& rng) {
  std::vector<std::vector<uint8_t>> inputs(cfg.n_clients);
  const auto& spec = cfg.input_spec;
  for (uint32_t i = 0; i < cfg.n_clients; i++) {
    std::vector<uint8_t> x(cfg.bins, 0);
    if (cfg.bins == 1) {
      if (spec == "zeros") {
        x[0] = 0;
      } else if (spec == "ones") {
        x[0] = 1;
      } else if (spec.rfind("bernoulli:", 0) == 0) {
        const double p = std::stod(spec.substr(10));
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bernoulli probability out of range");
        x[0] = (static_cast<double>(rng.uniform_below(1u << 30)) / (1u << 30)) < p ? 1 : 0;
      } else {
        throw ConfigError("unknown input spec '" + spec + "' for a counting query");
      }
    } else {
      if (spec == "onehot:uniform") {
        x[rng.uniform_below(cfg.bins)] = 1;
      } else if (spec.rfind("onehot:", 0) == 0) {
        const auto j = std::stoul(spec.substr(7));
        if (j >= cfg.bins) throw ConfigError("one-hot bin out of range");
        x[j] = 1;
      } else {
        throw ConfigError("unknown input spec '" + spec + "' for a histogram query");
      }
    }
    inputs[i] = std::move(x);
  }
  return inputs;
}

// ---------------------------------------------------------------------------
// The in-process session driver: a deterministic round-robin over the
// parties' message handlers, writing every broadcast into the transcript.

template <GroupBackend G>
struct SessionPrivateView {
  // [prover][bin] -> private coin values and randomness
  std::vector<std::vector<std::vector<typename G::Scalar>>> bit_values;
  std::vector<std::vector<std::vector<typename G::Scalar>>> bit_randomness;
};

template <GroupBackend G>
SessionTranscript<G> run_session(const SessionConfig& cfg,
                                 const std::vector<AdversarySpec>& adversaries = {},
                                 const std::vector<std::vector<uint8_t>>* explicit_inputs = nullptr,
                                 SessionPrivateView<G>* private_view = nullptr) {
  const auto params = cfg.privacy();
  check_debias_window<G>(cfg.n_clients, cfg.k_provers, params.n_b);
  if (cfg.k_provers < 1) throw ConfigError("need at least one prover");
  if (cfg.bins < 1) throw ConfigError("need at least one bin");
  for (const auto& a : adversaries) a.validate(cfg);

  auto find_adversary = [&](AdversarySpec::Role role, uint32_t index,
                            AdversarySpec::Behavior behavior) -> const AdversarySpec* {
    for (const auto& a : adversaries) {
      if (a.role == role && a.behavior == behavior &&
          (role == AdversarySpec::Role::Verifier || a.index == index)) {
        return &a;
      }
    }
    return nullptr;
  };

  SeededRng master(cfg.seed);
  SessionTranscript<G> t;
  t.pp = setup<G>();
  t.params = params;
  t.n_clients = cfg.n_clients;
  t.k_provers = cfg.k_provers;
  t.bins = cfg.bins;
  {
    auto sid_rng = master.child("session-id");
    t.session_id.resize(16);
    sid_rng.fill(t.session_id);
  }

  // clients build and broadcast; the verifier validates in public
  std::vector<std::vector<uint8_t>> inputs;
  if (explicit_inputs) {
    if (explicit_inputs->size() != cfg.n_clients) throw ConfigError("wrong explicit input count");
    inputs = *explicit_inputs;
  } else {
    auto input_rng = master.child("inputs");
    inputs = generate_inputs(cfg, input_rng);
  }

  std::vector<ClientSubmission<G>> submissions;
  submissions.reserve(cfg.n_clients);
  for (uint32_t i = 0; i < cfg.n_clients; i++) {
    auto rng = master.child_indexed("client", i);
    if (find_adversary(AdversarySpec::Role::Client, i,
                       AdversarySpec::Behavior::ColludeIllegalInput)) {
      // illegal input: weight 2 for histograms, the scalar 2 for counting
      std::vector<typename G::Scalar> coords(cfg.bins, G::scalar_zero());
      if (cfg.bins == 1) {
        coords[0] = G::scalar_from_u64(2);
      } else {
        coords[0] = G::scalar_one();
        coords[1] = G::scalar_one();
      }
      submissions.push_back(detail::build_submission_unchecked(t.pp, coords, i, cfg.k_provers,
                                                               t.session_id, rng));
    } else {
      submissions.push_back(build_client_submission(t.pp, inputs[i], i, cfg.k_provers,
                                                    t.session_id, rng));
    }
    t.client_broadcasts.push_back(submissions.back().broadcast);
  }
  for (uint32_t i = 0; i < cfg.n_clients; i++) {
    t.client_verdicts.push_back(verify_client_submission(t.pp, t.client_broadcasts[i],
                                                         t.session_id, cfg.k_provers, cfg.bins));
  }

  // provers take the accepted payloads and commit to their private coins
  std::vector<std::vector<ProverLane<G>>> lanes(cfg.k_provers);
  if (private_view) {
    private_view->bit_values.assign(cfg.k_provers, {});
    private_view->bit_randomness.assign(cfg.k_provers, {});
  }
  t.bit_commits.resize(cfg.k_provers);
  for (uint32_t k = 0; k < cfg.k_provers; k++) {
    const auto* excluder =
        find_adversary(AdversarySpec::Role::Prover, k, AdversarySpec::Behavior::ExcludeClient);
    const auto* nonbit =
        find_adversary(AdversarySpec::Role::Prover, k, AdversarySpec::Behavior::NonBitCommitment);
    for (uint32_t m = 0; m < cfg.bins; m++) {
      std::vector<ShareOpening<G>> shares;
      for (uint32_t i = 0; i < cfg.n_clients; i++) {
        if (!t.client_verdicts[i].accepted) continue;
        if (excluder && excluder->target == i) continue;  // drops an accepted client
        shares.push_back(submissions[i].payloads[k][m]);
      }
      auto rng = master.child("prover:" + std::to_string(k) + "/bin:" + std::to_string(m));
      std::pair<ProverLane<G>, BitCommitMessage<G>> made = [&] {
        if (nonbit && m == 0) {
          std::vector<typename G::Scalar> values;
          values.push_back(G::scalar_from_u64(2));  // not a bit
          for (uint64_t j = 1; j < params.n_b; j++) {
            values.push_back(rng.next_bit() ? G::scalar_one() : G::scalar_zero());
          }
          return prover_init_with_values(t.pp, params.n_b, values, std::move(shares),
                                         t.session_id, k, m, rng);
        }
        return prover_init(t.pp, params, std::move(shares), t.session_id, k, m, rng);
      }();
      if (private_view) {
        private_view->bit_values[k].push_back(made.first.v);
        private_view->bit_randomness[k].push_back(made.first.s);
      }
      lanes[k].push_back(std::move(made.first));
      t.bit_commits[k].push_back(std::move(made.second));
    }
  }

  // the verifier checks every coin commitment proof before any coin is drawn
  for (uint32_t k = 0; k < cfg.k_provers; k++) {
    for (uint32_t m = 0; m < cfg.bins; m++) {
      const auto& bc = t.bit_commits[k][m];
      for (uint64_t j = 0; j < params.n_b; j++) {
        const auto ctx = prover_proof_context<G>(t.session_id, k, m, params.n_b, j);
        if (!verify_bit(t.pp, bc.commitments[j], bc.proofs[j], ctx)) {
          t.verdict = {false, "prover:" + std::to_string(k), "bit-proofs",
                       "coin " + std::to_string(j) + " commitment failed the bit proof"};
          return t;
        }
      }
    }
  }

  // public coins, one batch per prover per bin, all parties contributing
  const auto parties = morra_parties(cfg.k_provers);
  std::vector<std::vector<std::vector<uint8_t>>> coins(cfg.k_provers);
  for (uint32_t k = 0; k < cfg.k_provers; k++) {
    for (uint32_t m = 0; m < cfg.bins; m++) {
      const std::string batch_label =
          "morra/prover:" + std::to_string(k) + "/bin:" + std::to_string(m);

      // adaptive contributors commit after everyone else
      std::vector<std::string> commit_order;
      for (const auto& p : parties) {
        bool adaptive = false;
        if (p.rfind("prover:", 0) == 0) {
          const auto pk = static_cast<uint32_t>(std::stoul(p.substr(7)));
          adaptive = find_adversary(AdversarySpec::Role::Prover, pk,
                                    AdversarySpec::Behavior::MorraAdaptive) != nullptr;
        }
        if (!adaptive) commit_order.push_back(p);
      }
      const bool has_adaptive = commit_order.size() != parties.size();
      if (has_adaptive) {
        for (const auto& p : parties) {
          if (std::find(commit_order.begin(), commit_order.end(), p) == commit_order.end()) {
            commit_order.push_back(p);
          }
        }
      }

      MorraRecord<G> rec;
      rec.prover = k;
      rec.bin = m;
      std::vector<MorraSecrets<G>> secrets;
      for (const auto& p : commit_order) {
        auto rng = master.child(batch_label + "/" + p);
        MorraSecrets<G> sec;
        const bool is_adaptive_slot = has_adaptive && p == commit_order.back();
        if (is_adaptive_slot) {
          // picks its scalars as a hash of everything seen so far
          TranscriptHasher h("morra-adaptive");
          for (const auto& cs : rec.batch.commitments) {
            for (const auto& c : cs) h.append(G::element_encode(c.point));
          }
          for (uint64_t j = 0; j < params.n_b; j++) {
            auto hj = h;
            hj.append_u64(j);
            auto mval = G::scalar_reduce_wide(hj.finish_wide());
            auto r = random_scalar<G>(rng);
            sec.openings.push_back({mval, r});
            sec.commitments.push_back(commit(t.pp, mval, r));
          }
        } else {
          sec = morra_contribution(t.pp, params.n_b, rng);
        }
        rec.batch.commit_order.push_back(p);
        rec.batch.commitments.push_back(sec.commitments);
        secrets.push_back(std::move(sec));
      }
      for (size_t i = commit_order.size(); i-- > 0;) {
        rec.batch.reveal_order.push_back(rec.batch.commit_order[i]);
        auto openings = secrets[i].openings;
        bool misreveals = false;
        if (commit_order[i].rfind("prover:", 0) == 0) {
          const auto pk = static_cast<uint32_t>(std::stoul(commit_order[i].substr(7)));
          misreveals = k == 0 && m == 0 &&
                       find_adversary(AdversarySpec::Role::Prover, pk,
                                      AdversarySpec::Behavior::MorraMisreveal) != nullptr;
        }
        if (misreveals) {
          openings[0].m = G::scalar_add(openings[0].m, G::scalar_one());
        }
        rec.batch.reveals.push_back(std::move(openings));
      }

      const auto mv = verify_morra_batch(t.pp, rec.batch, params.n_b, parties);
      t.morra_records.push_back(std::move(rec));
      if (!mv.ok) {
        t.verdict = {false, mv.blame, "morra", mv.reason};
        return t;
      }
      coins[k].push_back(morra_coins(t.morra_records.back().batch, params.n_b));
    }
  }

  // outputs
  t.outputs.resize(cfg.k_provers);
  for (uint32_t k = 0; k < cfg.k_provers; k++) {
    const auto* tamper =
        find_adversary(AdversarySpec::Role::Prover, k, AdversarySpec::Behavior::TamperOutput);
    for (uint32_t m = 0; m < cfg.bins; m++) {
      auto out = prover_adjust_and_output(lanes[k][m], coins[k][m]);
      if (tamper && m == 0) {
        out.y = G::scalar_add(out.y, G::scalar_one());
      }
      t.outputs[k].push_back(out);
    }
  }

  // verifier closes the books
  bool all_ok = true;
  for (uint32_t k = 0; k < cfg.k_provers; k++) {
    ProverVerdict pv{};
    for (uint32_t m = 0; m < cfg.bins; m++) {
      const auto updated =
          verifier_update_commitments(t.pp, t.bit_commits[k][m].commitments, coins[k][m]);
      const auto client_cs =
          accepted_client_commitments(t.client_broadcasts, t.client_verdicts, k, m);
      if (!verifier_check_prover(t.pp, client_cs, updated, t.outputs[k][m])) {
        pv = {false, "output for bin " + std::to_string(m) +
                         " does not match the commitment product"};
        break;
      }
    }
    if (!pv.accepted && all_ok) {
      all_ok = false;
      t.verdict = {false, "prover:" + std::to_string(k), "check", pv.reason};
    }
    t.prover_verdicts.push_back(std::move(pv));
  }
  if (!all_ok) return t;

  for (uint32_t m = 0; m < cfg.bins; m++) {
    std::vector<ProverOutput<G>> col;
    for (uint32_t k = 0; k < cfg.k_provers; k++) col.push_back(t.outputs[k][m]);
    t.aggregates.push_back(aggregate(col, cfg.k_provers, params.n_b));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Empirical privacy audit: histogram the released estimates on two
// neighboring inputs and take the worst delta-corrected odds ratio over
// one-sided threshold events.

struct AuditReport {
  double epsilon_hat = 0;
  double formula_epsilon = 0;
  double delta = 0;
  uint64_t trials = 0;
  uint64_t n_b = 0;
  std::map<int64_t, uint64_t> histogram_a;
  std::map<int64_t, uint64_t> histogram_b;

  nlohmann::json to_json() const {
    nlohmann::json h1, h2;
    for (auto& [k, v] : histogram_a) h1[std::to_string(k)] = v;
    for (auto& [k, v] : histogram_b) h2[std::to_string(k)] = v;
    return nlohmann::json{{"epsilon_hat", epsilon_hat},
                          {"formula_epsilon", formula_epsilon},
                          {"delta", delta},
                          {"trials", trials},
                          {"n_b", n_b},
                          {"histogram_a", h1},
                          {"histogram_b", h2}};
  }
};

namespace detail {

/// Max over one-sided threshold events of ln((P[T] - delta) / P'[T]), both
/// directions. Events whose counts are too small to estimate are skipped;
/// with no usable event the estimate is 0.
inline double epsilon_hat_from_histograms(const std::map<int64_t, uint64_t>& ha,
                                          const std::map<int64_t, uint64_t>& hb, uint64_t trials,
                                          double delta) {
  constexpr double kMinCount = 20;
  std::vector<int64_t> support;
  for (auto& [k, v] : ha) support.push_back(k);
  for (auto& [k, v] : hb) support.push_back(k);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  auto tail_counts = [&](const std::map<int64_t, uint64_t>& h, int64_t thresh, bool upper) {
    uint64_t c = 0;
    for (auto& [k, v] : h) {
      if ((upper && k >= thresh) || (!upper && k <= thresh)) c += v;
    }
    return static_cast<double>(c);
  };

  double best = 0;
  for (int64_t thresh : support) {
    for (bool upper : {true, false}) {
      const double ca = tail_counts(ha, thresh, upper);
      const double cb = tail_counts(hb, thresh, upper);
      for (auto [num, den] : {std::pair{ca, cb}, std::pair{cb, ca}}) {
        const double corrected = num - delta * static_cast<double>(trials);
        if (corrected < kMinCount || den < kMinCount) continue;
        best = std::max(best, std::log(corrected / den));
      }
    }
  }
  return best;
}

}  // namespace detail

template <GroupBackend G>
AuditReport audit_privacy(const SessionConfig& base, const std::vector<std::vector<uint8_t>>& xa,
                          const std::vector<std::vector<uint8_t>>& xb, uint64_t trials) {
  if (trials < 1000) throw ConfigError("audit needs at least 1000 trials per input");
  {
    size_t differing = 0;
    if (xa.size() != xb.size()) throw ConfigError("neighboring inputs must have equal size");
    for (size_t i = 0; i < xa.size(); i++) differing += xa[i] != xb[i];
    if (differing != 1) throw ConfigError("neighboring inputs must differ in exactly one client");
  }
  const auto params = base.privacy();

  AuditReport report;
  report.trials = trials;
  report.delta = base.delta;
  report.n_b = params.n_b;
  report.formula_epsilon = privacy_for_coins(params.n_b, base.delta);

  SessionConfig cfg = base;
  cfg.n_clients = static_cast<uint32_t>(xa.size());

  for (int side = 0; side < 2; side++) {
    const auto& inputs = side == 0 ? xa : xb;
    auto& hist = side == 0 ? report.histogram_a : report.histogram_b;
    std::vector<int64_t> estimates(trials);
    parallel_for(trials, [&](uint64_t i) {
      SessionConfig trial_cfg = cfg;
      trial_cfg.seed = SeededRng(cfg.seed)
                           .child_indexed(side == 0 ? "audit-a" : "audit-b", i)
                           .next_u64();
      auto t = run_session<G>(trial_cfg, {}, &inputs);
      if (!t.verdict.accepted || t.aggregates.empty()) {
        throw std::logic_error("honest audit session rejected");
      }
      estimates[i] = t.aggregates[0].estimate;
    });
    for (auto e : estimates) hist[e]++;
  }
  report.epsilon_hat = detail::epsilon_hat_from_histograms(report.histogram_a, report.histogram_b,
                                                           trials, base.delta);
  return report;
}

// ---------------------------------------------------------------------------
// Phase benchmark in the shape of the protocol pipeline: bit-proof creation,
// bit-proof verification, public coins, aggregation, final check.

struct BenchConfig {
  uint64_t n_clients = 100000;
  uint64_t n_b = 4096;
  uint32_t k_provers = 1;
  uint32_t bins = 1;
  uint32_t reps = 5;
  double budget_seconds = 0;  // 0 = run all reps
  uint64_t seed = 7;
};

struct BenchRow {
  std::string phase;
  uint64_t n = 0;
  uint64_t n_b = 0;
  uint32_t m = 1;
  uint32_t k = 1;
  double mean_ms = 0;
  double std_ms = 0;
  uint32_t reps = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  static std::string csv_header() { return "phase,n,n_b,m,k,mean_ms,std_ms,reps"; }

  std::string to_csv() const {
    std::string out = csv_header() + "\n";
    for (const auto& r : rows) {
      char line[256];
      std::snprintf(line, sizeof(line), "%s,%llu,%llu,%u,%u,%.4f,%.4f,%u\n", r.phase.c_str(),
                    static_cast<unsigned long long>(r.n), static_cast<unsigned long long>(r.n_b),
                    r.m, r.k, r.mean_ms, r.std_ms, r.reps);
      out += line;
    }
    return out;
  }
};

inline const std::vector<std::string>& bench_phases() {
  static const std::vector<std::string> kPhases{"sigma_prove", "sigma_verify", "morra",
                                               "aggregate", "check"};
  return kPhases;
}

template <GroupBackend G>
BenchReport run_phase_benchmark(const BenchConfig& cfg) {
  using clock = std::chrono::steady_clock;
  auto pp = setup<G>();
  SeededRng rng(cfg.seed);
  Bytes session_id{0xbe, 0x4c};

  // session state shared across repetitions: client share column for one
  // prover, with commitments (proofs are not part of any measured phase)
  std::vector<ShareOpening<G>> shares(cfg.n_clients);
  std::vector<Commitment<G>> client_cs(cfg.n_clients);
  for (uint64_t i = 0; i < cfg.n_clients; i++) {
    auto sh = random_scalar<G>(rng);
    auto r = random_scalar<G>(rng);
    shares[i] = {sh, r};
    client_cs[i] = commit(pp, sh, r);
  }
  const auto params = PrivacyParams::for_coins(cfg.n_b, 0.0009765625);
  const auto parties = morra_parties(cfg.k_provers);

  std::map<std::string, std::vector<double>> samples;
  const auto t_begin = clock::now();
  for (uint32_t rep = 0; rep <= cfg.reps; rep++) {
    const bool warmup = rep == 0;
    auto rep_rng = rng.child_indexed("rep", rep);

    auto t0 = clock::now();
    auto [lane, bit_msg] = prover_init(pp, params, shares, session_id, 0, 0, rep_rng);
    auto t1 = clock::now();

    bool all_ok = true;
    for (uint64_t j = 0; j < cfg.n_b; j++) {
      const auto ctx = prover_proof_context<G>(session_id, 0, 0, cfg.n_b, j);
      all_ok = all_ok && verify_bit(pp, bit_msg.commitments[j], bit_msg.proofs[j], ctx);
    }
    auto t2 = clock::now();
    if (!all_ok) throw std::logic_error("benchmark proofs failed to verify");

    auto [batch, coins] = run_morra(pp, parties, cfg.n_b, rep_rng);
    auto t3 = clock::now();

    auto out = prover_adjust_and_output(lane, coins);
    auto t4 = clock::now();

    const auto updated = verifier_update_commitments(pp, bit_msg.commitments, coins);
    const bool ok = verifier_check_prover(pp, client_cs, updated, out);
    auto t5 = clock::now();
    if (!ok) throw std::logic_error("benchmark check failed");

    if (!warmup) {
      auto ms = [](auto a, auto b) {
        return std::chrono::duration<double, std::milli>(b - a).count();
      };
      samples["sigma_prove"].push_back(ms(t0, t1));
      samples["sigma_verify"].push_back(ms(t1, t2));
      samples["morra"].push_back(ms(t2, t3));
      samples["aggregate"].push_back(ms(t3, t4));
      samples["check"].push_back(ms(t4, t5));
    }
    if (cfg.budget_seconds > 0 && rep >= 1) {
      const double elapsed = std::chrono::duration<double>(clock::now() - t_begin).count();
      if (elapsed > cfg.budget_seconds) break;
    }
  }

  BenchReport report;
  for (const auto& phase : bench_phases()) {
    const auto& xs = samples[phase];
    BenchRow row{phase, cfg.n_clients, cfg.n_b, cfg.bins, cfg.k_provers, 0, 0,
                 static_cast<uint32_t>(xs.size())};
    for (double x : xs) row.mean_ms += x;
    row.mean_ms /= static_cast<double>(xs.size());
    for (double x : xs) row.std_ms += (x - row.mean_ms) * (x - row.mean_ms);
    row.std_ms = xs.size() > 1 ? std::sqrt(row.std_ms / static_cast<double>(xs.size() - 1)) : 0.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

/// Mean microseconds per group exponentiation with a random base and scalar.
template <GroupBackend G>
double measure_single_exponentiation_us(uint64_t iterations = 0) {
  using clock = std::chrono::steady_clock;
  if (iterations == 0) iterations = G::kOrderFitsU64 ? 200000 : 2000;
  SeededRng rng(11);
  auto pp = setup<G>();
  auto base = pp.h;
  auto e = random_scalar<G>(rng);
  const auto t0 = clock::now();
  for (uint64_t i = 0; i < iterations; i++) {
    base = G::pow(base, e);
  }
  const auto t1 = clock::now();
  // keep the result alive
  if (base == G::identity()) throw std::logic_error("degenerate benchmark chain");
  return std::chrono::duration<double, std::micro>(t1 - t0).count() /
         static_cast<double>(iterations);
}

// ---------------------------------------------------------------------------
// Toy sketch-based validation baseline. Clients share x and beta = x(x-1),
// servers accept when the betas sum to zero. Secure against a lone bad
// client, but a server colluding with the client defeats it, and a server
// can silently drop an honest client: there is no public record to audit.

namespace sketch {

template <GroupBackend G>
struct SketchClient {
  std::vector<typename G::Scalar> x_shares;
  std::vector<typename G::Scalar> beta_shares;
};

template <GroupBackend G>
SketchClient<G> sketch_share(const typename G::Scalar& x, uint64_t k_provers, SeededRng& rng) {
  const auto beta = G::scalar_mul(x, G::scalar_sub(x, G::scalar_one()));
  return {split_secret<G>(x, k_provers, rng), split_secret<G>(beta, k_provers, rng)};
}

/// Joint validation: servers publish their beta shares and accept when the
/// sum vanishes. Nothing binds a server to the share it received.
template <GroupBackend G>
bool sketch_validate(const std::vector<typename G::Scalar>& reported_beta_shares) {
  auto acc = G::scalar_zero();
  for (const auto& b : reported_beta_shares) acc = G::scalar_add(acc, b);
  return acc == G::scalar_zero();
}

struct SketchOutcome {
  bool input_included = false;
  bool anyone_blamed = false;
};

/// A corrupt client submits x = 2 and reveals its beta share sum to one
/// colluding server, which reports a compensating share.
template <GroupBackend G>
SketchOutcome run_collusion_attack(uint64_t k_provers, SeededRng& rng) {
  auto client = sketch_share<G>(G::scalar_from_u64(2), k_provers, rng);
  std::vector<typename G::Scalar> reported = client.beta_shares;
  // server 0 colludes: cancels everything the other servers will report
  auto others = G::scalar_zero();
  for (uint64_t k = 1; k < k_provers; k++) others = G::scalar_add(others, reported[k]);
  reported[0] = G::scalar_neg(others);
  return {sketch_validate<G>(reported), false};
}

/// A corrupt server claims an honest client's sketch failed. The honest
/// server has no way to dispute it; the client is dropped with no blame.
template <GroupBackend G>
SketchOutcome run_exclusion_attack(uint64_t k_provers, SeededRng& rng) {
  auto client = sketch_share<G>(G::scalar_one(), k_provers, rng);
  std::vector<typename G::Scalar> reported = client.beta_shares;
  reported[0] = G::scalar_add(reported[0], G::scalar_one());  // forged failure
  const bool included = sketch_validate<G>(reported);
  return {included, false};
}

}  // namespace sketch

}  // namespace vdp
