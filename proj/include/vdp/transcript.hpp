#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdp/protocol.hpp"

namespace vdp {

/// A well-formed transcript file carried a payload that does not decode
/// (non-canonical point, bad base64, wrong arity). Distinct from ParseError:
/// the file is structurally fine but its protocol content is corrupt, which
/// an auditor reports as a rejection in the named phase.
class MalformedPayload : public std::runtime_error {
 public:
  MalformedPayload(std::string phase_in, const std::string& detail)
      : std::runtime_error("bad payload in " + phase_in + ": " + detail),
        phase(std::move(phase_in)) {}
  std::string phase;
};

struct ProverVerdict {
  bool accepted = true;
  std::string reason;
  friend bool operator==(const ProverVerdict&, const ProverVerdict&) = default;
};

struct SessionVerdict {
  bool accepted = true;
  std::string blame;
  std::string phase;
  std::string reason;
  friend bool operator==(const SessionVerdict&, const SessionVerdict&) = default;
};

template <GroupBackend G>
struct MorraRecord {
  uint32_t prover = 0;
  uint32_t bin = 0;
  MorraBatch<G> batch;
};

/// The complete public record of one session: everything any party
/// broadcast, the verifier's verdicts, and the aggregate if one was
/// released. Self-contained; verify_session needs nothing else.
template <GroupBackend G>
struct SessionTranscript {
  PublicParams<G> pp;
  PrivacyParams params;
  uint32_t n_clients = 0;
  uint32_t k_provers = 1;
  uint32_t bins = 1;
  Bytes session_id;

  std::vector<ClientBroadcast<G>> client_broadcasts;
  std::vector<ClientVerdict> client_verdicts;
  std::vector<std::vector<BitCommitMessage<G>>> bit_commits;  // [prover][bin]
  std::vector<MorraRecord<G>> morra_records;                  // prover-major, bin-minor
  std::vector<std::vector<ProverOutput<G>>> outputs;          // [prover][bin]
  std::vector<ProverVerdict> prover_verdicts;
  std::vector<AggregateResult<G>> aggregates;  // per bin, only when accepted
  SessionVerdict verdict;
};

inline std::vector<std::string> morra_parties(uint32_t k_provers) {
  std::vector<std::string> parties;
  for (uint32_t k = 0; k < k_provers; k++) parties.push_back("prover:" + std::to_string(k));
  parties.push_back("verifier");
  return parties;
}

// ---------------------------------------------------------------------------
// JSON encoding. The format is the auditor interface: a header, a
// phase-tagged message list with contiguous sequence numbers, and the final
// verdict object.

namespace transcript_json {

using nlohmann::json;

constexpr int kTranscriptVersion = 1;

template <GroupBackend G>
std::string elem64(const typename G::Element& e) {
  return to_base64(G::element_encode(e));
}

template <GroupBackend G>
std::string scal64(const typename G::Scalar& s) {
  return to_base64(G::scalar_encode(s));
}

template <GroupBackend G>
typename G::Element dec_elem(const json& j, const std::string& phase) {
  if (!j.is_string()) throw MalformedPayload(phase, "expected base64 string");
  Bytes raw;
  try {
    raw = from_base64(j.get<std::string>());
  } catch (const ParseError& e) {
    throw MalformedPayload(phase, e.what());
  }
  auto e = G::element_decode(raw);
  if (!e) throw MalformedPayload(phase, "non-canonical group element");
  return *e;
}

template <GroupBackend G>
typename G::Scalar dec_scal(const json& j, const std::string& phase) {
  if (!j.is_string()) throw MalformedPayload(phase, "expected base64 string");
  Bytes raw;
  try {
    raw = from_base64(j.get<std::string>());
  } catch (const ParseError& e) {
    throw MalformedPayload(phase, e.what());
  }
  auto s = G::scalar_decode(raw);
  if (!s) throw MalformedPayload(phase, "non-canonical scalar");
  return *s;
}

template <GroupBackend G>
OrProof<G> dec_proof(const json& j, const std::string& phase) {
  if (!j.is_string()) throw MalformedPayload(phase, "expected base64 string");
  Bytes raw;
  try {
    raw = from_base64(j.get<std::string>());
  } catch (const ParseError& e) {
    throw MalformedPayload(phase, e.what());
  }
  auto p = OrProof<G>::deserialize(raw);
  if (!p) throw MalformedPayload(phase, "bad proof encoding");
  return *p;
}

template <GroupBackend G>
json messages_to_json(const SessionTranscript<G>& t) {
  json msgs = json::array();
  uint64_t seq = 0;
  auto push = [&](json m) {
    m["seq"] = seq++;
    msgs.push_back(std::move(m));
  };

  for (const auto& b : t.client_broadcasts) {
    json cms = json::array();
    for (const auto& row : b.commitments) {
      json r = json::array();
      for (const auto& c : row) r.push_back(elem64<G>(c.point));
      cms.push_back(std::move(r));
    }
    json proofs = json::array();
    for (const auto& p : b.coordinate_proofs) proofs.push_back(to_base64(p.serialize()));
    json m{{"phase", "CLIENT_BROADCAST"},
           {"from", "client:" + std::to_string(b.client_id)},
           {"client", b.client_id},
           {"bins", b.bins},
           {"provers", b.provers},
           {"commitments", std::move(cms)},
           {"proofs", std::move(proofs)}};
    if (b.norm_randomness) m["norm_r"] = scal64<G>(*b.norm_randomness);
    push(std::move(m));
  }
  for (uint32_t i = 0; i < t.client_verdicts.size(); i++) {
    push(json{{"phase", "CLIENT_VERDICT"},
              {"from", "verifier"},
              {"client", t.client_broadcasts[i].client_id},
              {"accepted", t.client_verdicts[i].accepted},
              {"reason", t.client_verdicts[i].reason}});
  }
  for (uint32_t k = 0; k < t.bit_commits.size(); k++) {
    for (uint32_t m = 0; m < t.bit_commits[k].size(); m++) {
      const auto& bc = t.bit_commits[k][m];
      json cms = json::array();
      for (const auto& c : bc.commitments) cms.push_back(elem64<G>(c.point));
      json proofs = json::array();
      for (const auto& p : bc.proofs) proofs.push_back(to_base64(p.serialize()));
      push(json{{"phase", "BIT_COMMIT"},
                {"from", "prover:" + std::to_string(k)},
                {"prover", k},
                {"bin", m},
                {"commitments", std::move(cms)},
                {"proofs", std::move(proofs)}});
    }
  }
  for (const auto& rec : t.morra_records) {
    for (size_t i = 0; i < rec.batch.commit_order.size(); i++) {
      json cms = json::array();
      for (const auto& c : rec.batch.commitments[i]) cms.push_back(elem64<G>(c.point));
      push(json{{"phase", "MORRA_COMMIT"},
                {"from", rec.batch.commit_order[i]},
                {"prover", rec.prover},
                {"bin", rec.bin},
                {"commitments", std::move(cms)}});
    }
    for (size_t i = 0; i < rec.batch.reveals.size(); i++) {
      json opens = json::array();
      for (const auto& o : rec.batch.reveals[i]) {
        opens.push_back(json{{"m", scal64<G>(o.m)}, {"r", scal64<G>(o.r)}});
      }
      push(json{{"phase", "MORRA_REVEAL"},
                {"from", rec.batch.reveal_order[i]},
                {"prover", rec.prover},
                {"bin", rec.bin},
                {"openings", std::move(opens)}});
    }
  }
  for (uint32_t k = 0; k < t.outputs.size(); k++) {
    for (uint32_t m = 0; m < t.outputs[k].size(); m++) {
      push(json{{"phase", "OUTPUT"},
                {"from", "prover:" + std::to_string(k)},
                {"prover", k},
                {"bin", m},
                {"y", scal64<G>(t.outputs[k][m].y)},
                {"z", scal64<G>(t.outputs[k][m].z)}});
    }
  }
  for (uint32_t k = 0; k < t.prover_verdicts.size(); k++) {
    push(json{{"phase", "PROVER_VERDICT"},
              {"from", "verifier"},
              {"prover", k},
              {"accepted", t.prover_verdicts[k].accepted},
              {"reason", t.prover_verdicts[k].reason}});
  }
  if (!t.aggregates.empty()) {
    json ys = json::array(), ests = json::array();
    for (const auto& a : t.aggregates) {
      ys.push_back(scal64<G>(a.y));
      ests.push_back(a.estimate);
    }
    push(json{{"phase", "AGGREGATE"},
              {"from", "verifier"},
              {"y", std::move(ys)},
              {"estimate", std::move(ests)}});
  }
  if (!t.verdict.accepted && t.outputs.empty()) {
    // sessions that stopped before the output phase end in an abort message
    push(json{{"phase", "ABORT"},
              {"from", "verifier"},
              {"blame", t.verdict.blame},
              {"at", t.verdict.phase},
              {"reason", t.verdict.reason}});
  }
  return msgs;
}

template <GroupBackend G>
json to_json(const SessionTranscript<G>& t) {
  json j;
  j["version"] = kTranscriptVersion;
  j["group"] = G::id();
  j["pp"] = to_base64(t.pp.serialize());
  j["session_id"] = to_base64(t.session_id);
  j["params"] = json{{"epsilon", t.params.epsilon}, {"delta", t.params.delta},
                     {"n_b", t.params.n_b},         {"k", t.k_provers},
                     {"n", t.n_clients},            {"bins", t.bins}};
  j["messages"] = messages_to_json(t);
  j["verdict"] = json{{"accepted", t.verdict.accepted},
                      {"blame", t.verdict.blame},
                      {"phase", t.verdict.phase},
                      {"reason", t.verdict.reason}};
  return j;
}

// strict field access helpers: missing or mistyped fields are structural
inline const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field ") + key);
  return *it;
}

inline uint64_t field_uint(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_number_unsigned()) throw ParseError(std::string("field is not an integer: ") + key);
  return f.get<uint64_t>();
}

inline std::string field_str(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_string()) throw ParseError(std::string("field is not a string: ") + key);
  return f.get<std::string>();
}

inline bool field_bool(const json& j, const char* key) {
  const auto& f = field(j, key);
  if (!f.is_boolean()) throw ParseError(std::string("field is not a bool: ") + key);
  return f.get<bool>();
}

template <GroupBackend G>
SessionTranscript<G> from_json(const json& j) {
  if (!j.is_object()) throw ParseError("transcript is not an object");
  if (field_uint(j, "version") != kTranscriptVersion) throw ParseError("unknown version");
  if (field_str(j, "group") != G::id()) throw ParseError("transcript group mismatch");

  SessionTranscript<G> t;
  t.pp = PublicParams<G>::deserialize(from_base64(field_str(j, "pp")));
  t.session_id = from_base64(field_str(j, "session_id"));
  const auto& params = field(j, "params");
  t.params.epsilon = field(params, "epsilon").get<double>();
  t.params.delta = field(params, "delta").get<double>();
  t.params.n_b = field_uint(params, "n_b");
  t.k_provers = static_cast<uint32_t>(field_uint(params, "k"));
  t.n_clients = static_cast<uint32_t>(field_uint(params, "n"));
  t.bins = static_cast<uint32_t>(field_uint(params, "bins"));

  const auto& verdict = field(j, "verdict");
  t.verdict.accepted = field_bool(verdict, "accepted");
  t.verdict.blame = field_str(verdict, "blame");
  t.verdict.phase = field_str(verdict, "phase");
  t.verdict.reason = field_str(verdict, "reason");

  const auto& msgs = field(j, "messages");
  if (!msgs.is_array()) throw ParseError("messages is not an array");

  size_t idx = 0;
  auto peek_phase = [&]() -> std::string {
    if (idx >= msgs.size()) return "";
    return field_str(msgs[idx], "phase");
  };
  auto take = [&]() -> const json& {
    if (idx >= msgs.size()) throw ParseError("message stream truncated");
    const json& m = msgs[idx];
    if (field_uint(m, "seq") != idx) throw ParseError("non-contiguous sequence numbers");
    idx++;
    return m;
  };

  while (peek_phase() == "CLIENT_BROADCAST") {
    const json& m = take();
    ClientBroadcast<G> b;
    b.client_id = static_cast<uint32_t>(field_uint(m, "client"));
    if (field_str(m, "from") != "client:" + std::to_string(b.client_id)) {
      throw ParseError("client message sender mismatch");
    }
    b.bins = static_cast<uint32_t>(field_uint(m, "bins"));
    b.provers = static_cast<uint32_t>(field_uint(m, "provers"));
    const auto& cms = field(m, "commitments");
    if (!cms.is_array()) throw ParseError("commitments is not an array");
    for (const auto& row : cms) {
      if (!row.is_array()) throw ParseError("commitment row is not an array");
      std::vector<Commitment<G>> r;
      for (const auto& c : row) r.push_back({dec_elem<G>(c, "client-broadcast")});
      b.commitments.push_back(std::move(r));
    }
    const auto& proofs = field(m, "proofs");
    if (!proofs.is_array()) throw ParseError("proofs is not an array");
    for (const auto& p : proofs) b.coordinate_proofs.push_back(dec_proof<G>(p, "client-broadcast"));
    if (m.contains("norm_r")) b.norm_randomness = dec_scal<G>(m["norm_r"], "client-broadcast");
    t.client_broadcasts.push_back(std::move(b));
  }
  while (peek_phase() == "CLIENT_VERDICT") {
    const json& m = take();
    const size_t i = t.client_verdicts.size();
    if (i >= t.client_broadcasts.size() ||
        field_uint(m, "client") != t.client_broadcasts[i].client_id) {
      throw ParseError("client verdict order mismatch");
    }
    t.client_verdicts.push_back({field_bool(m, "accepted"), field_str(m, "reason")});
  }
  while (peek_phase() == "BIT_COMMIT") {
    const json& m = take();
    const uint32_t k = static_cast<uint32_t>(field_uint(m, "prover"));
    const uint32_t bin = static_cast<uint32_t>(field_uint(m, "bin"));
    if (k != (t.bit_commits.empty() ? 0 : t.bit_commits.size() - 1) &&
        k != t.bit_commits.size()) {
      throw ParseError("bit commitments out of prover order");
    }
    if (k == t.bit_commits.size()) t.bit_commits.emplace_back();
    if (bin != t.bit_commits[k].size()) throw ParseError("bit commitments out of bin order");
    BitCommitMessage<G> bc;
    for (const auto& c : field(m, "commitments")) {
      bc.commitments.push_back({dec_elem<G>(c, "bit-proofs")});
    }
    for (const auto& p : field(m, "proofs")) bc.proofs.push_back(dec_proof<G>(p, "bit-proofs"));
    t.bit_commits[k].push_back(std::move(bc));
  }
  while (peek_phase() == "MORRA_COMMIT") {
    MorraRecord<G> rec;
    rec.prover = static_cast<uint32_t>(field_uint(msgs[idx], "prover"));
    rec.bin = static_cast<uint32_t>(field_uint(msgs[idx], "bin"));
    while (peek_phase() == "MORRA_COMMIT" &&
           field_uint(msgs[idx], "prover") == rec.prover &&
           field_uint(msgs[idx], "bin") == rec.bin) {
      const json& m = take();
      rec.batch.commit_order.push_back(field_str(m, "from"));
      std::vector<Commitment<G>> row;
      for (const auto& c : field(m, "commitments")) row.push_back({dec_elem<G>(c, "morra")});
      rec.batch.commitments.push_back(std::move(row));
    }
    while (peek_phase() == "MORRA_REVEAL" &&
           field_uint(msgs[idx], "prover") == rec.prover &&
           field_uint(msgs[idx], "bin") == rec.bin) {
      const json& m = take();
      rec.batch.reveal_order.push_back(field_str(m, "from"));
      std::vector<MorraOpening<G>> opens;
      for (const auto& o : field(m, "openings")) {
        opens.push_back({dec_scal<G>(field(o, "m"), "morra"), dec_scal<G>(field(o, "r"), "morra")});
      }
      rec.batch.reveals.push_back(std::move(opens));
    }
    // a batch may be short of reveals only if the session aborted there
    t.morra_records.push_back(std::move(rec));
  }
  while (peek_phase() == "OUTPUT") {
    const json& m = take();
    const uint32_t k = static_cast<uint32_t>(field_uint(m, "prover"));
    const uint32_t bin = static_cast<uint32_t>(field_uint(m, "bin"));
    if (k == t.outputs.size()) t.outputs.emplace_back();
    if (k != t.outputs.size() - 1 || bin != t.outputs[k].size()) {
      throw ParseError("outputs out of order");
    }
    t.outputs[k].push_back({dec_scal<G>(field(m, "y"), "output"),
                            dec_scal<G>(field(m, "z"), "output")});
  }
  while (peek_phase() == "PROVER_VERDICT") {
    const json& m = take();
    if (field_uint(m, "prover") != t.prover_verdicts.size()) {
      throw ParseError("prover verdicts out of order");
    }
    t.prover_verdicts.push_back({field_bool(m, "accepted"), field_str(m, "reason")});
  }
  if (peek_phase() == "AGGREGATE") {
    const json& m = take();
    const auto& ys = field(m, "y");
    const auto& ests = field(m, "estimate");
    if (!ys.is_array() || !ests.is_array() || ys.size() != ests.size()) {
      throw ParseError("malformed aggregate");
    }
    for (size_t i = 0; i < ys.size(); i++) {
      if (!ests[i].is_number_integer()) throw ParseError("estimate is not an integer");
      t.aggregates.push_back({dec_scal<G>(ys[i], "aggregate"), ests[i].get<int64_t>()});
    }
  }
  if (peek_phase() == "ABORT") {
    const json& m = take();
    SessionVerdict v{false, field_str(m, "blame"), field_str(m, "at"), field_str(m, "reason")};
    if (!(v == t.verdict)) throw ParseError("abort message disagrees with verdict");
  }
  if (idx != msgs.size()) throw ParseError("unexpected trailing messages");
  return t;
}

}  // namespace transcript_json

template <GroupBackend G>
std::string transcript_to_string(const SessionTranscript<G>& t) {
  return transcript_json::to_json(t).dump(1);
}

template <GroupBackend G>
SessionTranscript<G> transcript_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid transcript JSON: ") + e.what());
  }
  try {
    return transcript_json::from_json<G>(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid transcript structure: ") + e.what());
  }
}

/// Reads just the group identifier so callers can dispatch to the right
/// backend before decoding the rest.
inline std::string transcript_group_id(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid transcript JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("group") || !j["group"].is_string()) {
    throw ParseError("transcript has no group field");
  }
  return j["group"].get<std::string>();
}

// ---------------------------------------------------------------------------
// Full re-verification from public data. Recomputes every verdict the live
// verifier issued; any disagreement between the record and the recomputation
// is itself a rejection.

/// A mid-protocol failure must appear in the record as a session that
/// stopped right there with the same blame, and with no later-phase data.
template <GroupBackend G>
SessionVerdict expect_abort(const SessionTranscript<G>& t, SessionVerdict expected) {
  if (!t.outputs.empty() || !t.aggregates.empty()) {
    return SessionVerdict{false, "", expected.phase, "messages continue past a failed check"};
  }
  if (expected.phase == "bit-proofs" && !t.morra_records.empty()) {
    return SessionVerdict{false, "", expected.phase, "messages continue past a failed check"};
  }
  if (!(t.verdict == expected)) {
    return SessionVerdict{false, "verifier", "record",
                          "recorded verdict does not match recomputation"};
  }
  return expected;
}

template <GroupBackend G>
SessionVerdict verify_session(const SessionTranscript<G>& t) {
  auto reject = [](std::string blame, std::string phase, std::string reason) {
    return SessionVerdict{false, std::move(blame), std::move(phase), std::move(reason)};
  };

  // structural validation
  try {
    t.params.validate();
    check_debias_window<G>(t.n_clients, t.k_provers, t.params.n_b);
  } catch (const ConfigError& e) {
    return reject("", "structure", e.what());
  }
  if (t.session_id.empty()) return reject("", "structure", "missing session id");
  if (t.client_broadcasts.size() != t.n_clients ||
      t.client_verdicts.size() != t.n_clients) {
    return reject("", "structure", "client record count mismatch");
  }
  for (uint32_t i = 0; i < t.n_clients; i++) {
    if (t.client_broadcasts[i].client_id != i) {
      return reject("", "structure", "client ids out of order");
    }
  }

  // client validation is recomputed and must match the recorded verdicts
  for (uint32_t i = 0; i < t.n_clients; i++) {
    const auto recomputed = verify_client_submission(t.pp, t.client_broadcasts[i], t.session_id,
                                                     t.k_provers, t.bins);
    if (!(recomputed == t.client_verdicts[i])) {
      return reject("verifier", "client-verdicts",
                    "recorded verdict for client " + std::to_string(i) +
                        " does not match recomputation");
    }
  }

  // bit commitments and their proofs
  if (t.bit_commits.size() != t.k_provers) {
    return reject("", "structure", "bit commitment record incomplete");
  }
  for (uint32_t k = 0; k < t.k_provers; k++) {
    if (t.bit_commits[k].size() != t.bins) {
      return reject("", "structure", "bit commitment record incomplete");
    }
    for (uint32_t m = 0; m < t.bins; m++) {
      const auto& bc = t.bit_commits[k][m];
      const std::string who = "prover:" + std::to_string(k);
      if (bc.commitments.size() != t.params.n_b || bc.proofs.size() != t.params.n_b) {
        return expect_abort(t, reject(who, "bit-proofs", "wrong message arity"));
      }
      for (uint64_t j = 0; j < t.params.n_b; j++) {
        const auto ctx = prover_proof_context<G>(t.session_id, k, m, t.params.n_b, j);
        if (!verify_bit(t.pp, bc.commitments[j], bc.proofs[j], ctx)) {
          return expect_abort(t, reject(who, "bit-proofs",
                                        "coin " + std::to_string(j) +
                                            " commitment failed the bit proof"));
        }
      }
    }
  }

  // morra batches, prover-major then bin-minor
  const auto parties = morra_parties(t.k_provers);
  const size_t expected_batches = static_cast<size_t>(t.k_provers) * t.bins;
  if (t.morra_records.size() > expected_batches) {
    return reject("", "morra", "too many coin batches");
  }
  for (size_t idx = 0; idx < t.morra_records.size(); idx++) {
    const auto& rec = t.morra_records[idx];
    if (rec.prover != idx / t.bins || rec.bin != idx % t.bins) {
      return reject("", "morra", "coin batches out of order");
    }
    const auto mv = verify_morra_batch(t.pp, rec.batch, t.params.n_b, parties);
    if (!mv.ok) {
      if (idx + 1 != t.morra_records.size()) {
        return reject("", "morra", "messages continue past a failed batch");
      }
      return expect_abort(t, reject(mv.blame, "morra", mv.reason));
    }
  }
  if (t.morra_records.size() < expected_batches) {
    return reject("", "morra", "coin batch record incomplete");
  }

  // outputs and the closing product check
  if (t.outputs.size() != t.k_provers || t.prover_verdicts.size() != t.k_provers) {
    return reject("", "outputs", "missing prover output");
  }
  SessionVerdict first_failure;
  for (uint32_t k = 0; k < t.k_provers; k++) {
    if (t.outputs[k].size() != t.bins) return reject("", "outputs", "missing prover output");
    ProverVerdict recomputed{};
    for (uint32_t m = 0; m < t.bins; m++) {
      const auto& batch = t.morra_records[static_cast<size_t>(k) * t.bins + m].batch;
      const auto coins = morra_coins(batch, t.params.n_b);
      const auto updated =
          verifier_update_commitments(t.pp, t.bit_commits[k][m].commitments, coins);
      const auto client_cs =
          accepted_client_commitments(t.client_broadcasts, t.client_verdicts, k, m);
      if (!verifier_check_prover(t.pp, client_cs, updated, t.outputs[k][m])) {
        recomputed = {false, "output for bin " + std::to_string(m) +
                                 " does not match the commitment product"};
        break;
      }
    }
    if (!(recomputed == t.prover_verdicts[k])) {
      return reject("verifier", "prover-verdicts",
                    "recorded verdict for prover " + std::to_string(k) +
                        " does not match recomputation");
    }
    if (!recomputed.accepted && first_failure.accepted) {
      first_failure = reject("prover:" + std::to_string(k), "check", recomputed.reason);
    }
  }
  if (!first_failure.accepted) {
    if (!t.aggregates.empty()) {
      return reject("", "aggregate", "aggregate released despite a rejected prover");
    }
    if (!(t.verdict == first_failure)) {
      return reject("verifier", "record", "recorded verdict does not match recomputation");
    }
    return first_failure;
  }

  // aggregate
  if (t.aggregates.size() != t.bins) {
    return reject("", "aggregate", "missing aggregate");
  }
  for (uint32_t m = 0; m < t.bins; m++) {
    std::vector<ProverOutput<G>> col;
    for (uint32_t k = 0; k < t.k_provers; k++) col.push_back(t.outputs[k][m]);
    AggregateResult<G> expect;
    try {
      expect = aggregate(col, t.k_provers, t.params.n_b);
    } catch (const ConfigError& e) {
      return reject("", "aggregate", e.what());
    }
    if (!(expect.y == t.aggregates[m].y) || expect.estimate != t.aggregates[m].estimate) {
      return reject("verifier", "aggregate", "recorded aggregate does not match recomputation");
    }
  }
  if (!t.verdict.accepted) {
    return reject("verifier", "record", "recorded verdict does not match recomputation");
  }
  return {};
}

}  // namespace vdp
