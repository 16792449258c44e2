#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vdp/dp.hpp"
#include "vdp/morra.hpp"
#include "vdp/shares.hpp"

namespace vdp {

/// What a prover broadcasts right after sampling its private bits: one
/// commitment and one bit proof per coin.
template <GroupBackend G>
struct BitCommitMessage {
  std::vector<Commitment<G>> commitments;
  std::vector<OrProof<G>> proofs;
};

template <GroupBackend G>
struct ProverOutput {
  typename G::Scalar y;
  typename G::Scalar z;
  friend bool operator==(const ProverOutput&, const ProverOutput&) = default;
};

enum class ProverPhase { BitsCommitted, Done };

/// Per-prover, per-bin protocol state. The private bits v and their
/// commitment randomness s never leave this struct; everything that is
/// broadcast lives in BitCommitMessage and ProverOutput.
template <GroupBackend G>
struct ProverLane {
  uint64_t n_b = 0;
  std::vector<ShareOpening<G>> client_shares;
  std::vector<typename G::Scalar> v;
  std::vector<typename G::Scalar> s;
  ProverPhase phase = ProverPhase::BitsCommitted;
};

template <GroupBackend G>
ProofContext prover_proof_context(const Bytes& session_id, uint32_t prover_index, uint32_t bin,
                                  uint64_t n_b, uint64_t coin) {
  return ProofContext{session_id, "prover:" + std::to_string(prover_index),
                      static_cast<uint64_t>(bin) * n_b + coin};
}

/// Lane construction with caller-chosen private values. Honest use goes
/// through prover_init; adversaries pick values that are not bits, in which
/// case the proofs are best-effort forgeries that verification rejects.
template <GroupBackend G>
std::pair<ProverLane<G>, BitCommitMessage<G>> prover_init_with_values(
    const PublicParams<G>& pp, uint64_t n_b, const std::vector<typename G::Scalar>& values,
    std::vector<ShareOpening<G>> client_shares, const Bytes& session_id, uint32_t prover_index,
    uint32_t bin, SeededRng& rng) {
  if (values.size() != n_b) throw ConfigError("need one private value per coin");
  ProverLane<G> lane;
  lane.n_b = n_b;
  lane.client_shares = std::move(client_shares);
  lane.v = values;
  BitCommitMessage<G> msg;
  msg.commitments.reserve(n_b);
  msg.proofs.reserve(n_b);
  for (uint64_t j = 0; j < n_b; j++) {
    auto s = random_scalar<G>(rng);
    lane.s.push_back(s);
    auto c = commit(pp, lane.v[j], s);
    msg.commitments.push_back(c);
    const auto ctx = prover_proof_context<G>(session_id, prover_index, bin, n_b, j);
    if (lane.v[j] == G::scalar_zero() || lane.v[j] == G::scalar_one()) {
      msg.proofs.push_back(prove_bit(pp, lane.v[j], s, c, ctx, rng));
    } else {
      auto st = or_prove_commit(pp, 1, s, c, rng);
      msg.proofs.push_back(or_prove_respond(st, derive_challenge(pp, ctx, c, st.d0, st.d1)));
    }
  }
  return {std::move(lane), std::move(msg)};
}

/// Honest lane start: sample n_b private bits, commit, prove each is a bit.
template <GroupBackend G>
std::pair<ProverLane<G>, BitCommitMessage<G>> prover_init(
    const PublicParams<G>& pp, const PrivacyParams& params,
    std::vector<ShareOpening<G>> client_shares, const Bytes& session_id, uint32_t prover_index,
    uint32_t bin, SeededRng& rng) {
  params.validate();
  std::vector<typename G::Scalar> values;
  values.reserve(params.n_b);
  for (uint64_t j = 0; j < params.n_b; j++) {
    values.push_back(rng.next_bit() ? G::scalar_one() : G::scalar_zero());
  }
  return prover_init_with_values(pp, params.n_b, values, std::move(client_shares), session_id,
                                 prover_index, bin, rng);
}

/// Folds the public coins into the lane and emits (y, z). The coin flips the
/// private bit linearly, v-hat = b ? 1-v : v, and the randomness follows the
/// same flip with its sign: the verifier's commitment update negates s
/// whenever b = 1, so z must too or the final product check cannot close.
template <GroupBackend G>
ProverOutput<G> prover_adjust_and_output(ProverLane<G>& lane, const std::vector<uint8_t>& coins) {
  if (lane.phase != ProverPhase::BitsCommitted) {
    throw PhaseError("prover output already produced");
  }
  if (coins.size() != lane.n_b) throw PhaseError("coin count does not match lane");
  auto y = G::scalar_zero();
  auto z = G::scalar_zero();
  for (const auto& sh : lane.client_shares) {
    y = G::scalar_add(y, sh.share);
    z = G::scalar_add(z, sh.randomness);
  }
  for (uint64_t j = 0; j < lane.n_b; j++) {
    if (coins[j]) {
      y = G::scalar_add(y, G::scalar_sub(G::scalar_one(), lane.v[j]));
      z = G::scalar_sub(z, lane.s[j]);
    } else {
      y = G::scalar_add(y, lane.v[j]);
      z = G::scalar_add(z, lane.s[j]);
    }
  }
  lane.phase = ProverPhase::Done;
  return {y, z};
}

/// Verifier-side coin folding: commitments to v become commitments to
/// 1-v wherever the public coin came up 1. Backends with expensive field
/// inversion get the shared-inverse (Montgomery batch) path.
template <GroupBackend G>
std::vector<Commitment<G>> verifier_update_commitments(const PublicParams<G>& pp,
                                                       const std::vector<Commitment<G>>& cs,
                                                       const std::vector<uint8_t>& coins) {
  if (cs.size() != coins.size()) throw ConfigError("coin count does not match commitments");
  std::vector<Commitment<G>> out = cs;
  std::vector<size_t> flips;
  for (size_t j = 0; j < cs.size(); j++) {
    if (coins[j]) flips.push_back(j);
  }
  if (G::kFastInverse || flips.size() < 16) {
    for (size_t j : flips) out[j] = one_minus(pp, cs[j]);
    return out;
  }
  // batch inversion: prefix products, one inversion, unwind
  std::vector<typename G::Element> prefix(flips.size());
  prefix[0] = cs[flips[0]].point;
  for (size_t i = 1; i < flips.size(); i++) {
    prefix[i] = G::op(prefix[i - 1], cs[flips[i]].point);
  }
  auto rolling = G::inverse(prefix.back());
  for (size_t i = flips.size(); i-- > 1;) {
    const auto inv_i = G::op(rolling, prefix[i - 1]);
    out[flips[i]] = {G::op(pp.g, inv_i)};
    rolling = G::op(rolling, cs[flips[i]].point);
  }
  out[flips[0]] = {G::op(pp.g, rolling)};
  return out;
}

/// The closing equation: the product of the accepted client commitments for
/// this prover and the coin-updated bit commitments must re-commit (y, z).
template <GroupBackend G>
bool verifier_check_prover(const PublicParams<G>& pp,
                           const std::vector<Commitment<G>>& client_commitments,
                           const std::vector<Commitment<G>>& updated_bit_commitments,
                           const ProverOutput<G>& out) {
  auto product = identity_commitment<G>();
  for (const auto& c : client_commitments) product = combine(product, c);
  for (const auto& c : updated_bit_commitments) product = combine(product, c);
  return product == commit(pp, out.y, out.z);
}

/// Gathers one prover's column of accepted client share commitments.
template <GroupBackend G>
std::vector<Commitment<G>> accepted_client_commitments(
    const std::vector<ClientBroadcast<G>>& broadcasts, const std::vector<ClientVerdict>& verdicts,
    uint32_t prover_index, uint32_t bin) {
  if (broadcasts.size() != verdicts.size()) throw ConfigError("verdict list size mismatch");
  std::vector<Commitment<G>> out;
  for (size_t i = 0; i < broadcasts.size(); i++) {
    if (!verdicts[i].accepted) continue;
    out.push_back(broadcasts[i].commitments.at(bin).at(prover_index));
  }
  return out;
}

template <GroupBackend G>
struct AggregateResult {
  typename G::Scalar y;
  int64_t estimate = 0;
};

/// Sum of the per-prover outputs plus the centered integer estimate.
/// Refuses to aggregate unless every prover delivered an output.
template <GroupBackend G>
AggregateResult<G> aggregate(const std::vector<ProverOutput<G>>& outputs, uint64_t k_provers,
                             uint64_t n_b) {
  if (outputs.size() != k_provers) {
    throw ConfigError("cannot aggregate: missing prover output");
  }
  auto y = G::scalar_zero();
  for (const auto& o : outputs) y = G::scalar_add(y, o.y);
  return {y, debiased_estimate<G>(y, k_provers, n_b)};
}

}  // namespace vdp
