#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdp/pedersen.hpp"
#include "vdp/sigma_or.hpp"

namespace vdp {

/// Additive sharing over the scalar field: K-1 uniform shares plus one that
/// makes the sum come out to x. K = 1 degenerates to handing over x itself.
template <GroupBackend G>
std::vector<typename G::Scalar> split_secret(const typename G::Scalar& x, uint64_t k_provers,
                                             SeededRng& rng) {
  if (k_provers < 1) throw ConfigError("split_secret: need at least one prover");
  std::vector<typename G::Scalar> shares;
  shares.reserve(k_provers);
  auto rest = x;
  for (uint64_t k = 0; k + 1 < k_provers; k++) {
    auto s = random_scalar<G>(rng);
    rest = G::scalar_sub(rest, s);
    shares.push_back(s);
  }
  shares.push_back(rest);
  return shares;
}

/// What one prover privately receives from one client for one coordinate.
template <GroupBackend G>
struct ShareOpening {
  typename G::Scalar share;
  typename G::Scalar randomness;
};

/// Everything a client broadcasts. A third party can recompute the client's
/// verdict from this bundle alone.
template <GroupBackend G>
struct ClientBroadcast {
  uint32_t client_id = 0;
  uint32_t bins = 1;     // M
  uint32_t provers = 1;  // K
  std::vector<std::vector<Commitment<G>>> commitments;  // [coordinate][prover]
  std::vector<OrProof<G>> coordinate_proofs;            // one per coordinate
  // sum of all share randomness, opening the product of derived commitments
  // to 1; present only for histogram inputs (M > 1)
  std::optional<typename G::Scalar> norm_randomness;

  Bytes serialize() const {
    ByteWriter w;
    w.u32(client_id);
    w.u32(bins);
    w.u32(provers);
    for (const auto& row : commitments) {
      for (const auto& c : row) w.raw(G::element_encode(c.point));
    }
    for (const auto& p : coordinate_proofs) w.raw(p.serialize());
    w.u8(norm_randomness.has_value() ? 1 : 0);
    if (norm_randomness) w.raw(G::scalar_encode(*norm_randomness));
    return w.take();
  }
};

template <GroupBackend G>
struct ClientSubmission {
  ClientBroadcast<G> broadcast;
  std::vector<std::vector<ShareOpening<G>>> payloads;  // [prover][coordinate]
};

template <GroupBackend G>
ProofContext client_proof_context(const Bytes& session_id, uint32_t client_id,
                                  uint64_t coordinate) {
  return ProofContext{session_id, "client:" + std::to_string(client_id), coordinate};
}

/// Product of the per-prover commitments for one coordinate; opens to the
/// coordinate value under the summed randomness.
template <GroupBackend G>
Commitment<G> derive_input_commitment(const std::vector<Commitment<G>>& per_prover) {
  auto acc = identity_commitment<G>();
  for (const auto& c : per_prover) acc = combine(acc, c);
  return acc;
}

namespace detail {

/// Shares, commits and proves an arbitrary coordinate vector without
/// checking that it is a legal input. Coordinates that are not bits get a
/// forged proof attempt through the closest branch, which honest
/// verification rejects. Adversary and test machinery builds on this.
template <GroupBackend G>
ClientSubmission<G> build_submission_unchecked(const PublicParams<G>& pp,
                                               const std::vector<typename G::Scalar>& coords,
                                               uint32_t client_id, uint64_t k_provers,
                                               const Bytes& session_id, SeededRng& rng) {
  const auto m = coords.size();
  ClientSubmission<G> sub;
  sub.broadcast.client_id = client_id;
  sub.broadcast.bins = static_cast<uint32_t>(m);
  sub.broadcast.provers = static_cast<uint32_t>(k_provers);
  sub.broadcast.commitments.resize(m);
  sub.payloads.assign(k_provers, {});
  for (auto& p : sub.payloads) p.resize(m);

  auto norm_r = G::scalar_zero();
  for (size_t i = 0; i < m; i++) {
    auto shares = split_secret<G>(coords[i], k_provers, rng);
    auto sum_r = G::scalar_zero();
    for (uint64_t k = 0; k < k_provers; k++) {
      auto r = random_scalar<G>(rng);
      sum_r = G::scalar_add(sum_r, r);
      sub.payloads[k][i] = {shares[k], r};
      sub.broadcast.commitments[i].push_back(commit(pp, shares[k], r));
    }
    norm_r = G::scalar_add(norm_r, sum_r);

    const auto derived = derive_input_commitment<G>(sub.broadcast.commitments[i]);
    const auto ctx = client_proof_context<G>(session_id, client_id, i);
    if (coords[i] == G::scalar_zero() || coords[i] == G::scalar_one()) {
      sub.broadcast.coordinate_proofs.push_back(
          prove_bit(pp, coords[i], sum_r, derived, ctx, rng));
    } else {
      auto st = or_prove_commit(pp, 1, sum_r, derived, rng);
      const auto e = derive_challenge(pp, ctx, derived, st.d0, st.d1);
      sub.broadcast.coordinate_proofs.push_back(or_prove_respond(st, e));
    }
  }
  if (m > 1) sub.broadcast.norm_randomness = norm_r;
  return sub;
}

}  // namespace detail

/// Client-side construction. Refuses inputs outside the legal language: a
/// single bit for M = 1, a one-hot vector for M > 1.
template <GroupBackend G>
ClientSubmission<G> build_client_submission(const PublicParams<G>& pp,
                                            const std::vector<uint8_t>& input,
                                            uint32_t client_id, uint64_t k_provers,
                                            const Bytes& session_id, SeededRng& rng) {
  if (input.empty()) throw ConfigError("client input must have at least one coordinate");
  uint64_t weight = 0;
  for (uint8_t v : input) {
    if (v > 1) throw ConfigError("client input coordinates must be bits");
    weight += v;
  }
  if (input.size() > 1 && weight != 1) {
    throw ConfigError("histogram input must be one-hot");
  }
  std::vector<typename G::Scalar> coords;
  coords.reserve(input.size());
  for (uint8_t v : input) coords.push_back(G::scalar_from_u64(v));
  return detail::build_submission_unchecked(pp, coords, client_id, k_provers, session_id, rng);
}

struct ClientVerdict {
  bool accepted = true;
  std::string reason;

  friend bool operator==(const ClientVerdict&, const ClientVerdict&) = default;
};

/// Public validation of a broadcast bundle. Deterministic in the bundle and
/// session id, so the verifier's record can be re-derived by anyone.
template <GroupBackend G>
ClientVerdict verify_client_submission(const PublicParams<G>& pp, const ClientBroadcast<G>& b,
                                       const Bytes& session_id, uint32_t expected_provers,
                                       uint32_t expected_bins) {
  if (b.bins != expected_bins || b.provers != expected_provers) {
    return {false, "dimension mismatch"};
  }
  if (b.bins == 0 || b.commitments.size() != b.bins ||
      b.coordinate_proofs.size() != b.bins) {
    return {false, "malformed bundle"};
  }
  for (const auto& row : b.commitments) {
    if (row.size() != b.provers) return {false, "malformed bundle"};
  }
  if ((b.bins > 1) != b.norm_randomness.has_value()) {
    return {false, "norm opening presence mismatch"};
  }

  auto product = identity_commitment<G>();
  for (uint32_t i = 0; i < b.bins; i++) {
    const auto derived = derive_input_commitment<G>(b.commitments[i]);
    const auto ctx = client_proof_context<G>(session_id, b.client_id, i);
    if (!verify_bit(pp, derived, b.coordinate_proofs[i], ctx)) {
      return {false, "coordinate " + std::to_string(i) + " failed the bit proof"};
    }
    product = combine(product, derived);
  }
  if (b.bins > 1) {
    // one-hot norm: the product of derived commitments must open to 1
    if (!verify_opening(pp, product, G::scalar_one(), *b.norm_randomness)) {
      return {false, "norm check failed: input weight is not 1"};
    }
  }
  return {};
}

}  // namespace vdp
