#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vdp/pedersen.hpp"

namespace vdp {

template <GroupBackend G>
struct MorraOpening {
  typename G::Scalar m;
  typename G::Scalar r;
  friend bool operator==(const MorraOpening&, const MorraOpening&) = default;
};

/// One batched run of the commit-reveal coin protocol: every participant
/// commits to n_b scalars in commit order, then opens them in the exact
/// reverse order. The reverse order is what makes the last committer the
/// first revealer, so nobody opens after having seen every other opening.
template <GroupBackend G>
struct MorraBatch {
  std::vector<std::string> commit_order;
  std::vector<std::vector<Commitment<G>>> commitments;  // indexed like commit_order
  std::vector<std::string> reveal_order;
  std::vector<std::vector<MorraOpening<G>>> reveals;  // indexed like reveal_order
};

/// X = sum of all contributions mod q. Needs at least two contributors or
/// there is nobody to keep the sum honest.
template <GroupBackend G>
typename G::Scalar morra_combine(const std::vector<typename G::Scalar>& values) {
  if (values.empty()) throw ConfigError("morra_combine: no contributions");
  if (values.size() < 2) throw ConfigError("morra_combine: need at least two contributions");
  auto acc = G::scalar_zero();
  for (const auto& v : values) acc = G::scalar_add(acc, v);
  return acc;
}

/// Thresholds a uniform scalar into a coin: 0 iff X <= ceil(q/2).
template <GroupBackend G>
uint8_t scalar_to_bit(const typename G::Scalar& x) {
  return G::scalar_leq(x, G::scalar_half_ceil()) ? 0 : 1;
}

/// A party's private half of one batch: the openings it will reveal later.
template <GroupBackend G>
struct MorraSecrets {
  std::vector<MorraOpening<G>> openings;
  std::vector<Commitment<G>> commitments;
};

template <GroupBackend G>
MorraSecrets<G> morra_contribution(const PublicParams<G>& pp, size_t count, SeededRng& rng) {
  MorraSecrets<G> out;
  out.openings.reserve(count);
  out.commitments.reserve(count);
  for (size_t j = 0; j < count; j++) {
    auto m = random_scalar<G>(rng);
    auto r = random_scalar<G>(rng);
    out.openings.push_back({m, r});
    out.commitments.push_back(commit(pp, m, r));
  }
  return out;
}

struct MorraVerdict {
  bool ok = true;
  std::string blame;
  std::string reason;
};

/// Replays a recorded batch and checks every public rule: the participant
/// set, the reveal order being the exact reverse of the commit order, and
/// every opening matching its commitment. Identifies the first offender.
template <GroupBackend G>
MorraVerdict verify_morra_batch(const PublicParams<G>& pp, const MorraBatch<G>& batch,
                                size_t count, const std::vector<std::string>& expected_parties) {
  if (batch.commit_order.size() != expected_parties.size() ||
      batch.commitments.size() != batch.commit_order.size()) {
    return {false, "", "participant set mismatch in commit phase"};
  }
  {
    auto sorted_a = batch.commit_order;
    auto sorted_b = expected_parties;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b) return {false, "", "unexpected participant in commit phase"};
  }
  for (const auto& cs : batch.commitments) {
    if (cs.size() != count) return {false, "", "wrong commitment count"};
  }

  std::vector<std::string> expected_reveal(batch.commit_order.rbegin(), batch.commit_order.rend());
  if (batch.reveal_order != expected_reveal) {
    return {false, "", "reveal order is not the reverse of commit order"};
  }
  if (batch.reveals.size() > batch.reveal_order.size()) {
    return {false, "", "more reveals than participants"};
  }
  // a truncated reveal list blames the first party that went silent
  if (batch.reveals.size() < batch.reveal_order.size()) {
    return {false, batch.reveal_order[batch.reveals.size()], "party did not reveal"};
  }
  for (size_t i = 0; i < batch.reveal_order.size(); i++) {
    const auto& party = batch.reveal_order[i];
    const auto it =
        std::find(batch.commit_order.begin(), batch.commit_order.end(), party);
    const size_t ci = static_cast<size_t>(it - batch.commit_order.begin());
    if (batch.reveals[i].size() != count) return {false, party, "wrong reveal count"};
    for (size_t j = 0; j < count; j++) {
      const auto& open = batch.reveals[i][j];
      if (!verify_opening(pp, batch.commitments[ci][j], open.m, open.r)) {
        return {false, party, "reveal does not open commitment " + std::to_string(j)};
      }
    }
  }
  return {};
}

/// Coin extraction from a (verified) batch.
template <GroupBackend G>
std::vector<uint8_t> morra_coins(const MorraBatch<G>& batch, size_t count) {
  std::vector<uint8_t> bits(count);
  for (size_t j = 0; j < count; j++) {
    std::vector<typename G::Scalar> vals;
    vals.reserve(batch.reveals.size());
    for (const auto& party_reveals : batch.reveals) vals.push_back(party_reveals[j].m);
    bits[j] = scalar_to_bit<G>(morra_combine<G>(vals));
  }
  return bits;
}

/// Honest end-to-end batch among the given parties. Aborts with blame
/// exactly as a live verifier would if any reveal fails to open.
template <GroupBackend G>
std::pair<MorraBatch<G>, std::vector<uint8_t>> run_morra(
    const PublicParams<G>& pp, const std::vector<std::string>& party_ids, size_t count,
    SeededRng& rng) {
  if (party_ids.size() < 2) throw ConfigError("run_morra: need at least two parties");
  MorraBatch<G> batch;
  std::vector<MorraSecrets<G>> secrets;
  for (const auto& id : party_ids) {
    auto child = rng.child("morra/" + id);
    secrets.push_back(morra_contribution(pp, count, child));
    batch.commit_order.push_back(id);
    batch.commitments.push_back(secrets.back().commitments);
  }
  for (size_t i = party_ids.size(); i-- > 0;) {
    batch.reveal_order.push_back(batch.commit_order[i]);
    batch.reveals.push_back(secrets[i].openings);
  }
  auto verdict = verify_morra_batch(pp, batch, count, party_ids);
  if (!verdict.ok) throw ProtocolAbort(verdict.blame, "morra", verdict.reason);
  auto coins = morra_coins(batch, count);
  return {std::move(batch), std::move(coins)};
}

}  // namespace vdp
