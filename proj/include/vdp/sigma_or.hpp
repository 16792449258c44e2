#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vdp/pedersen.hpp"

namespace vdp {

inline constexpr const char* kOrProofDomainTag = "VDP-OR-v1";

/// Domain separation for Fiat-Shamir: every proved statement in a session
/// gets a unique (session, party, index) triple, and a proof transplanted to
/// any other context fails verification.
struct ProofContext {
  Bytes session_id;
  std::string party_id;
  uint64_t index = 0;

  Bytes serialize() const {
    ByteWriter w;
    w.blob(session_id);
    w.blob(party_id);
    w.u64(index);
    return w.take();
  }
};

/// Non-interactive disjunctive proof that a commitment opens to 0 or 1.
/// Field order is fixed by the wire format: (d0, d1, e0, e1, v0, v1).
template <GroupBackend G>
struct OrProof {
  typename G::Element d0;
  typename G::Element d1;
  typename G::Scalar e0;
  typename G::Scalar e1;
  typename G::Scalar v0;
  typename G::Scalar v1;

  friend bool operator==(const OrProof&, const OrProof&) = default;

  Bytes serialize() const {
    ByteWriter w;
    w.raw(G::element_encode(d0));
    w.raw(G::element_encode(d1));
    w.raw(G::scalar_encode(e0));
    w.raw(G::scalar_encode(e1));
    w.raw(G::scalar_encode(v0));
    w.raw(G::scalar_encode(v1));
    return w.take();
  }

  static std::optional<OrProof> deserialize(BytesView bytes) {
    if (bytes.size() != 2 * G::kElementBytes + 4 * G::kScalarBytes) return std::nullopt;
    ByteReader r(bytes);
    auto d0 = G::element_decode(r.raw(G::kElementBytes));
    auto d1 = G::element_decode(r.raw(G::kElementBytes));
    auto e0 = G::scalar_decode(r.raw(G::kScalarBytes));
    auto e1 = G::scalar_decode(r.raw(G::kScalarBytes));
    auto v0 = G::scalar_decode(r.raw(G::kScalarBytes));
    auto v1 = G::scalar_decode(r.raw(G::kScalarBytes));
    if (!d0 || !d1 || !e0 || !e1 || !v0 || !v1) return std::nullopt;
    return OrProof{*d0, *d1, *e0, *e1, *v0, *v1};
  }
};

template <GroupBackend G>
typename G::Scalar derive_challenge(const PublicParams<G>& pp, const ProofContext& ctx,
                                    const Commitment<G>& c, const typename G::Element& d0,
                                    const typename G::Element& d1) {
  TranscriptHasher h(kOrProofDomainTag);
  h.append(pp.serialize());
  h.append(ctx.serialize());
  h.append(G::element_encode(c.point));
  h.append(G::element_encode(d0));
  h.append(G::element_encode(d1));
  return G::scalar_reduce_wide(h.finish_wide());
}

// ---------------------------------------------------------------------------
// Interactive three-move core. The disjunction is composed the usual way:
// the prover simulates the branch whose statement is false and answers the
// true branch with the witness. Branch 0 claims c = h^r, branch 1 claims
// c/g = h^r. The Fiat-Shamir wrapper below fixes the challenge by hashing.

template <GroupBackend G>
struct OrProverCommitState {
  typename G::Element d0, d1;
  unsigned true_branch;          // 0 or 1, which statement the witness proves
  typename G::Scalar witness_r;  // r with c = g^branch h^r
  typename G::Scalar nonce;      // fresh exponent for the true branch
  typename G::Scalar sim_e, sim_v;
};

/// First prover move. `true_branch` is the branch the caller claims to hold a
/// witness for; nothing here checks the claim, which is exactly what lets
/// tests and adversaries attempt proofs for ineligible commitments.
template <GroupBackend G>
OrProverCommitState<G> or_prove_commit(const PublicParams<G>& pp, unsigned true_branch,
                                       const typename G::Scalar& witness_r,
                                       const Commitment<G>& c, SeededRng& rng) {
  OrProverCommitState<G> st;
  st.true_branch = true_branch & 1;
  st.witness_r = witness_r;
  st.nonce = random_scalar<G>(rng);
  st.sim_e = random_scalar<G>(rng);
  st.sim_v = random_scalar<G>(rng);
  // c^-e as c^(q-e): one exponentiation, no field inversion
  const auto c_inv_e = G::pow(c.point, G::scalar_neg(st.sim_e));
  if (st.true_branch == 0) {
    // simulate branch 1: d1 = g^e1 h^v1 c^-e1
    st.d1 = G::op(G::op(G::pow(pp.g, st.sim_e), G::pow(pp.h, st.sim_v)), c_inv_e);
    st.d0 = G::pow(pp.h, st.nonce);
  } else {
    // simulate branch 0: d0 = h^v0 c^-e0
    st.d0 = G::op(G::pow(pp.h, st.sim_v), c_inv_e);
    st.d1 = G::pow(pp.h, st.nonce);
  }
  return st;
}

/// Second prover move, closing the proof for a given challenge.
template <GroupBackend G>
OrProof<G> or_prove_respond(const OrProverCommitState<G>& st, const typename G::Scalar& e) {
  OrProof<G> p;
  p.d0 = st.d0;
  p.d1 = st.d1;
  const auto e_true = G::scalar_sub(e, st.sim_e);
  const auto v_true = G::scalar_add(st.nonce, G::scalar_mul(e_true, st.witness_r));
  if (st.true_branch == 0) {
    p.e0 = e_true;
    p.v0 = v_true;
    p.e1 = st.sim_e;
    p.v1 = st.sim_v;
  } else {
    p.e1 = e_true;
    p.v1 = v_true;
    p.e0 = st.sim_e;
    p.v0 = st.sim_v;
  }
  return p;
}

/// Verifier equations for a given total challenge (interactive view).
template <GroupBackend G>
bool or_verify_with_challenge(const PublicParams<G>& pp, const Commitment<G>& c,
                              const OrProof<G>& p, const typename G::Scalar& e) {
  if (!(G::scalar_add(p.e0, p.e1) == e)) return false;
  // d0 c^e0 = h^v0
  if (!(G::op(p.d0, G::pow(c.point, p.e0)) == G::pow(pp.h, p.v0))) return false;
  // d1 c^e1 = g^e1 h^v1
  const auto rhs = G::op(G::pow(pp.g, p.e1), G::pow(pp.h, p.v1));
  return G::op(p.d1, G::pow(c.point, p.e1)) == rhs;
}

// ---------------------------------------------------------------------------
// Non-interactive API.

/// Produces a proof that `c` commits to the bit `x`. Refuses to run unless
/// x is a bit and (x, r) actually opens c.
template <GroupBackend G>
OrProof<G> prove_bit(const PublicParams<G>& pp, const typename G::Scalar& x,
                     const typename G::Scalar& r, const Commitment<G>& c,
                     const ProofContext& ctx, SeededRng& rng) {
  unsigned branch;
  if (x == G::scalar_zero()) {
    branch = 0;
  } else if (x == G::scalar_one()) {
    branch = 1;
  } else {
    throw ConfigError("prove_bit: committed value is not a bit");
  }
  if (!verify_opening(pp, c, x, r)) {
    throw ConfigError("prove_bit: (x, r) does not open the commitment");
  }
  auto st = or_prove_commit(pp, branch, r, c, rng);
  const auto e = derive_challenge(pp, ctx, c, st.d0, st.d1);
  return or_prove_respond(st, e);
}

template <GroupBackend G>
bool verify_bit(const PublicParams<G>& pp, const Commitment<G>& c, const OrProof<G>& p,
                const ProofContext& ctx) {
  return or_verify_with_challenge(pp, c, p, derive_challenge(pp, ctx, c, p.d0, p.d1));
}

/// Special soundness extractor: two accepting interactive transcripts that
/// share the first message but answer different challenges reveal an opening
/// of c to 0 or to 1.
template <GroupBackend G>
std::optional<std::pair<unsigned, typename G::Scalar>> extract_bit_witness(
    const PublicParams<G>& pp, const Commitment<G>& c, const OrProof<G>& t1,
    const OrProof<G>& t2) {
  if (!(t1.d0 == t2.d0) || !(t1.d1 == t2.d1)) return std::nullopt;
  if (!(t1.e0 == t2.e0)) {
    // c^(e0-e0') = h^(v0-v0')
    const auto de = G::scalar_sub(t1.e0, t2.e0);
    const auto dv = G::scalar_sub(t1.v0, t2.v0);
    const auto r = G::scalar_mul(dv, G::scalar_invert(de));
    if (verify_opening(pp, c, G::scalar_zero(), r)) return std::make_pair(0u, r);
    return std::nullopt;
  }
  if (!(t1.e1 == t2.e1)) {
    const auto de = G::scalar_sub(t1.e1, t2.e1);
    const auto dv = G::scalar_sub(t1.v1, t2.v1);
    const auto r = G::scalar_mul(dv, G::scalar_invert(de));
    if (verify_opening(pp, c, G::scalar_one(), r)) return std::make_pair(1u, r);
    return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Batched verification hook. Folds all verifier equations into one product
// weighted by random coefficients. Off by default; the plain loop is the
// reference path and the one exercised by correctness tests.

struct BatchVerifyOptions {
  bool enabled = false;
  uint64_t coefficient_seed = 0x5eedu;
};

template <GroupBackend G>
bool verify_bits(const PublicParams<G>& pp, const std::vector<Commitment<G>>& cs,
                 const std::vector<OrProof<G>>& proofs, const std::vector<ProofContext>& ctxs,
                 const BatchVerifyOptions& opts = {}) {
  if (cs.size() != proofs.size() || cs.size() != ctxs.size()) return false;
  if (!opts.enabled) {
    for (size_t i = 0; i < cs.size(); i++) {
      if (!verify_bit(pp, cs[i], proofs[i], ctxs[i])) return false;
    }
    return true;
  }
  SeededRng rng(opts.coefficient_seed);
  auto acc = G::identity();
  for (size_t i = 0; i < cs.size(); i++) {
    const auto& p = proofs[i];
    const auto e = derive_challenge(pp, ctxs[i], cs[i], p.d0, p.d1);
    if (!(G::scalar_add(p.e0, p.e1) == e)) return false;
    // residue of equation 0: d0 c^e0 h^-v0, must be the identity
    auto res0 = G::op(G::op(p.d0, G::pow(cs[i].point, p.e0)),
                      G::inverse(G::pow(pp.h, p.v0)));
    // residue of equation 1: d1 c^e1 g^-e1 h^-v1
    auto res1 = G::op(G::op(p.d1, G::pow(cs[i].point, p.e1)),
                      G::inverse(G::op(G::pow(pp.g, p.e1), G::pow(pp.h, p.v1))));
    acc = G::op(acc, G::pow(res0, random_scalar<G>(rng)));
    acc = G::op(acc, G::pow(res1, random_scalar<G>(rng)));
  }
  return acc == G::identity();
}

}  // namespace vdp
