#include <gtest/gtest.h>

#include <set>
#include <vector>

#include "support/stats.hpp"
#include "vdp/groups/ristretto255.hpp"
#include "vdp/groups/zp1024.hpp"
#include "vdp/groups/zp_subgroup.hpp"
#include "vdp/sigma_or.hpp"

namespace vdp {
namespace {

ProofContext test_ctx(uint64_t index = 0) {
  return ProofContext{Bytes{0xde, 0xad, 0xbe, 0xef}, "prover:0", index};
}

template <typename G>
class SigmaOrTest : public ::testing::Test {};

using Backends = ::testing::Types<Ristretto255, Zp1024, Zp61, Zp16>;
TYPED_TEST_SUITE(SigmaOrTest, Backends);

TYPED_TEST(SigmaOrTest, CompletenessForBothBits) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(1);
  for (int t = 0; t < 100; t++) {
    auto x = (t % 2 == 0) ? G::scalar_zero() : G::scalar_one();
    auto r = random_scalar<G>(rng);
    auto c = commit(pp, x, r);
    auto proof = prove_bit(pp, x, r, c, test_ctx(static_cast<uint64_t>(t)), rng);
    EXPECT_TRUE(verify_bit(pp, c, proof, test_ctx(static_cast<uint64_t>(t))));
  }
}

TYPED_TEST(SigmaOrTest, ChallengeIsDeterministicAndBindsInputs) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(2);
  auto c = commit(pp, G::scalar_one(), random_scalar<G>(rng));
  auto d0 = commit(pp, random_scalar<G>(rng), random_scalar<G>(rng)).point;
  auto d1 = commit(pp, random_scalar<G>(rng), random_scalar<G>(rng)).point;

  auto e1 = derive_challenge(pp, test_ctx(), c, d0, d1);
  auto e2 = derive_challenge(pp, test_ctx(), c, d0, d1);
  EXPECT_EQ(e1, e2);

  // challenge is a canonical scalar, i.e. already reduced below the order
  auto dec = G::scalar_decode(G::scalar_encode(e1));
  ASSERT_TRUE(dec.has_value());
  EXPECT_EQ(*dec, e1);

  // perturbing the commitment changes the challenge
  auto c2 = combine(c, commit(pp, G::scalar_one(), G::scalar_zero()));
  EXPECT_FALSE(derive_challenge(pp, test_ctx(), c2, d0, d1) == e1);
  // as does any context field
  auto other = test_ctx();
  other.index = 9;
  EXPECT_FALSE(derive_challenge(pp, other, c, d0, d1) == e1);
}

TYPED_TEST(SigmaOrTest, RepeatedProofsAreDistinctAndAllValid) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(3);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_zero(), r);
  std::set<Bytes> seen;
  for (int t = 0; t < 100; t++) {
    auto proof = prove_bit(pp, G::scalar_zero(), r, c, test_ctx(), rng);
    EXPECT_TRUE(verify_bit(pp, c, proof, test_ctx()));
    seen.insert(proof.serialize());
  }
  EXPECT_EQ(seen.size(), 100u);
}

TYPED_TEST(SigmaOrTest, NonBitCommitmentFailsUnderEitherBranchStrategy) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(4);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_from_u64(2), r);
  for (unsigned branch : {0u, 1u}) {
    auto st = or_prove_commit(pp, branch, r, c, rng);
    auto e = derive_challenge(pp, test_ctx(), c, st.d0, st.d1);
    auto forged = or_prove_respond(st, e);
    EXPECT_FALSE(verify_bit(pp, c, forged, test_ctx()));
  }
}

TYPED_TEST(SigmaOrTest, TamperedResponseFailsVerification) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(5);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_one(), r);
  auto proof = prove_bit(pp, G::scalar_one(), r, c, test_ctx(), rng);
  ASSERT_TRUE(verify_bit(pp, c, proof, test_ctx()));

  auto bumped = proof;
  bumped.v0 = G::scalar_add(bumped.v0, G::scalar_one());
  EXPECT_FALSE(verify_bit(pp, c, bumped, test_ctx()));
  bumped = proof;
  bumped.v1 = G::scalar_add(bumped.v1, G::scalar_one());
  EXPECT_FALSE(verify_bit(pp, c, bumped, test_ctx()));
  bumped = proof;
  bumped.e0 = G::scalar_add(bumped.e0, G::scalar_one());
  EXPECT_FALSE(verify_bit(pp, c, bumped, test_ctx()));
}

TYPED_TEST(SigmaOrTest, ProofDoesNotTransferAcrossContexts) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(6);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_zero(), r);
  auto proof = prove_bit(pp, G::scalar_zero(), r, c, test_ctx(0), rng);
  ASSERT_TRUE(verify_bit(pp, c, proof, test_ctx(0)));

  EXPECT_FALSE(verify_bit(pp, c, proof, test_ctx(1)));
  auto other_party = test_ctx(0);
  other_party.party_id = "prover:1";
  EXPECT_FALSE(verify_bit(pp, c, proof, other_party));
  auto other_session = test_ctx(0);
  other_session.session_id = Bytes{0x00};
  EXPECT_FALSE(verify_bit(pp, c, proof, other_session));
}

TYPED_TEST(SigmaOrTest, ProverRefusesIneligibleInputs) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(7);
  auto r = random_scalar<G>(rng);
  auto c2 = commit(pp, G::scalar_from_u64(2), r);
  EXPECT_THROW(prove_bit(pp, G::scalar_from_u64(2), r, c2, test_ctx(), rng), ConfigError);
  auto c1 = commit(pp, G::scalar_one(), r);
  EXPECT_THROW(prove_bit(pp, G::scalar_one(), G::scalar_add(r, G::scalar_one()), c1, test_ctx(), rng),
               ConfigError);
}

TYPED_TEST(SigmaOrTest, SerializationRoundTripsWithFixedFieldOrder) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(8);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_one(), r);
  auto proof = prove_bit(pp, G::scalar_one(), r, c, test_ctx(), rng);

  auto bytes = proof.serialize();
  ASSERT_EQ(bytes.size(), 2 * G::kElementBytes + 4 * G::kScalarBytes);
  auto back = OrProof<G>::deserialize(bytes);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(*back, proof);

  // field order on the wire: d0, d1, e0, e1, v0, v1
  ByteReader rd(bytes);
  EXPECT_EQ(*G::element_decode(rd.raw(G::kElementBytes)), proof.d0);
  EXPECT_EQ(*G::element_decode(rd.raw(G::kElementBytes)), proof.d1);
  EXPECT_EQ(*G::scalar_decode(rd.raw(G::kScalarBytes)), proof.e0);
  EXPECT_EQ(*G::scalar_decode(rd.raw(G::kScalarBytes)), proof.e1);
  EXPECT_EQ(*G::scalar_decode(rd.raw(G::kScalarBytes)), proof.v0);
  EXPECT_EQ(*G::scalar_decode(rd.raw(G::kScalarBytes)), proof.v1);

  bytes.pop_back();
  EXPECT_FALSE(OrProof<G>::deserialize(bytes).has_value());
  Bytes junk(2 * G::kElementBytes + 4 * G::kScalarBytes, 0xff);
  EXPECT_FALSE(OrProof<G>::deserialize(junk).has_value());
}

TYPED_TEST(SigmaOrTest, BatchedVerificationAgreesWithPlainPath) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(9);
  std::vector<Commitment<G>> cs;
  std::vector<OrProof<G>> proofs;
  std::vector<ProofContext> ctxs;
  for (uint64_t i = 0; i < 16; i++) {
    auto x = (i % 2 == 0) ? G::scalar_zero() : G::scalar_one();
    auto r = random_scalar<G>(rng);
    auto c = commit(pp, x, r);
    ctxs.push_back(test_ctx(i));
    proofs.push_back(prove_bit(pp, x, r, c, ctxs.back(), rng));
    cs.push_back(c);
  }
  EXPECT_TRUE(verify_bits(pp, cs, proofs, ctxs));
  EXPECT_TRUE(verify_bits(pp, cs, proofs, ctxs, {.enabled = true}));

  proofs[7].v1 = G::scalar_add(proofs[7].v1, G::scalar_one());
  EXPECT_FALSE(verify_bits(pp, cs, proofs, ctxs));
  EXPECT_FALSE(verify_bits(pp, cs, proofs, ctxs, {.enabled = true}));
}

// ---------------------------------------------------------------------------
// Interactive-view properties on the toy groups

TEST(SigmaOrExtractorTest, TwoTranscriptsWithSharedFirstMessageYieldOpening) {
  using G = Zp16;
  auto pp = setup<G>();
  SeededRng rng(10);
  for (unsigned bit : {0u, 1u}) {
    auto x = (bit == 0) ? G::scalar_zero() : G::scalar_one();
    auto r = random_scalar<G>(rng);
    auto c = commit(pp, x, r);
    auto st = or_prove_commit(pp, bit, r, c, rng);
    auto ch1 = random_scalar<G>(rng);
    auto ch2 = random_scalar<G>(rng);
    ASSERT_FALSE(ch1 == ch2);
    auto t1 = or_prove_respond(st, ch1);
    auto t2 = or_prove_respond(st, ch2);
    ASSERT_TRUE(or_verify_with_challenge(pp, c, t1, ch1));
    ASSERT_TRUE(or_verify_with_challenge(pp, c, t2, ch2));

    auto witness = extract_bit_witness(pp, c, t1, t2);
    ASSERT_TRUE(witness.has_value());
    EXPECT_EQ(witness->first, bit);
    auto expected_x = (witness->first == 0) ? G::scalar_zero() : G::scalar_one();
    EXPECT_TRUE(verify_opening(pp, c, expected_x, witness->second));
    EXPECT_EQ(witness->second, r);
  }
}

TEST(SigmaOrExtractorTest, RejectsTranscriptsWithDifferentFirstMessages) {
  using G = Zp16;
  auto pp = setup<G>();
  SeededRng rng(11);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_zero(), r);
  auto st1 = or_prove_commit(pp, 0, r, c, rng);
  auto st2 = or_prove_commit(pp, 0, r, c, rng);
  auto ch = random_scalar<G>(rng);
  auto t1 = or_prove_respond(st1, ch);
  auto t2 = or_prove_respond(st2, ch);
  EXPECT_FALSE(extract_bit_witness(pp, c, t1, t2).has_value());
}

TEST(SigmaOrSimulationTest, SimulatedBranchChallengeIsUniform) {
  // For an x=0 witness, e1 belongs to the simulated branch and should be a
  // fresh uniform scalar in every proof. Checked on the q=101 group where the
  // whole challenge space can be binned directly.
  using G = Zp101;
  auto pp = setup<G>();
  SeededRng rng(12);
  auto r = random_scalar<G>(rng);
  auto c = commit(pp, G::scalar_zero(), r);
  const uint64_t kDraws = 101 * 100;
  std::vector<double> observed(G::kQ, 0);
  for (uint64_t i = 0; i < kDraws; i++) {
    auto proof = prove_bit(pp, G::scalar_zero(), r, c, test_ctx(), rng);
    observed[proof.e1.v] += 1;
  }
  std::vector<double> expected(G::kQ, static_cast<double>(kDraws) / G::kQ);
  EXPECT_GT(testing::chi2_gof_pvalue(observed, expected), 0.01);

  // same statement for the x=1 witness and e0
  auto c1 = commit(pp, G::scalar_one(), r);
  std::vector<double> observed0(G::kQ, 0);
  for (uint64_t i = 0; i < kDraws; i++) {
    auto proof = prove_bit(pp, G::scalar_one(), r, c1, test_ctx(), rng);
    observed0[proof.e0.v] += 1;
  }
  EXPECT_GT(testing::chi2_gof_pvalue(observed0, expected), 0.01);
}

}  // namespace
}  // namespace vdp
