#include <gtest/gtest.h>

#include <vector>

#include "support/stats.hpp"
#include "vdp/groups/ristretto255.hpp"
#include "vdp/groups/zp1024.hpp"
#include "vdp/groups/zp_subgroup.hpp"
#include "vdp/morra.hpp"

namespace vdp {
namespace {

template <typename G>
class MorraTest : public ::testing::Test {};

using Backends = ::testing::Types<Ristretto255, Zp1024, Zp61, Zp101>;
TYPED_TEST_SUITE(MorraTest, Backends);

TYPED_TEST(MorraTest, CombineSumsModOrder) {
  using G = TypeParam;
  EXPECT_EQ(morra_combine<G>({G::scalar_zero(), G::scalar_zero()}), G::scalar_zero());
  // wraparound: (q-1) + 1 = 0
  auto q_minus_1 = G::scalar_neg(G::scalar_one());
  EXPECT_EQ(morra_combine<G>({q_minus_1, G::scalar_one()}), G::scalar_zero());
  EXPECT_THROW(morra_combine<G>({}), ConfigError);
  EXPECT_THROW(morra_combine<G>({G::scalar_one()}), ConfigError);
}

TYPED_TEST(MorraTest, ThresholdRuleAtTheEdges) {
  using G = TypeParam;
  EXPECT_EQ(scalar_to_bit<G>(G::scalar_zero()), 0);
  EXPECT_EQ(scalar_to_bit<G>(G::scalar_neg(G::scalar_one())), 1);  // X = q-1
  EXPECT_EQ(scalar_to_bit<G>(G::scalar_half_ceil()), 0);
  EXPECT_EQ(scalar_to_bit<G>(G::scalar_add(G::scalar_half_ceil(), G::scalar_one())), 1);
}

TYPED_TEST(MorraTest, HonestBatchProducesCoinsAndReverifies) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(1);
  const std::vector<std::string> parties{"prover:0", "prover:1", "verifier"};
  auto [batch, coins] = run_morra(pp, parties, 64, rng);
  EXPECT_EQ(coins.size(), 64u);
  auto verdict = verify_morra_batch(pp, batch, 64, parties);
  EXPECT_TRUE(verdict.ok);
  EXPECT_EQ(morra_coins(batch, 64), coins);
}

TYPED_TEST(MorraTest, MisrevealIsBlamedOnTheRightParty) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(2);
  const std::vector<std::string> parties{"prover:0", "prover:1", "verifier"};
  auto [batch, coins] = run_morra(pp, parties, 16, rng);

  // prover:1 revealed second-to-last (commit order is reversed for reveals)
  auto tampered = batch;
  const size_t reveal_slot = 1;
  ASSERT_EQ(tampered.reveal_order[reveal_slot], "prover:1");
  tampered.reveals[reveal_slot][3].m =
      G::scalar_add(tampered.reveals[reveal_slot][3].m, G::scalar_one());
  auto verdict = verify_morra_batch(pp, tampered, 16, parties);
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.blame, "prover:1");
}

TYPED_TEST(MorraTest, SilentPartyIsBlamed) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(3);
  const std::vector<std::string> parties{"prover:0", "prover:1", "verifier"};
  auto [batch, coins] = run_morra(pp, parties, 8, rng);
  auto truncated = batch;
  truncated.reveals.resize(1);  // second revealer never responds
  auto verdict = verify_morra_batch(pp, truncated, 8, parties);
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.blame, truncated.reveal_order[1]);
  EXPECT_EQ(verdict.reason, "party did not reveal");
}

TYPED_TEST(MorraTest, WrongParticipantSetIsRejected) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(7);
  const std::vector<std::string> parties{"prover:0", "prover:1", "verifier"};
  auto [batch, coins] = run_morra(pp, parties, 8, rng);

  // the verifier's contribution cannot be dropped
  auto missing = batch;
  missing.commit_order.pop_back();
  missing.commitments.pop_back();
  missing.reveal_order.erase(missing.reveal_order.begin());
  missing.reveals.erase(missing.reveals.begin());
  EXPECT_FALSE(verify_morra_batch(pp, missing, 8, parties).ok);

  // nor can an unexpected party stand in for an expected one
  auto renamed = batch;
  renamed.commit_order[0] = "prover:9";
  renamed.reveal_order[2] = "prover:9";
  EXPECT_FALSE(verify_morra_batch(pp, renamed, 8, parties).ok);
}

TYPED_TEST(MorraTest, NonReversedRevealOrderIsRejected) {
  using G = TypeParam;
  auto pp = setup<G>();
  SeededRng rng(4);
  const std::vector<std::string> parties{"prover:0", "prover:1", "verifier"};
  auto [batch, coins] = run_morra(pp, parties, 8, rng);
  auto reordered = batch;
  std::swap(reordered.reveal_order[0], reordered.reveal_order[1]);
  std::swap(reordered.reveals[0], reordered.reveals[1]);
  auto verdict = verify_morra_batch(pp, reordered, 8, parties);
  EXPECT_FALSE(verdict.ok);
  EXPECT_EQ(verdict.reason, "reveal order is not the reverse of commit order");
}

// ---------------------------------------------------------------------------
// Distributional facts, checked exhaustively or statistically on toy orders

TEST(MorraDistributionTest, ExactThresholdCountsOnTinyOrder) {
  using G = Zp101;
  int zeros = 0, ones = 0;
  for (uint64_t x = 0; x < G::kQ; x++) {
    (scalar_to_bit<G>({x}) == 0 ? zeros : ones)++;
  }
  EXPECT_EQ(zeros, 52);
  EXPECT_EQ(ones, 49);
  // the residual deviation from a fair coin is (q+3)/2 - q/2 = 1.5 residues,
  // i.e. one residue beyond ceil(q/2)
  EXPECT_EQ(zeros, static_cast<int>((G::kQ + 3) / 2));
}

TEST(MorraDistributionTest, OneUniformContributionMakesTheSumUniform) {
  // exhaustive: adversarial fixed values plus a sweep of the honest value
  // hits every residue exactly once
  using G = Zp101;
  std::vector<int> hits(G::kQ, 0);
  const std::vector<typename G::Scalar> adversarial{{7}, {13}};
  for (uint64_t m = 0; m < G::kQ; m++) {
    auto x = morra_combine<G>({adversarial[0], adversarial[1], {m}});
    hits[x.v]++;
  }
  for (uint64_t v = 0; v < G::kQ; v++) EXPECT_EQ(hits[v], 1);
}

TEST(MorraDistributionTest, SumWithAdversarialFixedValuesIsUniform) {
  using G = Zp101;
  SeededRng rng(5);
  const uint64_t kDraws = 101 * 100;
  std::vector<double> observed(G::kQ, 0);
  for (uint64_t i = 0; i < kDraws; i++) {
    auto honest = random_scalar<G>(rng);
    auto x = morra_combine<G>({{99}, {42}, honest});
    observed[x.v] += 1;
  }
  std::vector<double> expected(G::kQ, static_cast<double>(kDraws) / G::kQ);
  EXPECT_GT(testing::chi2_gof_pvalue(observed, expected), 0.01);
}

TEST(MorraDistributionTest, AdaptiveCommitterCannotBiasTheCoin) {
  // The adversary picks its scalar as a function of every commitment it has
  // seen, which is all of them since it commits last. Hiding makes that
  // information useless: the empirical coin stays within 3 sigma of fair.
  using G = Zp61;
  auto pp = setup<G>();
  SeededRng rng(6);
  const int kRounds = 10000;
  int ones = 0;
  for (int round = 0; round < kRounds; round++) {
    auto honest_rng = rng.child_indexed("honest", static_cast<uint64_t>(round));
    auto honest = morra_contribution(pp, 1, honest_rng);

    // adaptive choice: hash of the observed commitment
    TranscriptHasher h("adaptive-adversary");
    h.append(G::element_encode(honest.commitments[0].point));
    auto adv_m = G::scalar_reduce_wide(h.finish_wide());
    auto x = morra_combine<G>({honest.openings[0].m, adv_m});
    ones += scalar_to_bit<G>(x);
  }
  const double freq = static_cast<double>(ones) / kRounds;
  const double sigma = 0.5 / std::sqrt(static_cast<double>(kRounds));
  EXPECT_LE(std::fabs(freq - 0.5), 3 * sigma);
}

}  // namespace
}  // namespace vdp
