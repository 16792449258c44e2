#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "vdp/pedersen.hpp"
#include "vdp/rng.hpp"

namespace vdp {

class InvalidDelta : public ConfigError {
 public:
  explicit InvalidDelta(const std::string& what) : ConfigError(what) {}
};

/// The binomial mechanism needs more than 30 coins or its tail bounds do not
/// apply; parameter choices that land at or below 30 are refused outright.
class CoinCountTooSmall : public ConfigError {
 public:
  explicit CoinCountTooSmall(const std::string& what) : ConfigError(what) {}
};

constexpr uint64_t kMinCoins = 31;

namespace detail {
inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidDelta("delta must lie strictly between 0 and 1");
  }
}
}  // namespace detail

/// Smallest coin count n_b with 10 * sqrt(ln(2/delta) / n_b) <= epsilon.
/// Ceiling rather than rounding, so privacy errs on the safe side; a tiny
/// snap window absorbs floating-point noise when the solution is an integer.
inline uint64_t coins_for_privacy(double epsilon, double delta) {
  detail::check_delta(delta);
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  const long double exact = 100.0L * std::log(2.0L / static_cast<long double>(delta)) /
                            (static_cast<long double>(epsilon) * static_cast<long double>(epsilon));
  const long double nearest = roundl(exact);
  uint64_t n_b;
  if (fabsl(exact - nearest) <= 1e-9L * std::max(1.0L, fabsl(exact))) {
    n_b = static_cast<uint64_t>(nearest);
  } else {
    n_b = static_cast<uint64_t>(ceill(exact));
  }
  if (n_b < kMinCoins) {
    throw CoinCountTooSmall("requested privacy needs only " + std::to_string(n_b) +
                            " coins; the mechanism requires more than 30");
  }
  return n_b;
}

/// epsilon achieved by n_b coins at the given delta.
inline double privacy_for_coins(uint64_t n_b, double delta) {
  detail::check_delta(delta);
  if (n_b < kMinCoins) {
    throw CoinCountTooSmall("coin count must exceed 30, got " + std::to_string(n_b));
  }
  return 10.0 * std::sqrt(std::log(2.0 / delta) / static_cast<double>(n_b));
}

struct PrivacyParams {
  double epsilon = 0;
  double delta = 0;
  uint64_t n_b = 0;

  static PrivacyParams for_epsilon(double epsilon, double delta) {
    return {epsilon, delta, coins_for_privacy(epsilon, delta)};
  }

  static PrivacyParams for_coins(uint64_t n_b, double delta) {
    return {privacy_for_coins(n_b, delta), delta, n_b};
  }

  void validate() const {
    detail::check_delta(delta);
    if (n_b < kMinCoins) throw CoinCountTooSmall("coin count must exceed 30");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  }
};

/// E|noise - center| for the aggregate of K binomial draws, via the
/// half-normal approximation. Display-only.
inline double expected_noise_magnitude(uint64_t k_provers, uint64_t n_b) {
  const double sigma = std::sqrt(static_cast<double>(k_provers * n_b)) / 2.0;
  return sigma * std::sqrt(2.0 / M_PI);
}

/// Reference behavior of the mechanism: each prover's input gets its own
/// independent Binomial(n_b, 1/2) draw and everything is summed in the
/// field. Protocol runs are tested against the distribution of this oracle.
template <GroupBackend G>
struct IdealOutput {
  typename G::Scalar y;
  std::vector<uint64_t> deltas;
};

template <GroupBackend G>
IdealOutput<G> ideal_mechanism(const std::vector<typename G::Scalar>& prover_inputs, uint64_t n_b,
                               SeededRng& rng) {
  if (n_b < kMinCoins) throw CoinCountTooSmall("coin count must exceed 30");
  IdealOutput<G> out;
  out.y = G::scalar_zero();
  out.deltas.reserve(prover_inputs.size());
  for (const auto& x : prover_inputs) {
    const uint64_t delta = rng.binomial_half(n_b);
    out.deltas.push_back(delta);
    out.y = G::scalar_add(out.y, G::scalar_add(x, G::scalar_from_u64(delta)));
  }
  return out;
}

/// Requires n + K*n_b < q/2 so that lifting the aggregate out of the field
/// is unambiguous. Enforced when a session is configured.
template <GroupBackend G>
void check_debias_window(uint64_t n_clients, uint64_t k_provers, uint64_t n_b) {
  constexpr uint64_t kCap = 1ULL << 40;
  if (n_clients >= kCap || k_provers >= kCap || n_b >= kCap) {
    throw ConfigError("session dimensions out of range");
  }
  const __uint128_t reach = static_cast<__uint128_t>(n_clients) +
                            static_cast<__uint128_t>(k_provers) * n_b;
  if constexpr (G::kOrderFitsU64) {
    if (reach >= G::kOrderU64 / 2) {
      throw ConfigError("n + K*n_b reaches q/2; debiasing would be ambiguous on " + G::id());
    }
  } else {
    // q is at least 2^250 here; the caps above already keep reach << q/2
  }
}

/// Lifts the field aggregate into a signed integer and removes the mean
/// K*n_b/2 of the added noise. Exact whenever 0 <= Q(X) + sum of noise < q/2.
template <GroupBackend G>
int64_t debiased_estimate(const typename G::Scalar& y, uint64_t k_provers, uint64_t n_b) {
  const int64_t center = static_cast<int64_t>(k_provers * n_b / 2);
  if (auto v = G::scalar_to_u64(y); v && *v <= static_cast<uint64_t>(INT64_MAX)) {
    if constexpr (G::kOrderFitsU64) {
      if (*v < (G::kOrderU64 + 1) / 2) return static_cast<int64_t>(*v) - center;
    } else {
      return static_cast<int64_t>(*v) - center;
    }
  }
  const auto neg = G::scalar_neg(y);
  if (auto v = G::scalar_to_u64(neg); v && *v <= static_cast<uint64_t>(INT64_MAX)) {
    return -static_cast<int64_t>(*v) - center;
  }
  throw ConfigError("aggregate lies outside the debiasing window");
}

}  // namespace vdp
