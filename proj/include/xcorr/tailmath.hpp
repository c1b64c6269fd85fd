#pragma once

// Tail probabilities of the symmetric binomial S(n, 1/2) and the band
// formulas built on them. All `log` in formulas is the natural log; base 2
// appears only in hypothesis checks.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace xcorr {

enum class TailMode { exact_float, exact_rational };

/// P(S(n,1/2) >= t). t <= 0 gives 1 and t > n gives 0.
/// exact_float: saddle-point pmf plus a term recurrence, relative error well
/// below 1e-9 up to n = 1e6. exact_rational: big-integer sum, n <= 256.
double binom_tail_exact(std::uint64_t n, std::int64_t t, TailMode mode = TailMode::exact_float);

/// Natural log of P(S(n,1/2) >= t); -inf when the tail is empty.
double log_binom_tail(std::uint64_t n, std::int64_t t);

/// P(S(n,1/2) >= x) for real x, i.e. S >= ceil(x).
double binom_tail_at_least(std::uint64_t n, double x);

/// Sum of C(n, j) for j >= t, so the tail is this over 2^n. n <= 256.
boost::multiprecision::cpp_int binom_tail_numerator(std::uint64_t n, std::int64_t t);

/// log( C(n,x) / 2^n ), accurate to a few ulps.
double log_binom_pmf(std::uint64_t n, std::uint64_t x);

/// ln C(n, k) through log-gamma; valid for real-valued n >= k >= 0.
double log_binomial(double n, double k);

enum class MoivreLaplaceForm { integral, closed };

/// Gaussian approximation to P(S(n,1/2) >= floor(n/2) + c sqrt(n)).
/// integral: sqrt(2/pi) * int_c^inf exp(-2x^2) dx, valid for c >= 0.
/// closed: exp(-2c^2) / (2c sqrt(2 pi)), requires c > 0.
/// The (1 + o(1)) factor is taken as 1; compare against binom_tail_exact.
double ml_tail(double c, MoivreLaplaceForm form);

struct PointBound {
    double bound;  // 2^{-4(c + {n/2})^2 / n} sqrt(2 / (pi n))
    double exact;  // C(n, floor(n/2) + c) / 2^n
    double ratio() const { return exact / bound; }
};

/// Lower estimate for the point mass at floor(n/2) + c, with the exact mass
/// for comparison. Requires -floor(n/2) <= c <= ceil(n/2).
PointBound binom_point_lower_bound(std::uint64_t n, std::int64_t c);

/// Upper bound exp(-a^2 / 2n) on P(S+-(n) > a), S+- = 2 S(n,1/2) - n.
double hoeffding_bound(std::uint64_t n, double a);

/// Exact P(S+-(n) > a) = P(S(n,1/2) > (n + a) / 2).
double signed_walk_tail(std::uint64_t n, double a);

struct RkThreshold {
    std::uint64_t r = 0;
    bool satisfied = true;  // false if even r = 0 misses the threshold
    int regime = 1;         // 1: log2|S| <= m^{1/4}; 2: otherwise
    std::uint64_t m = 0;    // floor(N / 3)
    double log_threshold = 0;
};

/// Largest r >= 0 with P(S(m,1/2) >= (m + r)/2) >= threshold(N, k, |S|),
/// by ascending scan. N >= 6, k >= 2, seed_count >= 2.
RkThreshold rk_threshold(std::uint64_t length, std::uint64_t k, std::uint64_t seed_count);

/// Same quantity found by descending from r = m.
RkThreshold rk_threshold_descending(std::uint64_t length, std::uint64_t k, std::uint64_t seed_count);

/// Probability that `seed_count` iid uniform sequences of the given length
/// are pairwise distinct.
double collision_free_probability(std::uint64_t length, std::uint64_t seed_count);

enum class BandKind { family, generator, single_sequence };

struct Band {
    double lower = 0;
    double upper = 0;
    double base = 0;  // sqrt(N (ln C(N,k) + k ln |F|)), or without the |F| term for one sequence
    std::vector<std::string> warnings;  // violated theorem hypotheses
};

/// Typical-value band for the measure. Hypothesis violations are reported
/// as warnings, not errors; k > N is an error.
Band theorem_band(std::uint64_t length, std::uint64_t k, std::uint64_t cardinality, BandKind kind);

/// ln C(floor(N/3), k) / ln C(N, k); 2 <= k <= floor(N/3).
double logbinom_ratio(std::uint64_t length, std::uint64_t k);

}  // namespace xcorr
