#include "xcorr/tailmath.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "xcorr/error.hpp"

namespace xcorr {

namespace {

using boost::multiprecision::cpp_int;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLn2Pi = 1.8378770664093454835606594728112;  // ln(2 pi)

// ln(n!) - ln( sqrt(2 pi n) (n/e)^n ), Stirling's remainder.
double stirlerr(double n) {
    constexpr double S0 = 1.0 / 12, S1 = 1.0 / 360, S2 = 1.0 / 1260, S3 = 1.0 / 1680, S4 = 1.0 / 1188;
    if (n <= 15.0) return std::lgamma(n + 1.0) - (n + 0.5) * std::log(n) + n - 0.5 * kLn2Pi;
    const double nn = n * n;
    if (n > 500) return (S0 - S1 / nn) / n;
    if (n > 80) return (S0 - (S1 - S2 / nn) / nn) / n;
    if (n > 35) return (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n;
    return (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n;
}

// x ln(x / np) + np - x, without cancellation near x = np.
double bd0(double x, double np) {
    if (std::fabs(x - np) < 0.1 * (x + np)) {
        const double v = (x - np) / (x + np);
        double s = (x - np) * v;
        double ej = 2 * x * v;
        const double v2 = v * v;
        for (int j = 1; j < 1000; ++j) {
            ej *= v2;
            const double s1 = s + ej / (2 * j + 1);
            if (s1 == s) return s1;
            s = s1;
        }
        return s;
    }
    return x * std::log(x / np) + np - x;
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0, carry = 0;
    void add(double x) {
        const double t = sum + x;
        carry += std::fabs(sum) >= std::fabs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + carry; }
};

// For 2t > n: returns log P(S = t) and sum_{j >= t} P(S = j) / P(S = t).
struct UpperTail {
    double log_head;
    double scale;
};

UpperTail upper_tail(std::uint64_t n, std::uint64_t t) {
    CompensatedSum acc;
    acc.add(1.0);
    double r = 1.0;
    for (std::uint64_t j = t; j < n; ++j) {
        r *= static_cast<double>(n - j) / static_cast<double>(j + 1);
        acc.add(r);
        if (r < acc.sum * 1e-18) break;
    }
    return {log_binom_pmf(n, t), acc.value()};
}

}  // namespace

double log_binom_pmf(std::uint64_t n, std::uint64_t x) {
    if (x > n) return -std::numeric_limits<double>::infinity();
    const double dn = static_cast<double>(n);
    if (x == 0 || x == n) return -dn * kLn2;
    const double dx = static_cast<double>(x);
    const double half = dn / 2;
    const double lc = stirlerr(dn) - stirlerr(dx) - stirlerr(dn - dx) - bd0(dx, half) - bd0(dn - dx, half);
    const double lf = kLn2Pi + std::log(dx) + std::log1p(-dx / dn);
    return lc - 0.5 * lf;
}

double log_binomial(double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

cpp_int binom_tail_numerator(std::uint64_t n, std::int64_t t) {
    if (n > 256) throw InvalidArgument("rational tail mode supports n <= 256");
    if (t < 0) t = 0;
    cpp_int c = 1;  // C(n, j)
    cpp_int sum = 0;
    for (std::uint64_t j = 0; j <= n; ++j) {
        if (static_cast<std::int64_t>(j) >= t) sum += c;
        c = c * (n - j) / (j + 1);
    }
    return sum;
}

double binom_tail_exact(std::uint64_t n, std::int64_t t, TailMode mode) {
    if (n == 0) throw InvalidArgument("number of trials must be positive");
    if (t <= 0) return 1.0;
    if (static_cast<std::uint64_t>(t) > n) return 0.0;
    if (mode == TailMode::exact_rational)
        return std::ldexp(binom_tail_numerator(n, t).convert_to<double>(), -static_cast<int>(n));
    const auto ut = static_cast<std::uint64_t>(t);
    if (2 * ut > n) {
        const UpperTail u = upper_tail(n, ut);
        return std::exp(u.log_head) * u.scale;
    }
    // P(S >= t) = 1 - P(S <= t-1) = 1 - P(S >= n-t+1)
    const UpperTail u = upper_tail(n, n - ut + 1);
    return 1.0 - std::exp(u.log_head) * u.scale;
}

double log_binom_tail(std::uint64_t n, std::int64_t t) {
    if (n == 0) throw InvalidArgument("number of trials must be positive");
    if (t <= 0) return 0.0;
    if (static_cast<std::uint64_t>(t) > n) return -std::numeric_limits<double>::infinity();
    const auto ut = static_cast<std::uint64_t>(t);
    if (2 * ut > n) {
        const UpperTail u = upper_tail(n, ut);
        return u.log_head + std::log(u.scale);
    }
    const UpperTail u = upper_tail(n, n - ut + 1);
    return std::log1p(-std::exp(u.log_head) * u.scale);
}

double binom_tail_at_least(std::uint64_t n, double x) {
    if (!std::isfinite(x)) throw InvalidArgument("threshold must be finite");
    const double c = std::ceil(x);
    if (c <= 0) return 1.0;
    if (c > static_cast<double>(n)) return 0.0;
    return binom_tail_exact(n, static_cast<std::int64_t>(c));
}

double ml_tail(double c, MoivreLaplaceForm form) {
    if (form == MoivreLaplaceForm::closed) {
        if (!(c > 0)) throw InvalidArgument("closed form needs c > 0");
        return std::exp(-2 * c * c) / (2 * c * std::sqrt(2 * std::numbers::pi));
    }
    // sqrt(2/pi) * int_c^inf exp(-2x^2) dx = erfc(sqrt(2) c) / 2
    return 0.5 * std::erfc(std::numbers::sqrt2 * c);
}

PointBound binom_point_lower_bound(std::uint64_t n, std::int64_t c) {
    if (n == 0) throw InvalidArgument("number of trials must be positive");
    const auto lo = -static_cast<std::int64_t>(n / 2);
    const auto hi = static_cast<std::int64_t>((n + 1) / 2);
    if (c < lo || c > hi)
        throw InvalidArgument("offset " + std::to_string(c) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    const double dn = static_cast<double>(n);
    const double frac = (n % 2) ? 0.5 : 0.0;
    const double e = static_cast<double>(c) + frac;
    PointBound pb;
    pb.bound = std::exp2(-4 * e * e / dn) * std::sqrt(2 / (std::numbers::pi * dn));
    pb.exact = std::exp(log_binom_pmf(n, static_cast<std::uint64_t>(static_cast<std::int64_t>(n / 2) + c)));
    return pb;
}

double hoeffding_bound(std::uint64_t n, double a) {
    if (n == 0) throw InvalidArgument("number of trials must be positive");
    if (!(a > 0)) throw InvalidArgument("deviation must be positive");
    return std::exp(-a * a / (2 * static_cast<double>(n)));
}

double signed_walk_tail(std::uint64_t n, double a) {
    // 2S - n > a  <=>  S > (n + a)/2  <=>  S >= floor((n + a)/2) + 1
    const double x = (static_cast<double>(n) + a) / 2;
    return binom_tail_at_least(n, std::floor(x) + 1);
}

namespace {

RkThreshold rk_setup(std::uint64_t length, std::uint64_t k, std::uint64_t seed_count) {
    if (length < 6) throw InvalidArgument("rk threshold needs N >= 6");
    if (k < 2) throw InvalidArgument("order must be at least 2");
    if (seed_count < 2) throw InvalidArgument("rk threshold needs at least 2 seeds");
    RkThreshold out;
    out.m = length / 3;
    const double m = static_cast<double>(out.m);
    const double dk = static_cast<double>(k);
    const double seeds = static_cast<double>(seed_count);
    const double log_num = std::log(dk * dk * std::log(static_cast<double>(length)));
    out.regime = std::log2(seeds) <= std::pow(m, 0.25) ? 1 : 2;
    if (out.regime == 1) {
        out.log_threshold = log_num - log_binomial(m + 1, dk - 1) - dk * std::log(seeds);
    } else if (k > seed_count) {
        out.log_threshold = std::numeric_limits<double>::infinity();  // C(|S|, k) = 0
    } else {
        out.log_threshold = log_num - (dk - 1) * std::log(m + 1) - log_binomial(seeds, dk);
    }
    return out;
}

bool rk_holds(const RkThreshold& s, std::uint64_t r) {
    // S >= (m + r)/2 means S >= ceil((m + r)/2)
    const auto t = static_cast<std::int64_t>((s.m + r + 1) / 2);
    return log_binom_tail(s.m, t) >= s.log_threshold;
}

}  // namespace

RkThreshold rk_threshold(std::uint64_t length, std::uint64_t k, std::uint64_t seed_count) {
    RkThreshold s = rk_setup(length, k, seed_count);
    if (!rk_holds(s, 0)) {
        s.r = 0;
        s.satisfied = false;
        return s;
    }
    std::uint64_t r = 0;
    while (r < s.m && rk_holds(s, r + 1)) ++r;
    s.r = r;
    return s;
}

RkThreshold rk_threshold_descending(std::uint64_t length, std::uint64_t k, std::uint64_t seed_count) {
    RkThreshold s = rk_setup(length, k, seed_count);
    for (std::uint64_t r = s.m + 1; r-- > 0;) {
        if (rk_holds(s, r)) {
            s.r = r;
            return s;
        }
    }
    s.r = 0;
    s.satisfied = false;
    return s;
}

double collision_free_probability(std::uint64_t length, std::uint64_t seed_count) {
    if (length == 0) throw InvalidArgument("length must be positive");
    if (seed_count == 0) throw InvalidArgument("seed count must be positive");
    if (length < 64 && seed_count > (std::uint64_t{1} << length)) return 0.0;
    const double space = std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(length, 4096)));

    // sum_{i=1}^{S-1} log(1 - i / 2^N)
    constexpr std::uint64_t kDirect = 1'000'000;
    if (seed_count <= kDirect) {
        CompensatedSum acc;
        for (std::uint64_t i = 1; i < seed_count; ++i) acc.add(std::log1p(-static_cast<double>(i) / space));
        return std::exp(acc.value());
    }
    // Euler-Maclaurin for f(x) = log(1 - x/D) on [0, S-1].
    const double b = static_cast<double>(seed_count - 1);
    const double u = b / space;
    double g;  // (1-u) ln(1-u) + u = sum_{j>=2} u^j / (j (j-1))
    if (u < 0.1) {
        g = 0;
        double p = u;
        for (int j = 2; j < 60; ++j) {
            p *= u;
            g += p / (j * (j - 1.0));
        }
    } else {
        g = (1 - u) * std::log1p(-u) + u;
    }
    const double integral = -space * g;
    const double fb = std::log1p(-u);
    const double dfb = -1.0 / (space - b);
    const double df0 = -1.0 / space;
    return std::exp(integral + fb / 2 + (dfb - df0) / 12);
}

Band theorem_band(std::uint64_t length, std::uint64_t k, std::uint64_t cardinality, BandKind kind) {
    if (length < 2) throw InvalidArgument("length must be at least 2");
    if (k < 2) throw InvalidArgument("order must be at least 2");
    if (k > length) throw InvalidArgument("order exceeds length");
    const double n = static_cast<double>(length);
    const double dk = static_cast<double>(k);
    const double lnc = log_binomial(n, dk);
    Band band;
    if (kind == BandKind::single_sequence) {
        band.base = std::sqrt(n * lnc);
        band.lower = 0.4 * band.base;
        band.upper = 1.75 * band.base;
        if (4 * k > length) band.warnings.push_back("hypothesis k <= N/4 violated");
        return band;
    }
    if (cardinality == 0) throw InvalidArgument("cardinality must be positive");
    const double card = static_cast<double>(cardinality);
    band.base = std::sqrt(n * (lnc + dk * std::log(card)));
    band.lower = 0.4 * band.base;
    band.upper = 2.5 * band.base;
    const double lg = std::log2(card);
    if (lg < 1) band.warnings.push_back("hypothesis log2|F| >= 1 violated");
    if (lg >= n / 12) band.warnings.push_back("hypothesis log2|F| < N/12 violated");
    if (lg > 0 && dk > n / (6 * lg)) band.warnings.push_back("hypothesis k <= N/(6 log2|F|) violated");
    return band;
}

double logbinom_ratio(std::uint64_t length, std::uint64_t k) {
    const std::uint64_t third = length / 3;
    if (k < 2 || k > third)
        throw InvalidArgument("order must lie in [2, floor(N/3)] = [2, " + std::to_string(third) + "]");
    return log_binomial(static_cast<double>(third), static_cast<double>(k)) /
           log_binomial(static_cast<double>(length), static_cast<double>(k));
}

}  // namespace xcorr
