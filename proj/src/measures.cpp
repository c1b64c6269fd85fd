#include "xcorr/measures.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <string>

#include "xcorr/error.hpp"
#include "xcorr/kernels.hpp"

namespace xcorr {

namespace {

constexpr std::size_t kW = BinarySequence::kWordBits;

void check_same_length(std::span<const BinarySequence> seqs) {
    if (seqs.empty()) throw InvalidArgument("no sequences given");
    for (const auto& s : seqs)
        if (s.size() != seqs.front().size()) throw InvalidArgument("sequences differ in length");
}

void check_budget(const CountResult& count, const MeasureOptions& opts) {
    if (opts.force) return;
    if (count.saturated || count.value > opts.budget)
        throw Infeasible("exact enumeration needs " +
                         (count.saturated ? std::string("more than 2^64") : std::to_string(count.value)) +
                         " configurations, budget is " + std::to_string(opts.budget));
}

// Total order used to pick among equally good candidates: larger value,
// then lexicographically smaller pair list, then shorter window.
struct Candidate {
    std::uint64_t value = 0;
    std::vector<std::size_t> pairs;
    std::size_t window = 0;

    bool better_than(const Candidate& o) const {
        if (value != o.value) return value > o.value;
        if (pairs != o.pairs) return pairs < o.pairs;
        return window < o.window;
    }
};

MeasureResult to_result(const Candidate& c, std::size_t n) {
    MeasureResult r;
    r.value = c.value;
    r.witness.window = c.window;
    for (std::size_t p : c.pairs) {
        r.witness.members.push_back(p / n);
        r.witness.shifts.push_back(p % n);
    }
    return r;
}

}  // namespace

std::vector<ShiftPattern::Block> ShiftPattern::blocks() const {
    std::vector<Block> out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (out.empty() || out.back().member != members[i]) out.push_back({members[i], {}});
        out.back().shifts.push_back(shifts[i]);
    }
    return out;
}

std::int64_t correlation_v(std::span<const BinarySequence> seqs, std::span<const std::size_t> shifts,
                           std::size_t window) {
    check_same_length(seqs);
    if (shifts.size() != seqs.size())
        throw InvalidArgument("need one shift per sequence (" + std::to_string(seqs.size()) +
                              " sequences, " + std::to_string(shifts.size()) + " shifts)");
    if (!std::is_sorted(shifts.begin(), shifts.end()))
        throw InvalidArgument("shifts must be nondecreasing");
    const std::size_t n = seqs.front().size();
    if (window == 0 || window + shifts.back() > n)
        throw InvalidArgument("window " + std::to_string(window) + " with largest shift " +
                              std::to_string(shifts.back()) + " does not fit length " + std::to_string(n));

    std::uint64_t ones = 0;
    const std::size_t words = (window + kW - 1) / kW;
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t x = 0;
        for (std::size_t i = 0; i < seqs.size(); ++i) x ^= seqs[i].window64(shifts[i] + w * kW);
        const std::size_t valid = std::min(kW, window - w * kW);
        if (valid < kW) x &= (std::uint64_t{1} << valid) - 1;
        ones += static_cast<std::uint64_t>(std::popcount(x));
    }
    return static_cast<std::int64_t>(window) - 2 * static_cast<std::int64_t>(ones);
}

std::int64_t evaluate_pattern(std::span<const BinarySequence> seqs, const ShiftPattern& pattern) {
    check_same_length(seqs);
    if (pattern.members.size() != pattern.shifts.size() || pattern.members.empty())
        throw InvalidArgument("malformed shift pattern");
    const std::size_t n = seqs.front().size();
    std::size_t max_shift = 0;
    for (std::size_t i = 0; i < pattern.members.size(); ++i) {
        if (pattern.members[i] >= seqs.size()) throw InvalidArgument("pattern refers to a missing sequence");
        max_shift = std::max(max_shift, pattern.shifts[i]);
    }
    if (pattern.window == 0 || pattern.window + max_shift > n)
        throw InvalidArgument("pattern window does not fit the sequence length");
    std::int64_t v = 0;
    for (std::size_t pos = 0; pos < pattern.window; ++pos) {
        int prod = 1;
        for (std::size_t i = 0; i < pattern.members.size(); ++i)
            prod *= seqs[pattern.members[i]][pos + pattern.shifts[i]];
        v += prod;
    }
    return v;
}

CountResult count_windows(std::size_t length, std::size_t k, std::size_t family_size) {
    if (length == 0 || family_size == 0) throw InvalidArgument("length and family size must be positive");
    if (k < 2) throw InvalidArgument("order must be at least 2");
    using u128 = unsigned __int128;
    const u128 pairs = static_cast<u128>(length) * family_size;
    if (k > pairs) return {0, false};
    const u128 r = std::min<u128>(k, pairs - k);
    u128 c = 1;
    for (u128 i = 0; i < r; ++i) {
        c = c * (pairs - i) / (i + 1);
        if (c > UINT64_MAX) return {UINT64_MAX, true};
    }
    return {static_cast<std::uint64_t>(c), false};
}

MeasureResult correlation_measure(const BinarySequence& seq, std::size_t k, const MeasureOptions& opts) {
    if (k < 2 || k > seq.size())
        throw InvalidArgument("order k=" + std::to_string(k) + " outside [2, " + std::to_string(seq.size()) + "]");
    const CountResult count = count_windows(seq.size(), k, 1);
    check_budget(count, opts);
    MeasureResult r = kernels::max_over_pair_sets(std::span(&seq, 1), k, opts.threads);
    r.evaluated = count.value;
    return r;
}

MeasureResult cross_correlation_k_tuple(std::span<const BinarySequence> tuple, std::size_t k) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    if (tuple.size() != k)
        throw InvalidArgument("tuple has " + std::to_string(tuple.size()) + " sequences, order is " +
                              std::to_string(k));
    check_same_length(tuple);
    const std::size_t n = tuple.front().size();
    const std::size_t words = (n + kW - 1) / kW;

    // same[i][j]: positions i and j hold equal sequences
    std::vector<std::vector<bool>> same(k, std::vector<bool>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) same[i][j] = tuple[i] == tuple[j];

    MeasureResult best;
    std::vector<std::size_t> d(k);
    std::vector<std::uint64_t> acc(k * words);
    std::uint64_t evaluated = 0;

    // Shift tuples are visited in lexicographic order, so strict improvement
    // keeps the smallest witness.
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        const std::size_t lo = pos == 0 ? 0 : d[pos - 1];
        for (std::size_t s = lo; s < n; ++s) {
            bool clash = false;
            for (std::size_t j = 0; j < pos && !clash; ++j) clash = same[pos][j] && d[j] == s;
            if (clash) continue;
            d[pos] = s;
            std::uint64_t* cur = &acc[pos * words];
            for (std::size_t w = 0; w < words; ++w) {
                const std::uint64_t x = tuple[pos].window64(s + w * kW);
                cur[w] = pos == 0 ? x : acc[(pos - 1) * words + w] ^ x;
            }
            if (pos + 1 < k) {
                self(self, pos + 1);
                continue;
            }
            ++evaluated;
            const auto r = kernels::scan_walk({cur, words}, n - s);
            if (r.value > best.value) {
                best.value = r.value;
                best.witness.window = r.window;
                best.witness.shifts = d;
            }
        }
    };
    rec(rec, 0);

    if (evaluated == 0) throw InvalidArgument("no admissible shift tuple for this sequence tuple");
    best.witness.members.resize(k);
    for (std::size_t i = 0; i < k; ++i) best.witness.members[i] = i;
    best.evaluated = evaluated;
    return best;
}

MeasureResult phi(const SequenceFamily& family, std::size_t k, const MeasureOptions& opts) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    const CountResult count = count_windows(family.length(), k, family.size());
    if (count.value == 0) throw InvalidArgument("no admissible configuration: order exceeds size * length");
    check_budget(count, opts);
    MeasureResult r = kernels::max_over_pair_sets(family.members(), k, opts.threads);
    r.evaluated = count.value;
    return r;
}

MeasureResult phi_tilde(const GeneratorSample& gen, std::size_t k, const MeasureOptions& opts) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    const std::size_t n = gen.length();
    if (k == 2 && !gen.injective()) {
        // Full-length window on two seeds with equal (or opposite) images.
        // Choosing the lexicographically first such pair matches what the
        // enumeration would report.
        for (std::size_t a = 0; a < gen.seed_count(); ++a)
            for (std::size_t b = a + 1; b < gen.seed_count(); ++b)
                if (gen.image(a) == gen.image(b) || gen.image(a) == gen.image(b).negated()) {
                    MeasureResult r;
                    r.value = n;
                    r.witness = {{a, b}, {0, 0}, n};
                    r.evaluated = 1;
                    return r;
                }
    }
    const CountResult count = count_windows(n, k, gen.seed_count());
    if (count.value == 0) throw InvalidArgument("no admissible configuration: order exceeds seeds * length");
    check_budget(count, opts);
    MeasureResult r = kernels::max_over_pair_sets(gen.images(), k, opts.threads);
    r.evaluated = count.value;
    return r;
}

namespace {

MeasureResult estimate_over(std::span<const BinarySequence> seqs, std::size_t k, std::uint64_t trials,
                            RandomStream& rng, int threads) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    if (trials == 0) throw InvalidArgument("trials must be positive");
    const std::size_t n = seqs.front().size();
    const std::size_t pairs = n * seqs.size();
    if (k > pairs) throw InvalidArgument("no admissible configuration: order exceeds size * length");
    const std::size_t words = (n + kW - 1) / kW;
    const std::uint64_t base = rng();
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

    Candidate best;
#pragma omp parallel num_threads(nthreads)
    {
        Candidate local;
        Candidate cand;
        std::vector<std::uint64_t> acc(words);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t) {
            RandomStream r(base, static_cast<std::uint64_t>(t));
            // Floyd's algorithm: uniform k-subset of [0, pairs)
            cand.pairs.clear();
            for (std::size_t j = pairs - k; j < pairs; ++j) {
                const std::size_t x = r.below(j + 1);
                const bool taken = std::find(cand.pairs.begin(), cand.pairs.end(), x) != cand.pairs.end();
                cand.pairs.push_back(taken ? j : x);
            }
            std::sort(cand.pairs.begin(), cand.pairs.end());
            std::fill(acc.begin(), acc.end(), 0);
            std::size_t max_shift = 0;
            for (std::size_t p : cand.pairs) {
                const std::size_t shift = p % n;
                max_shift = std::max(max_shift, shift);
                for (std::size_t w = 0; w < words; ++w) acc[w] ^= seqs[p / n].window64(shift + w * kW);
            }
            const auto walk = kernels::scan_walk(acc, n - max_shift);
            cand.value = walk.value;
            cand.window = walk.window;
            if (local.pairs.empty() || cand.better_than(local)) local = cand;
        }
#pragma omp critical
        if (!local.pairs.empty() && (best.pairs.empty() || local.better_than(best))) best = local;
    }

    MeasureResult r = to_result(best, n);
    r.evaluated = trials;
    r.approximate = true;
    return r;
}

}  // namespace

MeasureResult estimate_phi(const SequenceFamily& family, std::size_t k, std::uint64_t trials,
                           RandomStream& rng, int threads) {
    return estimate_over(family.members(), k, trials, rng, threads);
}

MeasureResult estimate_phi_tilde(const GeneratorSample& gen, std::size_t k, std::uint64_t trials,
                                 RandomStream& rng, int threads) {
    return estimate_over(gen.images(), k, trials, rng, threads);
}

namespace reference {

MeasureResult correlation_measure(const BinarySequence& seq, std::size_t k) {
    if (k < 2 || k > seq.size())
        throw InvalidArgument("order k=" + std::to_string(k) + " outside [2, " + std::to_string(seq.size()) + "]");
    MeasureResult r = kernels::max_over_pair_sets_reference(std::span(&seq, 1), k);
    r.evaluated = count_windows(seq.size(), k, 1).value;
    return r;
}

MeasureResult phi(const SequenceFamily& family, std::size_t k) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    MeasureResult r = kernels::max_over_pair_sets_reference(family.members(), k);
    r.evaluated = count_windows(family.length(), k, family.size()).value;
    return r;
}

MeasureResult phi_tilde(const GeneratorSample& gen, std::size_t k) {
    if (k < 2) throw InvalidArgument("order must be at least 2");
    MeasureResult r = kernels::max_over_pair_sets_reference(gen.images(), k);
    r.evaluated = count_windows(gen.length(), k, gen.seed_count()).value;
    return r;
}

}  // namespace reference

}  // namespace xcorr
