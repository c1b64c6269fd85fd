#include "xcorr/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <vector>

#include "xcorr/error.hpp"

namespace xcorr::kernels {

namespace {

constexpr std::size_t kW = BinarySequence::kWordBits;

// Walk statistics of one byte read LSB first.
struct ByteWalk {
    std::int8_t total;
    std::int8_t max_prefix;
    std::int8_t min_prefix;
    std::uint8_t argmax;  // earliest prefix length (1..8) attaining max_prefix
    std::uint8_t argmin;
};

constexpr std::array<ByteWalk, 256> make_byte_table() {
    std::array<ByteWalk, 256> t{};
    for (int b = 0; b < 256; ++b) {
        int s = 0, hi = -9, lo = 9, ahi = 0, alo = 0;
        for (int i = 0; i < 8; ++i) {
            s += ((b >> i) & 1) ? -1 : 1;
            if (s > hi) hi = s, ahi = i + 1;
            if (s < lo) lo = s, alo = i + 1;
        }
        t[b] = {static_cast<std::int8_t>(s), static_cast<std::int8_t>(hi),
                static_cast<std::int8_t>(lo), static_cast<std::uint8_t>(ahi),
                static_cast<std::uint8_t>(alo)};
    }
    return t;
}

constexpr auto kByteTable = make_byte_table();

// Shifted copies of every (sequence, shift) pair, W words each, bits past
// N - shift cleared.
class PairTable {
  public:
    PairTable(std::span<const BinarySequence> seqs)
        : n_(seqs.front().size()), w_((n_ + kW - 1) / kW), pairs_(seqs.size() * n_),
          data_(pairs_ * w_) {
        for (std::size_t m = 0; m < seqs.size(); ++m)
            for (std::size_t d = 0; d < n_; ++d) {
                std::uint64_t* dst = &data_[(m * n_ + d) * w_];
                for (std::size_t w = 0; w < w_; ++w) dst[w] = seqs[m].window64(d + w * kW);
            }
    }

    std::size_t length() const noexcept { return n_; }
    std::size_t words() const noexcept { return w_; }
    std::size_t pairs() const noexcept { return pairs_; }
    std::size_t shift(std::size_t pair) const noexcept { return pair % n_; }
    const std::uint64_t* row(std::size_t pair) const noexcept { return &data_[pair * w_]; }

  private:
    std::size_t n_, w_, pairs_;
    std::vector<std::uint64_t> data_;
};

struct Best {
    std::uint64_t value = 0;
    std::vector<std::size_t> pairs;
    std::size_t window = 0;
};

// Depth-first walk over k-subsets whose first pair is fixed.
class ChunkSearch {
  public:
    ChunkSearch(const PairTable& table, std::size_t k)
        : t_(table), k_(k), buf_(k * table.words()), chosen_(k), max_shift_(k) {}

    Best run(std::size_t first) {
        best_ = Best{};
        chosen_[0] = first;
        max_shift_[0] = t_.shift(first);
        std::copy_n(t_.row(first), t_.words(), buf_.begin());
        descend(1);
        return best_;
    }

  private:
    void descend(std::size_t depth) {
        const std::size_t w = t_.words();
        const std::uint64_t* prev = &buf_[(depth - 1) * w];
        const std::size_t last = t_.pairs() - (k_ - depth);
        for (std::size_t p = chosen_[depth - 1] + 1; p <= last; ++p) {
            const std::size_t ms = std::max(max_shift_[depth - 1], t_.shift(p));
            const std::size_t len = t_.length() - ms;
            if (len <= best_.value) continue;  // no window here can beat the current best
            std::uint64_t* cur = &buf_[depth * w];
            const std::uint64_t* row = t_.row(p);
            for (std::size_t i = 0; i < w; ++i) cur[i] = prev[i] ^ row[i];
            chosen_[depth] = p;
            max_shift_[depth] = ms;
            if (depth + 1 == k_) {
                const WalkMax r = scan_walk({cur, w}, len);
                if (r.value > best_.value) {
                    best_.value = r.value;
                    best_.window = r.window;
                    best_.pairs.assign(chosen_.begin(), chosen_.end());
                }
            } else {
                descend(depth + 1);
            }
        }
    }

    const PairTable& t_;
    std::size_t k_;
    std::vector<std::uint64_t> buf_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> max_shift_;
    Best best_;
};

}  // namespace

WalkMax scan_walk(std::span<const std::uint64_t> bits, std::size_t length) noexcept {
    std::int64_t s = 0;
    WalkMax best;
    const std::size_t full_bytes = length / 8;
    for (std::size_t j = 0; j < full_bytes; ++j) {
        const auto byte = static_cast<std::uint8_t>(bits[j / 8] >> (8 * (j % 8)));
        const ByteWalk& e = kByteTable[byte];
        const std::int64_t hi = s + e.max_prefix;
        const std::int64_t lo = -(s + e.min_prefix);
        std::int64_t v;
        std::size_t at;
        if (hi > lo) {
            v = hi, at = e.argmax;
        } else if (lo > hi) {
            v = lo, at = e.argmin;
        } else {
            v = hi, at = std::min(e.argmax, e.argmin);
        }
        if (v > static_cast<std::int64_t>(best.value)) {
            best.value = static_cast<std::uint64_t>(v);
            best.window = 8 * j + at;
        }
        s += e.total;
    }
    for (std::size_t i = full_bytes * 8; i < length; ++i) {
        s += ((bits[i / kW] >> (i % kW)) & 1u) ? -1 : 1;
        const std::uint64_t a = static_cast<std::uint64_t>(s < 0 ? -s : s);
        if (a > best.value) best.value = a, best.window = i + 1;
    }
    return best;
}

WalkMax scan_walk_bitwise(std::span<const std::uint64_t> bits, std::size_t length) noexcept {
    std::int64_t s = 0;
    WalkMax best;
    for (std::size_t i = 0; i < length; ++i) {
        s += ((bits[i / kW] >> (i % kW)) & 1u) ? -1 : 1;
        const std::uint64_t a = static_cast<std::uint64_t>(s < 0 ? -s : s);
        if (a > best.value) best.value = a, best.window = i + 1;
    }
    return best;
}

MeasureResult max_over_pair_sets(std::span<const BinarySequence> seqs, std::size_t k, int threads) {
    const PairTable table(seqs);
    const std::size_t n = table.length();
    if (k < 2 || k > table.pairs()) throw InvalidArgument("no admissible configuration for this order");

    const std::size_t chunks = table.pairs() - k + 1;
    std::vector<Best> results(chunks);
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel num_threads(nthreads)
    {
        ChunkSearch search(table, k);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c)
            results[static_cast<std::size_t>(c)] = search.run(static_cast<std::size_t>(c));
    }

    // Chunks cover increasing key ranges, so a strict comparison keeps the
    // earliest maximizer.
    const Best* best = nullptr;
    for (const auto& r : results)
        if (r.value > 0 && (best == nullptr || r.value > best->value)) best = &r;

    MeasureResult out;
    out.value = best->value;
    out.witness.window = best->window;
    for (std::size_t p : best->pairs) {
        out.witness.members.push_back(p / n);
        out.witness.shifts.push_back(p % n);
    }
    return out;
}

}  // namespace xcorr::kernels
