#include <algorithm>
#include <vector>

#include "xcorr/error.hpp"
#include "xcorr/kernels.hpp"

namespace xcorr::kernels {

MeasureResult max_over_pair_sets_reference(std::span<const BinarySequence> seqs, std::size_t k) {
    const std::size_t n = seqs.front().size();
    const std::size_t pairs = seqs.size() * n;
    if (k < 2 || k > pairs) throw InvalidArgument("no admissible configuration for this order");

    MeasureResult best;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;

    for (;;) {
        std::size_t max_shift = 0;
        for (std::size_t p : idx) max_shift = std::max(max_shift, p % n);
        std::int64_t v = 0;
        for (std::size_t pos = 0; pos + max_shift < n; ++pos) {
            int prod = 1;
            for (std::size_t p : idx) prod *= seqs[p / n][pos + p % n];
            v += prod;
            const auto a = static_cast<std::uint64_t>(v < 0 ? -v : v);
            if (a > best.value) {
                best.value = a;
                best.witness.window = pos + 1;
                best.witness.members.clear();
                best.witness.shifts.clear();
                for (std::size_t p : idx) {
                    best.witness.members.push_back(p / n);
                    best.witness.shifts.push_back(p % n);
                }
            }
        }

        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pairs - k + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best;
}

}  // namespace xcorr::kernels
