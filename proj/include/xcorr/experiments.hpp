#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "xcorr/measures.hpp"
#include "xcorr/sequence.hpp"
#include "xcorr/tailmath.hpp"

namespace xcorr {

enum class ExperimentMode { family, generator, single };

const char* mode_name(ExperimentMode mode);
const char* measure_name(ExperimentMode mode);  // "phi", "phi_tilde", "c_k"

struct ExperimentConfig {
    std::size_t length = 0;
    std::size_t cardinality = 1;  // family size or seed count; 1 in single mode
    std::size_t k_min = 2;
    std::size_t k_max = 2;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    ExperimentMode mode = ExperimentMode::family;
    double confidence = 0.05;  // reported only
    std::uint64_t budget = 10'000'000'000ull;
    bool allow_approx = false;
    int threads = 0;
};

struct BoundsRecord {
    std::size_t length = 0;
    std::size_t k = 0;
    ExperimentMode mode = ExperimentMode::family;
    std::size_t cardinality = 0;
    std::uint64_t value = 0;
    double lower = 0;
    double upper = 0;
    bool within_band = false;  // lower < value < upper
    bool approximate = false;
    ShiftPattern witness;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    double elapsed_ms = 0;
};

/// Upper bound on estimator samples when a run falls back to approximation.
inline constexpr std::uint64_t kMaxEstimatorSamples = 10'000'000;

/// One record per (trial, k), ordered by trial then k. Trial t draws its
/// instance from RandomStream(seed, t), so records do not depend on thread
/// count or scheduling. Throws Infeasible up front if some k exceeds the
/// budget and approximation is not allowed.
std::vector<BoundsRecord> run_trials(const ExperimentConfig& config);

/// The sequences trial `trial` measured (family members, generator images,
/// or the single sequence).
std::vector<BinarySequence> trial_sequences(const ExperimentConfig& config, std::uint64_t trial);

/// One JSON object, fixed field order, doubles with 17 significant digits.
/// With include_timing false, elapsed_ms is written as 0.
std::string to_jsonl(const BoundsRecord& record, bool include_timing = true);
std::string csv_header();
std::string to_csv(const BoundsRecord& record);

using Pmf = std::map<std::uint64_t, double>;

struct DistributionOracle {
    Pmf pmf;
    std::uint64_t families = 0;
};

/// Exact distribution of phi over all families of the given size.
/// Requires N <= 12 and C(2^N, size) <= 10^7, else Infeasible.
DistributionOracle exact_distribution_oracle(std::size_t length, std::size_t family_size, std::size_t k,
                                             int threads = 0);

/// Empirical distribution of the record values for one order k.
Pmf empirical_pmf(std::span<const BoundsRecord> records, std::size_t k);

double total_variation(const Pmf& p, const Pmf& q);

struct CollisionReport {
    std::uint64_t trials = 0;
    std::uint64_t collision_free = 0;
    double empirical = 0;
    double formula = 0;
    double standard_error = 0;  // of the empirical rate under the formula value
};

CollisionReport collision_experiment(std::size_t length, std::size_t seed_count, std::uint64_t trials,
                                     std::uint64_t seed, int threads = 0);

/// Per-k aggregates as a JSON array, ordered by k.
nlohmann::ordered_json summarize(std::span<const BoundsRecord> records);

}  // namespace xcorr
