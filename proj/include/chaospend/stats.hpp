// SPDX-License-Identifier: Apache-2.0
//
// Randomness evidence over OutputNumber streams. Every accumulator is an
// exact integer fold with an associative merge, so sharded evaluation gives
// the same bits as a single pass.

#pragma once

#include "chaospend/pendulum.hpp"
#include "chaospend/prng.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chaospend::stats {

class StatsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBuckets = 100;

// Equal-width buckets over [0, 10^10).
class Histogram {
public:
    explicit Histogram(std::size_t bucket_count);

    void add(OutputNumber v);
    void merge(const Histogram& other);

    std::size_t bucket_count() const { return counts_.size(); }
    std::size_t bucket_of(OutputNumber v) const;
    std::uint64_t bucket_low(std::size_t k) const;   // inclusive
    std::uint64_t bucket_high(std::size_t k) const;  // exclusive
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total() const { return total_; }
    std::size_t empty_buckets() const;

    void write_csv(std::ostream& out) const;

    friend bool operator==(const Histogram&, const Histogram&) = default;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

// Throws StatsError on an empty stream or bucket_count < 2.
Histogram histogram(std::span<const OutputNumber> stream, std::size_t bucket_count = kDefaultBuckets);

// 128-bit key: the four raw state words.
using StateKey = std::array<std::uint32_t, 4>;

StateKey state_key(const PendulumState& s);

struct CycleReport {
    std::uint64_t steps_checked = 0;
    bool cycle_found = false;
    std::optional<std::uint64_t> cycle_start;
    std::optional<std::uint64_t> cycle_length;

    // {"steps":N,"found":B,"start":S|null,"length":L|null}
    std::string to_record() const;

    friend bool operator==(const CycleReport&, const CycleReport&) = default;
};

// First repeat of a full raw state within max_steps states, via a seen-set.
// `next` returns nullopt when the stream ends early.
CycleReport detect_cycle(const std::function<std::optional<PendulumState>()>& next, std::uint64_t max_steps);
CycleReport detect_cycle(std::span<const PendulumState> states, std::uint64_t max_steps);

// Per-position digit tallies; position 0 is the most significant digit.
struct DigitCounts {
    std::array<std::array<std::uint64_t, 10>, 10> counts{};
    std::uint64_t n = 0;

    void add(OutputNumber v);
    void merge(const DigitCounts& other);

    friend bool operator==(const DigitCounts&, const DigitCounts&) = default;
};

struct ChiSquareReport {
    std::array<double, 10> per_position{};
    double pooled = 0.0;
    std::uint64_t n = 0;

    friend bool operator==(const ChiSquareReport&, const ChiSquareReport&) = default;
};

// chi-square against uniform(10), 9 degrees of freedom per position.
inline constexpr double kChiSquare9At999 = 27.877;

ChiSquareReport chi_square(const DigitCounts& counts);
// Throws StatsError for streams shorter than 1000.
ChiSquareReport digit_chi_square(std::span<const OutputNumber> stream);

// Exact sums for Pearson correlation of (x_i, x_{i+lag}).
struct LagMoments {
    unsigned __int128 n = 0;
    unsigned __int128 sx = 0;
    unsigned __int128 sy = 0;
    unsigned __int128 sxx = 0;
    unsigned __int128 syy = 0;
    unsigned __int128 sxy = 0;

    void add(std::uint64_t x, std::uint64_t y);
    void merge(const LagMoments& other);
    bool defined() const;
    // Throws StatsError when either side is constant.
    double correlation() const;

    friend bool operator==(const LagMoments&, const LagMoments&) = default;
};

// Values are scaled to [0,1) by 10^10 first; the scale cancels exactly.
// Throws StatsError unless stream.size() > lag >= 1, or on a constant stream.
double lag_correlation(std::span<const OutputNumber> stream, std::size_t lag);

// CSV `index,value` for the first `first_n` values.
void write_series(std::ostream& out, std::span<const OutputNumber> stream, std::size_t first_n);
void export_series(std::span<const OutputNumber> stream, const std::filesystem::path& path, std::size_t first_n);

struct AnalysisOptions {
    std::size_t bucket_count = kDefaultBuckets;
    std::size_t lag = 1;
    unsigned threads = 1;
};

struct Analysis {
    Histogram histogram{kDefaultBuckets};
    DigitCounts digits;
    ChiSquareReport chi;
    LagMoments lag_moments;
    std::optional<double> lag_r;  // empty for constant or too-short streams

    friend bool operator==(const Analysis&, const Analysis&) = default;
};

// Histogram, digit tallies and lag moments in one sharded pass. `chi` is
// filled for any non-empty stream; callers enforce the 1000-value minimum.
Analysis analyze(std::span<const OutputNumber> stream, const AnalysisOptions& options);

}  // namespace chaospend::stats
