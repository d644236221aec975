// SPDX-License-Identifier: Apache-2.0

#include "chaospend/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <thread>
#include <unordered_map>

namespace chaospend::stats {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

struct KeyHash {
    std::size_t operator()(const StateKey& k) const noexcept {
        std::uint64_t h = 0x9E37'79B9'7F4A'7C15ull;
        for (const std::uint32_t w : k) {
            h ^= w;
            h *= 0xBF58'476D'1CE4'E5B9ull;
            h ^= h >> 31;
        }
        return static_cast<std::size_t>(h);
    }
};

// 10 * sum(O^2) / N - N, evaluated as one exact numerator then divided.
double chi_from_counts(const std::array<std::uint64_t, 10>& counts, std::uint64_t n) {
    u128 sum_sq = 0;
    for (const std::uint64_t c : counts) sum_sq += u128{c} * c;
    const i128 num = static_cast<i128>(sum_sq * 10) - static_cast<i128>(u128{n} * n);
    return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(n));
}

template <typename Fn>
void for_each_shard(std::size_t size, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || size < threads) {
        fn(0, std::size_t{0}, size);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (size + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = std::min(size, t * chunk);
        const std::size_t hi = std::min(size, lo + chunk);
        pool.emplace_back([&fn, t, lo, hi] { fn(t, lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

// ---------------------------------------------------------------------------

Histogram::Histogram(std::size_t bucket_count) : counts_(bucket_count, 0) {
    if (bucket_count < 2) throw StatsError("histogram needs at least 2 buckets");
}

std::size_t Histogram::bucket_of(OutputNumber v) const {
    return static_cast<std::size_t>(u128{v.value()} * counts_.size() / OutputNumber::kLimit);
}

std::uint64_t Histogram::bucket_low(std::size_t k) const {
    const u128 scaled = u128{k} * OutputNumber::kLimit;
    return static_cast<std::uint64_t>((scaled + counts_.size() - 1) / counts_.size());
}

std::uint64_t Histogram::bucket_high(std::size_t k) const { return bucket_low(k + 1); }

void Histogram::add(OutputNumber v) {
    ++counts_[bucket_of(v)];
    ++total_;
}

void Histogram::merge(const Histogram& other) {
    if (other.counts_.size() != counts_.size()) throw StatsError("histogram bucket counts differ");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

std::size_t Histogram::empty_buckets() const {
    return static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), 0u));
}

void Histogram::write_csv(std::ostream& out) const {
    out << "bucket_low,bucket_high,count\n";
    for (std::size_t k = 0; k < counts_.size(); ++k) {
        out << bucket_low(k) << ',' << bucket_high(k) << ',' << counts_[k] << '\n';
    }
}

Histogram histogram(std::span<const OutputNumber> stream, std::size_t bucket_count) {
    if (stream.empty()) throw StatsError("histogram of an empty stream");
    Histogram h(bucket_count);
    for (const OutputNumber v : stream) h.add(v);
    return h;
}

// ---------------------------------------------------------------------------

StateKey state_key(const PendulumState& s) {
    return {s.theta1.raw(), s.theta2.raw(), s.omega1.raw(), s.omega2.raw()};
}

std::string CycleReport::to_record() const {
    std::string out = "{\"steps\":" + std::to_string(steps_checked) +
                      ",\"found\":" + (cycle_found ? "true" : "false") + ",\"start\":";
    out += cycle_start ? std::to_string(*cycle_start) : "null";
    out += ",\"length\":";
    out += cycle_length ? std::to_string(*cycle_length) : "null";
    out += '}';
    return out;
}

CycleReport detect_cycle(const std::function<std::optional<PendulumState>()>& next, std::uint64_t max_steps) {
    if (max_steps < 1) throw StatsError("detect_cycle: max_steps must be >= 1");
    std::unordered_map<StateKey, std::uint64_t, KeyHash> seen;
    seen.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(max_steps, 1u << 22)));
    CycleReport report;
    for (std::uint64_t i = 0; i < max_steps; ++i) {
        const std::optional<PendulumState> s = next();
        if (!s) break;
        report.steps_checked = i + 1;
        const auto [it, inserted] = seen.try_emplace(state_key(*s), i);
        if (!inserted) {
            report.cycle_found = true;
            report.cycle_start = it->second;
            report.cycle_length = i - it->second;
            break;
        }
    }
    return report;
}

CycleReport detect_cycle(std::span<const PendulumState> states, std::uint64_t max_steps) {
    std::size_t i = 0;
    return detect_cycle(
        [&]() -> std::optional<PendulumState> {
            if (i >= states.size()) return std::nullopt;
            return states[i++];
        },
        max_steps);
}

// ---------------------------------------------------------------------------

void DigitCounts::add(OutputNumber v) {
    std::uint64_t x = v.value();
    for (std::size_t pos = 10; pos-- > 0;) {
        ++counts[pos][x % 10];
        x /= 10;
    }
    ++n;
}

void DigitCounts::merge(const DigitCounts& other) {
    for (std::size_t p = 0; p < 10; ++p) {
        for (std::size_t d = 0; d < 10; ++d) counts[p][d] += other.counts[p][d];
    }
    n += other.n;
}

ChiSquareReport chi_square(const DigitCounts& counts) {
    if (counts.n == 0) throw StatsError("chi-square of an empty stream");
    ChiSquareReport report;
    report.n = counts.n;
    std::array<std::uint64_t, 10> pooled{};
    for (std::size_t p = 0; p < 10; ++p) {
        report.per_position[p] = chi_from_counts(counts.counts[p], counts.n);
        for (std::size_t d = 0; d < 10; ++d) pooled[d] += counts.counts[p][d];
    }
    report.pooled = chi_from_counts(pooled, counts.n * 10);
    return report;
}

ChiSquareReport digit_chi_square(std::span<const OutputNumber> stream) {
    if (stream.size() < 1000) {
        throw StatsError("digit chi-square needs at least 1000 values, got " + std::to_string(stream.size()));
    }
    DigitCounts counts;
    for (const OutputNumber v : stream) counts.add(v);
    return chi_square(counts);
}

// ---------------------------------------------------------------------------

void LagMoments::add(std::uint64_t x, std::uint64_t y) {
    ++n;
    sx += x;
    sy += y;
    sxx += u128{x} * x;
    syy += u128{y} * y;
    sxy += u128{x} * y;
}

void LagMoments::merge(const LagMoments& o) {
    n += o.n;
    sx += o.sx;
    sy += o.sy;
    sxx += o.sxx;
    syy += o.syy;
    sxy += o.sxy;
}

bool LagMoments::defined() const {
    return n != 0 && static_cast<i128>(n * sxx) != static_cast<i128>(sx * sx) &&
           static_cast<i128>(n * syy) != static_cast<i128>(sy * sy);
}

double LagMoments::correlation() const {
    // n*S - S1*S2 in exact integers; all terms stay below 2^127 for
    // streams up to 2^28 values.
    const auto centered = [&](u128 cross, u128 a, u128 b) {
        return static_cast<i128>(n * cross) - static_cast<i128>(a * b);
    };
    const i128 cov = centered(sxy, sx, sy);
    const i128 vx = centered(sxx, sx, sx);
    const i128 vy = centered(syy, sy, sy);
    if (n == 0 || vx == 0 || vy == 0) throw StatsError("correlation undefined for a constant stream");
    const long double denom = std::sqrt(static_cast<long double>(vx)) * std::sqrt(static_cast<long double>(vy));
    return static_cast<double>(static_cast<long double>(cov) / denom);
}

double lag_correlation(std::span<const OutputNumber> stream, std::size_t lag) {
    if (lag < 1 || stream.size() <= lag) throw StatsError("lag_correlation needs stream length > lag >= 1");
    LagMoments m;
    for (std::size_t i = 0; i + lag < stream.size(); ++i) m.add(stream[i].value(), stream[i + lag].value());
    return m.correlation();
}

// ---------------------------------------------------------------------------

void write_series(std::ostream& out, std::span<const OutputNumber> stream, std::size_t first_n) {
    if (first_n > stream.size()) {
        throw StatsError("series export asks for " + std::to_string(first_n) + " values, stream has " +
                         std::to_string(stream.size()));
    }
    out << "index,value\n";
    for (std::size_t i = 0; i < first_n; ++i) out << i << ',' << stream[i].digits() << '\n';
}

void export_series(std::span<const OutputNumber> stream, const std::filesystem::path& path, std::size_t first_n) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StatsError("cannot open " + path.string() + " for writing");
    write_series(out, stream, first_n);
    out.flush();
    if (!out) throw StatsError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------

Analysis analyze(std::span<const OutputNumber> stream, const AnalysisOptions& options) {
    if (stream.empty()) throw StatsError("analysis of an empty stream");
    const unsigned threads = std::max(1u, options.threads);
    std::vector<Histogram> hist(threads, Histogram(options.bucket_count));
    std::vector<DigitCounts> digits(threads);
    std::vector<LagMoments> moments(threads);

    for_each_shard(stream.size(), threads, [&](unsigned t, std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            hist[t].add(stream[i]);
            digits[t].add(stream[i]);
            if (i + options.lag < stream.size()) moments[t].add(stream[i].value(), stream[i + options.lag].value());
        }
    });

    Analysis result;
    result.histogram = Histogram(options.bucket_count);
    for (unsigned t = 0; t < threads; ++t) {
        result.histogram.merge(hist[t]);
        result.digits.merge(digits[t]);
        result.lag_moments.merge(moments[t]);
    }
    result.chi = chi_square(result.digits);
    if (result.lag_moments.defined()) result.lag_r = result.lag_moments.correlation();
    return result;
}

}  // namespace chaospend::stats
