// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chaospend/stats.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

using namespace chaospend;
using namespace chaospend::stats;

namespace {

std::vector<OutputNumber> numbers(std::initializer_list<std::uint64_t> values) {
    std::vector<OutputNumber> out;
    for (const auto v : values) out.emplace_back(v);
    return out;
}

PendulumState st(std::int64_t a) { return {Fix32::from_hundredths(a), {}, {}, {}}; }

// Quadratic reference: first index whose state appeared before.
CycleReport naive_cycle(const std::vector<PendulumState>& s, std::uint64_t max_steps) {
    CycleReport r;
    for (std::uint64_t i = 0; i < s.size() && i < max_steps; ++i) {
        r.steps_checked = i + 1;
        for (std::uint64_t j = 0; j < i; ++j) {
            if (s[j] == s[i]) {
                r.cycle_found = true;
                r.cycle_start = j;
                r.cycle_length = i - j;
                return r;
            }
        }
    }
    return r;
}

}  // namespace

TEST_CASE("histogram examples") {
    const std::vector<OutputNumber> zeros(1000, OutputNumber(0));
    const Histogram h = histogram(zeros);
    CHECK(h.counts()[0] == 1000);
    CHECK(h.empty_buckets() == 99);

    std::vector<OutputNumber> mids;
    for (std::uint64_t k = 0; k < 100; ++k) mids.emplace_back(k * 100000000ull + 50000000ull);
    const Histogram m = histogram(mids);
    for (const auto c : m.counts()) REQUIRE(c == 1);
    CHECK(m.empty_buckets() == 0);
    CHECK(m.total() == 100);

    CHECK_THROWS_AS(histogram(std::vector<OutputNumber>{}), StatsError);
    CHECK_THROWS(Histogram(1));
}

TEST_CASE("histogram csv and uneven bucket edges") {
    const Histogram h = histogram(numbers({0, 9999999999ull, 5000000000ull}), 3);
    std::ostringstream out;
    h.write_csv(out);
    CHECK(out.str() ==
          "bucket_low,bucket_high,count\n"
          "0,3333333334,1\n"
          "3333333334,6666666667,1\n"
          "6666666667,10000000000,1\n");
    // Every value falls in [low, high) of its own bucket.
    std::mt19937_64 rng(61);
    for (const std::size_t b : {2u, 7u, 100u, 999u}) {
        Histogram g(b);
        for (int i = 0; i < 10000; ++i) {
            const OutputNumber v(rng() % OutputNumber::kLimit);
            const std::size_t k = g.bucket_of(v);
            REQUIRE(g.bucket_low(k) <= v.value());
            REQUIRE(v.value() < g.bucket_high(k));
        }
    }
}

TEST_CASE("cycle detection examples") {
    const std::vector<PendulumState> rest(10, PendulumState{});
    const CycleReport c = detect_cycle(rest, 100);
    CHECK(c.cycle_found);
    CHECK(c.cycle_start == 0u);
    CHECK(c.cycle_length == 1u);
    CHECK(c.steps_checked == 2);

    const std::vector<PendulumState> loop{st(0), st(1), st(2), st(1), st(2)};
    const CycleReport l = detect_cycle(loop, 100);
    CHECK(l.cycle_start == 1u);
    CHECK(l.cycle_length == 2u);

    const std::vector<PendulumState> fresh{st(0), st(1), st(2)};
    const CycleReport f = detect_cycle(fresh, 100);
    CHECK_FALSE(f.cycle_found);
    CHECK(f.steps_checked == 3);
    CHECK(f.to_record() == R"({"steps":3,"found":false,"start":null,"length":null})");
    CHECK(l.to_record() == R"({"steps":4,"found":true,"start":1,"length":2})");

    CHECK(detect_cycle(loop, 3).cycle_found == false);
}

TEST_CASE("cycle detection matches a quadratic scan") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<PendulumState> s;
        const int len = 1 + static_cast<int>(rng() % 60);
        const int alphabet = 1 + static_cast<int>(rng() % 80);
        for (int i = 0; i < len; ++i) s.push_back(st(static_cast<std::int64_t>(rng() % alphabet)));
        const std::uint64_t max_steps = 1 + rng() % 70;
        REQUIRE(detect_cycle(s, max_steps) == naive_cycle(s, max_steps));
    }
}

TEST_CASE("cycle key distinguishes signed zero") {
    const std::vector<PendulumState> s{{Fix32{}, {}, {}, {}}, {Fix32::from_raw(0x8000'0000u), {}, {}, {}}};
    CHECK_FALSE(detect_cycle(s, 10).cycle_found);
}

TEST_CASE("digit chi-square") {
    const std::vector<OutputNumber> zeros(1000, OutputNumber(0));
    const ChiSquareReport z = digit_chi_square(zeros);
    for (const double x : z.per_position) CHECK(x == doctest::Approx(9000.0));

    std::vector<OutputNumber> uniform;
    for (std::uint64_t i = 0; i < 1000; ++i) uniform.emplace_back(i % 10 * 1111111111ull);
    const ChiSquareReport u = digit_chi_square(uniform);
    for (const double x : u.per_position) CHECK(x == 0.0);
    CHECK(u.pooled == 0.0);

    CHECK_THROWS_AS(digit_chi_square(std::vector<OutputNumber>(999, OutputNumber(1))), StatsError);
}

TEST_CASE("chi-square against a textbook formula") {
    std::mt19937_64 rng(63);
    std::vector<OutputNumber> v;
    for (int i = 0; i < 5000; ++i) v.emplace_back(rng() % OutputNumber::kLimit);
    const ChiSquareReport r = digit_chi_square(v);
    for (int pos = 0; pos < 10; ++pos) {
        std::array<double, 10> obs{};
        for (const auto x : v) {
            std::uint64_t y = x.value();
            for (int k = 9; k > pos; --k) y /= 10;
            obs[y % 10] += 1;
        }
        double chi = 0;
        for (const double o : obs) chi += (o - 500.0) * (o - 500.0) / 500.0;
        REQUIRE(r.per_position[pos] == doctest::Approx(chi).epsilon(1e-12));
    }
}

TEST_CASE("lag correlation") {
    std::vector<OutputNumber> ramp;
    for (std::uint64_t i = 0; i < 1000; ++i) ramp.emplace_back(i * 1000);
    CHECK(std::abs(lag_correlation(ramp, 1) - 1.0) < 1e-3);

    std::vector<OutputNumber> alt;
    for (int i = 0; i < 1000; ++i) alt.emplace_back(i % 2 == 0 ? 0 : 9999999999ull);
    CHECK(lag_correlation(alt, 1) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(lag_correlation(std::vector<OutputNumber>(50, OutputNumber(7)), 1), StatsError);
    CHECK_THROWS_AS(lag_correlation(numbers({1, 2}), 2), StatsError);
}

TEST_CASE("series export") {
    std::ostringstream none;
    write_series(none, numbers({1, 2, 3}), 0);
    CHECK(none.str() == "index,value\n");
    std::ostringstream three;
    write_series(three, numbers({7, 8, 9}), 3);
    CHECK(three.str() == "index,value\n0,0000000007\n1,0000000008\n2,0000000009\n");
    std::ostringstream sink;
    CHECK_THROWS_AS(write_series(sink, numbers({7, 8, 9}), 4), StatsError);
}

TEST_CASE("sharded analysis equals the single-threaded pass") {
    std::mt19937_64 rng(64);
    std::vector<OutputNumber> v;
    for (int i = 0; i < 100003; ++i) v.emplace_back(rng() % OutputNumber::kLimit);
    AnalysisOptions one;
    const Analysis base = analyze(v, one);
    for (const unsigned t : {2u, 3u, 8u, 13u}) {
        AnalysisOptions many;
        many.threads = t;
        REQUIRE(analyze(v, many) == base);
    }
    CHECK(base.histogram == histogram(v));
    CHECK(base.chi == digit_chi_square(v));
    REQUIRE(base.lag_r.has_value());
    CHECK(*base.lag_r == lag_correlation(v, 1));
}
