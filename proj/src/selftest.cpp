// SPDX-License-Identifier: Apache-2.0

#include "chaospend/selftest.hpp"

#include "chaospend/census.hpp"
#include "chaospend/fixnum.hpp"
#include "chaospend/refcalc.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>

namespace chaospend::selftest {

namespace {

using refcalc::ExactHundredths;

constexpr std::int64_t kMax = Fix32::kMaxHundredths;

std::string describe(std::string_view op, Fix32 a, Fix32 b) {
    return std::string(op) + "(" + a.to_string() + ", " + b.to_string() + ")";
}

Fix32 random_fix(std::mt19937_64& rng, std::int64_t lo_mag, std::int64_t hi_mag) {
    std::uniform_int_distribution<std::int64_t> mag(lo_mag, hi_mag);
    std::bernoulli_distribution negative(0.5);
    const std::int64_t m = mag(rng);
    return Fix32::from_raw((negative(rng) ? Fix32::kSignBit : 0u) |
                           static_cast<std::uint32_t>((m / 100) << Fix32::kIntShift) |
                           static_cast<std::uint32_t>(m % 100));
}

ExactHundredths exact(Fix32 v) { return ExactHundredths(v.hundredths()); }

}  // namespace

Check check_golden_vectors() {
    Check c{"golden vectors", true, ""};
    std::ostringstream fail;
    const auto expect = [&](bool ok, const std::string& what) {
        if (!ok && c.passed) {
            c.passed = false;
            fail << what;
        }
    };
    const Fix32 a = Fix32::encode(false, 33, 73);
    expect(a.raw() == 0x1080'0049u, "encode(+33.73) bit layout");
    expect(a.hundredths() == 3373, "decode(+33.73)");
    const Fix32 b = Fix32::encode(true, 21, 84);
    for (const Layer layer : {Layer::hw, Layer::ref}) {
        const Fix32 sum = fixnum::plus(layer, a, b);
        expect(sum == Fix32::encode(false, 11, 89),
               std::string(to_string(layer)) + " plus(+33.73, -21.84) = " + sum.to_string());
        const Fix32 prod = fixnum::times(layer, Fix32::encode(false, 13, 73), Fix32::encode(true, 7, 84));
        expect(prod == Fix32::encode(true, 107, 64),
               std::string(to_string(layer)) + " times(+13.73, -7.84) = " + prod.to_string());
    }
    c.detail = c.passed ? "bit map, plus and times golden values hold in both layers" : fail.str();
    return c;
}

Check check_oracle_equivalence(std::uint64_t pairs_per_op, std::uint64_t rng_seed) {
    Check c{"ref layer vs exact oracle", true, ""};
    std::mt19937_64 rng(rng_seed);
    std::uint64_t checked = 0;

    const auto verify = [&](std::string_view op, Fix32 a, Fix32 b, FixResult got, const ExactHundredths& want) {
        ++checked;
        if (!c.passed) return;
        if (!got.ok() || !got.value.normalized() || ExactHundredths(got.value.hundredths()) != want) {
            c.passed = false;
            c.detail = describe(op, a, b) + ": ref gave " + (got.ok() ? got.value.to_string() : "fault") +
                       ", oracle " + want.str() + " hundredths";
        }
    };

    for (std::uint64_t i = 0; i < pairs_per_op && c.passed; ++i) {
        Fix32 a = random_fix(rng, 0, kMax);
        Fix32 b = random_fix(rng, 0, kMax);
        while (std::llabs(a.hundredths() + b.hundredths()) > kMax) b = random_fix(rng, 0, kMax);
        verify("plus", a, b, fixnum::try_plus(Layer::ref, a, b), refcalc::r_add(exact(a), exact(b)));
    }
    for (std::uint64_t i = 0; i < pairs_per_op && c.passed; ++i) {
        Fix32 a = random_fix(rng, 0, kMax);
        Fix32 b = random_fix(rng, 0, kMax);
        while (std::llabs(a.hundredths() - b.hundredths()) > kMax) b = random_fix(rng, 0, kMax);
        verify("minus", a, b, fixnum::try_minus(Layer::ref, a, b), refcalc::r_sub(exact(a), exact(b)));
    }
    for (std::uint64_t i = 0; i < pairs_per_op && c.passed; ++i) {
        const Fix32 a = random_fix(rng, 0, kMax);
        const std::int64_t am = std::llabs(a.hundredths());
        // trunc(|a||b|/100) <= kMax  <=>  |a||b| < (kMax + 1) * 100
        const std::int64_t bound = am == 0 ? kMax : std::min(kMax, ((kMax + 1) * 100 - 1) / am);
        const Fix32 b = random_fix(rng, 0, bound);
        verify("times", a, b, fixnum::try_times(Layer::ref, a, b), refcalc::r_mul_trunc(exact(a), exact(b)));
    }
    for (std::uint64_t i = 0; i < pairs_per_op && c.passed; ++i) {
        const Fix32 a = random_fix(rng, 0, kMax);
        // trunc(100|a|/|b|) <= kMax  <=>  |b| > 100|a| / (kMax + 1)
        const std::int64_t lo = std::max<std::int64_t>(1, std::llabs(a.hundredths()) * 100 / (kMax + 1) + 1);
        const Fix32 b = random_fix(rng, lo, kMax);
        verify("divide", a, b, fixnum::try_divide(Layer::ref, a, b), refcalc::r_div_trunc(exact(a), exact(b)));
    }
    if (c.passed) c.detail = std::to_string(checked) + " pairs, 100% value agreement";
    return c;
}

Check check_divide_by_zero() {
    Check c{"divide by zero signals", true, "both layers, +0.00 and -0.00 divisors"};
    const Fix32 zeros[] = {Fix32{}, fixnum::neg(Fix32{})};
    for (const Layer layer : {Layer::hw, Layer::ref}) {
        for (std::int64_t v = -25599; v <= 25599; v += 97) {
            for (const Fix32 z : zeros) {
                const FixResult r = fixnum::try_divide(layer, Fix32::from_hundredths(v), z);
                if (r.fault != Fault::divide_by_zero) {
                    c.passed = false;
                    c.detail = std::string(to_string(layer)) + " " +
                               describe("divide", Fix32::from_hundredths(v), z) + " did not signal";
                    return c;
                }
            }
        }
    }
    return c;
}

Check check_census(const std::filesystem::path& committed, unsigned max_int) {
    Check c{"quirk census", true, ""};
    census::Comparison cmp;
    try {
        cmp = census::compare_census(committed, max_int);
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
        return c;
    }
    if (cmp.mismatch) {
        c.passed = false;
        std::string where = "line " + std::to_string(cmp.mismatch->line) + ": committed '" +
                            cmp.mismatch->expected + "' vs regenerated '" + cmp.mismatch->actual + "'";
        const std::string& named = cmp.mismatch->expected.empty() ? cmp.mismatch->actual : cmp.mismatch->expected;
        if (const auto row = census::parse_row(named)) {
            where += " [" + describe(census::to_string(row->op), row->a, row->b) + "]";
        }
        c.detail = where;
        return c;
    }
    if (cmp.summary.unexplained() != 0) {
        c.passed = false;
        c.detail = std::to_string(cmp.summary.unexplained()) + " divergences outside the anomaly families";
        return c;
    }
    c.detail = std::to_string(cmp.rows_compared) + " rows identical (integer parts 0.." + std::to_string(max_int) +
               "), all in documented families";
    return c;
}

Check check_trig_accuracy() {
    Check c{"trig accuracy", true, ""};
    double worst = 0.0;
    for (std::int64_t t = 0; t <= 628 && c.passed; ++t) {
        const Fix32 theta = Fix32::from_hundredths(t);
        const Fix32 s = fixnum::sin(Layer::ref, theta);
        const Fix32 co = fixnum::cos(Layer::ref, theta);
        const double es = std::fabs(s.to_double() - refcalc::r_sin(t));
        const double ec = std::fabs(co.to_double() - refcalc::r_cos(t));
        worst = std::max({worst, es, ec});
        if (es > 0.05 || ec > 0.05 || std::llabs(s.hundredths()) > 101 || std::llabs(co.hundredths()) > 101) {
            c.passed = false;
            c.detail = "theta " + theta.to_string() + ": sin " + s.to_string() + ", cos " + co.to_string();
        }
    }
    if (c.passed) {
        const Fix32 s1 = fixnum::sin(Layer::ref, Fix32::encode(false, 1, 57));
        const Fix32 s2 = fixnum::sin(Layer::ref, Fix32::encode(false, 4, 71));
        if (s1.hundredths() != 100 || s2.hundredths() != -100) {
            c.passed = false;
            c.detail = "sin(+1.57) = " + s1.to_string() + ", sin(+4.71) = " + s2.to_string();
        } else {
            c.detail = "max |error| " + std::to_string(worst) + " over 0.00..6.28";
        }
    }
    return c;
}

std::vector<Check> run(const Options& options, std::ostream& log) {
    const std::uint64_t pairs = options.quick ? 10'000 : options.oracle_pairs;
    const unsigned census_ints = options.quick ? 3 : census::kDefaultMaxInt;
    std::vector<Check> checks;
    const auto timed = [&](auto&& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c = fn();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        log << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << secs << " s): " << c.detail << '\n';
        checks.push_back(std::move(c));
    };
    timed([] { return check_golden_vectors(); });
    timed([&] { return check_oracle_equivalence(pairs, options.rng_seed); });
    timed([] { return check_divide_by_zero(); });
    timed([&] { return check_census(options.census_path, census_ints); });
    timed([] { return check_trig_accuracy(); });
    return checks;
}

}  // namespace chaospend::selftest
