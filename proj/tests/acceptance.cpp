// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run. One PASS/FAIL line per criterion; exits 1 if
// any line fails. Wall-clock budgets are part of each criterion.

#include "chaospend/census.hpp"
#include "chaospend/cli.hpp"
#include "chaospend/pendulum.hpp"
#include "chaospend/prng.hpp"
#include "chaospend/selftest.hpp"
#include "chaospend/sensorio.hpp"
#include "chaospend/stats.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace chaospend;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr double kGoldenBudget = 0.001;
constexpr double kOracleBudget = 30.0;
constexpr double kCensusBudget = 300.0;
constexpr double kTrigBudget = 1.0;
constexpr double kEquilibriumBudget = 1.0;
constexpr double kPeriodBudget = 60.0;
constexpr std::uint64_t kOraclePairs = 1'000'000;
constexpr std::uint64_t kPeriodOutputs = 1'048'575;
constexpr double kChiSquareLimit = 27.88;
constexpr double kLagLimit = 0.01;
constexpr int kEquilibriumTrials = 1000;
constexpr int kUartTrials = 100'000;

struct Line {
    std::string name;
    bool passed;
    double seconds;
    std::string detail;
};

std::vector<Line> lines;

void report(const std::string& name, bool passed, double seconds, const std::string& detail) {
    lines.push_back({name, passed, seconds, detail});
    std::cout << (passed ? "PASS " : "FAIL ") << name << " (" << seconds << " s): " << detail << std::endl;
}

template <typename F>
double timed(F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string budget_note(double seconds, double budget) {
    return seconds < budget ? "" : " [over budget " + std::to_string(budget) + " s]";
}

void from_selftest(const std::string& name, double budget, const std::function<selftest::Check()>& run) {
    selftest::Check c;
    const double s = timed([&] { c = run(); });
    report(name, c.passed && s < budget, s, c.detail + budget_note(s, budget));
}

void golden_vectors() {
    from_selftest("golden vectors", kGoldenBudget, [] { return selftest::check_golden_vectors(); });
}

void oracle_equivalence() {
    selftest::Check eq, dz;
    const double s = timed([&] {
        eq = selftest::check_oracle_equivalence(kOraclePairs, 0x5EED'0F0Bull);
        dz = selftest::check_divide_by_zero();
    });
    report("oracle equivalence", eq.passed && dz.passed && s < kOracleBudget, s,
           eq.detail + "; divide by zero: " + (dz.passed ? "signals" : dz.detail) + budget_note(s, kOracleBudget));
}

void quirk_census() {
    from_selftest("quirk census", kCensusBudget,
                  [] { return selftest::check_census(CHAOSPEND_CENSUS_PATH, census::kDefaultMaxInt); });
}

void trig_accuracy() {
    from_selftest("trig accuracy", kTrigBudget, [] { return selftest::check_trig_accuracy(); });
}

void equilibrium() {
    std::mt19937_64 rng(0xE0E0'0001ull);
    std::uniform_int_distribution<std::int64_t> param(1, 9999);
    std::uniform_int_distribution<std::int64_t> dt(1, 50);
    int zeros[2]{}, faults[2]{}, wrong[2]{};
    std::string first_wrong;
    const double s = timed([&] {
        for (int i = 0; i < kEquilibriumTrials; ++i) {
            const PendulumParams p{Fix32::from_hundredths(param(rng)), Fix32::from_hundredths(param(rng)),
                                   Fix32::from_hundredths(param(rng)), Fix32::from_hundredths(param(rng)),
                                   Fix32::from_hundredths(param(rng))};
            const Fix32 h = Fix32::from_hundredths(dt(rng));
            for (const Layer layer : {Layer::hw, Layer::ref}) {
                const int k = layer == Layer::hw ? 0 : 1;
                try {
                    const PendulumState out = pendulum::step(layer, p, PendulumState{}, h).state;
                    const bool all_zero = out.theta1.is_zero() && out.theta2.is_zero() && out.omega1.is_zero() &&
                                          out.omega2.is_zero();
                    if (all_zero) {
                        ++zeros[k];
                    } else {
                        ++wrong[k];
                        if (first_wrong.empty()) first_wrong = "; first nonzero: " + to_string(out);
                    }
                } catch (const StepError&) {
                    ++faults[k];
                }
            }
        }
    });
    std::ostringstream d;
    d << "hw " << zeros[0] << "/" << kEquilibriumTrials << " zero (" << faults[0] << " faults, " << wrong[0]
      << " nonzero); ref " << zeros[1] << "/" << kEquilibriumTrials << " zero (" << faults[1] << " faults, "
      << wrong[1] << " nonzero)" << first_wrong << budget_note(s, kEquilibriumBudget);
    const bool ok = zeros[0] == kEquilibriumTrials && zeros[1] == kEquilibriumTrials && s < kEquilibriumBudget;
    report("equilibrium fixed point", ok, s, d.str());
}

// The 2^20 default run feeds the period, statistics and sharding lines.
struct DefaultRun {
    std::vector<OutputNumber> numbers;
    bool halted = false;
};

DefaultRun period() {
    DefaultRun run;
    run.numbers.reserve(kPeriodOutputs);
    stats::CycleReport c;
    const GeneratorConfig config;
    const double s = timed([&] {
        Generator gen(kDefaultSeed, config);
        const auto next = [&]() -> std::optional<PendulumState> {
            try {
                run.numbers.push_back(gen.next());
            } catch (const GeneratorHalted&) {
                run.halted = true;
                return std::nullopt;
            }
            return gen.state();
        };
        c = stats::detect_cycle(next, kPeriodOutputs);
    });
    std::ostringstream d;
    d << "seed " << kDefaultSeed.to_hex() << ", layer " << to_string(config.layer) << ", dt "
      << config.dt.to_string() << ", warmup " << config.warmup_steps << ": " << c.to_record()
      << budget_note(s, kPeriodBudget);
    const bool ok = !c.cycle_found && c.steps_checked == kPeriodOutputs && !run.halted && s < kPeriodBudget;
    report("no repeat within 1,048,575 outputs", ok, s, d.str());
    return run;
}

void output_statistics(const DefaultRun& run) {
    if (run.numbers.size() != kPeriodOutputs) {
        report("output statistics", false, 0, "default run produced " + std::to_string(run.numbers.size()));
        return;
    }
    stats::Analysis a;
    stats::AnalysisOptions opt;
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    const double s = timed([&] { a = stats::analyze(run.numbers, opt); });
    double worst = 0;
    bool ok = a.lag_r.has_value();
    for (const double x : a.chi.per_position) {
        worst = std::max(worst, x);
        ok = ok && x < kChiSquareLimit;
    }
    ok = ok && std::fabs(*a.lag_r) < kLagLimit && a.histogram.empty_buckets() == 0;
    std::ostringstream d;
    d << "max digit chi2 " << worst << " (< " << kChiSquareLimit << "), lag-1 r " << (a.lag_r ? *a.lag_r : NAN)
      << " (|r| < " << kLagLimit << "), empty buckets " << a.histogram.empty_buckets() << "/100";
    report("output statistics", ok, s, d.str());
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void determinism(const DefaultRun& run) {
    bool ok = true;
    std::string detail;
    const double s = timed([&] {
        const fs::path dir = fs::temp_directory_path() / "chaospend_acceptance";
        fs::create_directories(dir);
        const fs::path first = dir / "first.csv", a = dir / "a.csv", b = dir / "b.csv";
        const std::string manifest = first.string() + ".manifest.json";
        std::ostringstream out, err;
        const int c0 = cli::run({"gen", "--seed-hex", kDefaultSeed.to_hex(), "-n", std::to_string(kPeriodOutputs), "-o",
                                 first.string()},
                                out, err);
        const int c1 = cli::run({"gen", "--replay", manifest, "-o", a.string()}, out, err);
        const int c2 = cli::run({"gen", "--replay", manifest, "-o", b.string()}, out, err);
        const std::string ta = slurp(a);
        const bool same = c0 == 0 && c1 == 0 && c2 == 0 && !ta.empty() && ta == slurp(b) && ta == slurp(first);
        ok = ok && same;
        detail = "two replays of one manifest: " + std::string(same ? "byte-identical" : "DIFFER: " + err.str()) +
                 " (" + std::to_string(ta.size()) + " bytes)";

        stats::AnalysisOptions one;
        const stats::Analysis base = stats::analyze(run.numbers, one);
        for (const unsigned t : {2u, 4u, 7u, 16u}) {
            stats::AnalysisOptions many;
            many.threads = t;
            if (!(stats::analyze(run.numbers, many) == base)) {
                ok = false;
                detail += "; sharded analyze differs at " + std::to_string(t) + " threads";
                return;
            }
        }
        detail += "; sharded analyze (2, 4, 7, 16 threads) equals single-threaded";
        fs::remove_all(dir);
    });
    report("determinism and replay", ok, s, detail);
}

void codecs() {
    std::string failure;
    std::uint64_t uart = 0;
    const double s = timed([&] {
        std::mt19937_64 rng(0xC0DEC0DEull);
        std::vector<std::uint64_t> words{0, ~0ull, 1, 1ull << 63, 0x0123456789ABCDEFull, 0x8000'0000'0000'0000ull,
                                         0x7FFF'FFFF'FFFF'FFFFull, 0x00FF'00FF'00FF'00FFull};
        for (int i = 0; i < kUartTrials; ++i) words.push_back(rng());
        for (const auto w : words) {
            ++uart;
            if (sensorio::uart_unchunk(sensorio::uart_chunk(Seed64{w})).payload != w) {
                failure = "uart round trip of " + Seed64{w}.to_hex();
                return;
            }
        }
        for (unsigned ch = 0; ch < 2; ++ch) {
            for (unsigned v = 0; v < 4096; ++v) {
                const sensorio::AdcSample in{sensorio::AdcSource::mcp3202_a, static_cast<std::uint8_t>(ch),
                                             static_cast<std::uint16_t>(v)};
                if (!(sensorio::decode_mcp3202(sensorio::encode_mcp3202(in)) == in)) {
                    failure = "mcp3202 channel " + std::to_string(ch) + " value " + std::to_string(v);
                    return;
                }
            }
        }
        const std::uint8_t frame[6]{0x80, 0x00, 0x7F, 0xFF, 0xFF, 0xFF};
        const sensorio::MagSample m = sensorio::decode_hmc_frame(frame);
        if (m.x != -32768 || m.z != 32767 || m.y != -1) failure = "hmc sign extension";
    });
    report("codec round trips", failure.empty(), s,
           failure.empty() ? std::to_string(uart) + " uart payloads, 8192 mcp3202 pairs, hmc 0x8000/0x7FFF/0xFFFF"
                           : failure);
}

}  // namespace

int main() {
    std::cout.precision(4);
    golden_vectors();
    oracle_equivalence();
    quirk_census();
    trig_accuracy();
    equilibrium();
    const DefaultRun run = period();
    output_statistics(run);
    determinism(run);
    codecs();

    std::size_t failed = 0;
    for (const auto& l : lines) failed += l.passed ? 0 : 1;
    std::cout << (failed == 0 ? "acceptance: all " + std::to_string(lines.size()) + " criteria passed"
                              : "acceptance: " + std::to_string(failed) + " of " + std::to_string(lines.size()) +
                                    " criteria FAILED")
              << std::endl;
    return failed == 0 ? 0 : 1;
}
