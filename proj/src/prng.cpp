// SPDX-License-Identifier: Apache-2.0

#include "chaospend/prng.hpp"

#include <charconv>
#include <cstdio>

namespace chaospend {

std::string Seed64::to_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llX", static_cast<unsigned long long>(payload));
    return buf;
}

Seed64 Seed64::parse_hex(std::string_view text) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    if (text.empty() || text.size() > 16) {
        throw std::invalid_argument("seed must be 1 to 16 hex digits");
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("seed is not hexadecimal: '" + std::string(text) + "'");
    }
    return Seed64{value};
}

OutputNumber::OutputNumber(std::uint64_t value) : value_(value) {
    if (value >= kLimit) throw std::out_of_range("output number exceeds ten digits");
}

std::string OutputNumber::digits() const {
    char buf[11];
    std::snprintf(buf, sizeof buf, "%010llu", static_cast<unsigned long long>(value_));
    return buf;
}

std::string_view to_string(ReseedPolicy policy) {
    return policy == ReseedPolicy::halt ? "halt" : "perturb";
}

ReseedPolicy parse_reseed_policy(std::string_view text) {
    if (text == "halt") return ReseedPolicy::halt;
    if (text == "perturb" || text == "perturb-counter") return ReseedPolicy::perturb_counter;
    throw std::invalid_argument("unknown reseed policy '" + std::string(text) + "' (expected halt or perturb)");
}

void GeneratorConfig::validate() const {
    if (steps_per_output < 1) throw std::invalid_argument("steps_per_output must be >= 1");
    if (dt.negative() || !dt.normalized() || dt.hundredths() < 1 || dt.hundredths() > 50) {
        throw std::invalid_argument("dt must lie in [+0.01, +0.50]");
    }
}

InitialConditions seed_to_initial(Seed64 seed) {
    const auto h = [](unsigned v) { return Fix32::from_hundredths(static_cast<std::int64_t>(v)); };
    InitialConditions ic;
    ic.params.m1 = h(100 + seed.mag() % 900u);
    ic.params.m2 = h(100 + seed.mic() % 900u);
    ic.params.l1 = h(50 + seed.light() % 150u);
    ic.params.l2 = h(50 + seed.temp_hum() % 150u);
    ic.params.g = h(981);
    ic.state.theta1 = h((seed.mag() ^ seed.light()) % 628u);
    ic.state.theta2 = h((seed.mic() ^ seed.temp_hum()) % 628u);
    ic.state.omega1 = Fix32{};
    ic.state.omega2 = Fix32{};
    return ic;
}

OutputNumber extract(const PendulumState& s) {
    // Digits come from the decoded magnitude so an hw word carrying a
    // transient fraction of 100 still yields two digits.
    std::uint64_t value = 0;
    std::uint64_t int_sum = 0;
    for (const Fix32 w : {s.theta1, s.theta2, s.omega1, s.omega2}) {
        const std::int64_t v = w.hundredths();
        const auto mag = static_cast<std::uint64_t>(v < 0 ? -v : v);
        value = value * 100 + mag % 100;
        int_sum += mag / 100;
    }
    return OutputNumber(value * 100 + int_sum % 100);
}

Generator::Generator(Seed64 seed, const GeneratorConfig& config) : config_(config) {
    config_.validate();
    const InitialConditions ic = seed_to_initial(seed);
    params_ = ic.params;
    state_ = ic.state;
    for (std::uint64_t i = 0; i < config_.warmup_steps; ++i) advance();
}

void Generator::advance() {
    const std::uint64_t index = step_index_++;
    try {
        const StepReport report = pendulum::step(config_.layer, params_, state_, config_.dt);
        state_ = report.state;
        if (report.any_wrap()) ++wrap_steps_;
    } catch (const StepError& e) {
        if (config_.reseed_policy == ReseedPolicy::halt) {
            throw GeneratorHalted(index, e.failure(),
                                  "generator halted at step " + std::to_string(index) + ": " + e.what());
        }
        // Fold the low 7 counter bits into frac(omega1), kept within 0..99.
        const std::uint32_t raw = state_.omega1.raw();
        const std::uint32_t frac = ((raw & Fix32::kFracMask) ^ static_cast<std::uint32_t>(index & 0x7F)) % 100;
        state_.omega1 = Fix32::from_raw((raw & ~Fix32::kFracMask) | frac);
        events_.push_back({index, e.failure()});
    }
}

OutputNumber Generator::next() {
    for (std::uint64_t i = 0; i < config_.steps_per_output; ++i) advance();
    return extract(state_);
}

std::vector<OutputNumber> generate(Seed64 seed, std::uint64_t n, const GeneratorConfig& config) {
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
    Generator gen(seed, config);
    std::vector<OutputNumber> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(gen.next());
    return out;
}

}  // namespace chaospend
