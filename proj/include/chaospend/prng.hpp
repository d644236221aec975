// SPDX-License-Identifier: Apache-2.0
//
// Seed -> pendulum -> 10-digit number pipeline.

#pragma once

#include "chaospend/fixnum.hpp"
#include "chaospend/pendulum.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chaospend {

// 64-bit sensor seed. Views high to low: magnetic, microphone, light,
// temperature/humidity.
struct Seed64 {
    std::uint64_t payload = 0;

    constexpr std::uint16_t mag() const { return static_cast<std::uint16_t>(payload >> 48); }
    constexpr std::uint16_t mic() const { return static_cast<std::uint16_t>(payload >> 32); }
    constexpr std::uint16_t light() const { return static_cast<std::uint16_t>(payload >> 16); }
    constexpr std::uint16_t temp_hum() const { return static_cast<std::uint16_t>(payload); }

    static constexpr Seed64 from_fields(std::uint16_t mag, std::uint16_t mic, std::uint16_t light,
                                        std::uint16_t temp_hum) {
        return Seed64{(std::uint64_t{mag} << 48) | (std::uint64_t{mic} << 32) |
                      (std::uint64_t{light} << 16) | std::uint64_t{temp_hum}};
    }

    // 16 upper-case hex digits, most significant first.
    std::string to_hex() const;
    // Accepts 1..16 hex digits, optional 0x prefix.
    static Seed64 parse_hex(std::string_view text);

    friend constexpr bool operator==(Seed64, Seed64) = default;
};

inline constexpr Seed64 kDefaultSeed{0x0123'4567'89AB'CDEFull};

class OutputNumber {
public:
    static constexpr std::uint64_t kLimit = 10'000'000'000ull;

    constexpr OutputNumber() = default;
    // Throws std::out_of_range for values >= 10^10.
    explicit OutputNumber(std::uint64_t value);

    constexpr std::uint64_t value() const { return value_; }
    // Exactly ten digits, zero padded.
    std::string digits() const;

    friend constexpr auto operator<=>(OutputNumber, OutputNumber) = default;

private:
    std::uint64_t value_ = 0;
};

enum class ReseedPolicy : std::uint8_t { halt, perturb_counter };

std::string_view to_string(ReseedPolicy policy);
ReseedPolicy parse_reseed_policy(std::string_view text);

struct GeneratorConfig {
    Layer layer = Layer::hw;
    Fix32 dt = pendulum::kDefaultDt;
    std::uint64_t warmup_steps = 100;
    std::uint64_t steps_per_output = 1;
    ReseedPolicy reseed_policy = ReseedPolicy::perturb_counter;

    // Throws std::invalid_argument on steps_per_output == 0 or bad dt.
    void validate() const;
};

struct InitialConditions {
    PendulumParams params;
    PendulumState state;
};

InitialConditions seed_to_initial(Seed64 seed);

OutputNumber extract(const PendulumState& s);

// A step that hit a StepError and was handled by the reseed policy.
struct ReseedEvent {
    std::uint64_t step_index;
    StepFailure failure;
};

class GeneratorHalted : public std::runtime_error {
public:
    GeneratorHalted(std::uint64_t step_index, StepFailure failure, const std::string& what)
        : std::runtime_error(what), step_index_(step_index), failure_(failure) {}

    std::uint64_t step_index() const noexcept { return step_index_; }
    StepFailure failure() const noexcept { return failure_; }

private:
    std::uint64_t step_index_;
    StepFailure failure_;
};

// Sequential state machine; one logical owner. Steps are numbered from 0
// across warm-up and emission.
class Generator {
public:
    Generator(Seed64 seed, const GeneratorConfig& config);

    OutputNumber next();

    const PendulumState& state() const { return state_; }
    const PendulumParams& params() const { return params_; }
    std::uint64_t steps_taken() const { return step_index_; }
    const std::vector<ReseedEvent>& events() const { return events_; }
    std::uint64_t wrap_steps() const { return wrap_steps_; }

private:
    void advance();

    GeneratorConfig config_;
    PendulumParams params_;
    PendulumState state_;
    std::uint64_t step_index_ = 0;
    std::uint64_t wrap_steps_ = 0;
    std::vector<ReseedEvent> events_;
};

std::vector<OutputNumber> generate(Seed64 seed, std::uint64_t n, const GeneratorConfig& config);

}  // namespace chaospend
