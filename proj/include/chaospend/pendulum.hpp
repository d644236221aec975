// SPDX-License-Identifier: Apache-2.0
//
// Double-pendulum accelerations built from fixnum operations in a fixed
// evaluation order, and a semi-implicit Euler stepper. Truncating
// arithmetic is not associative, so the expression trees in pendulum.cpp
// are part of the contract.

#pragma once

#include "chaospend/fixnum.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace chaospend {

struct PendulumParams {
    Fix32 m1;
    Fix32 m2;
    Fix32 l1;
    Fix32 l2;
    Fix32 g;

    // All five strictly positive and within [0.01, 99.99].
    bool valid() const;

    friend bool operator==(const PendulumParams&, const PendulumParams&) = default;
};

struct PendulumState {
    Fix32 theta1;
    Fix32 theta2;
    Fix32 omega1;
    Fix32 omega2;

    friend bool operator==(const PendulumState&, const PendulumState&) = default;
};

std::string to_string(const PendulumState& s);

enum class StepFailure : std::uint8_t { degenerate_denominator, divide_by_zero, overflow, range_reduction };

std::string_view to_string(StepFailure failure);

// Raised by alpha1/alpha2/step. Carries the state the step started from.
class StepError : public std::runtime_error {
public:
    StepError(StepFailure failure, const PendulumState& state, const std::string& what)
        : std::runtime_error(what), failure_(failure), state_(state) {}

    StepFailure failure() const noexcept { return failure_; }
    const PendulumState& state() const noexcept { return state_; }

private:
    StepFailure failure_;
    PendulumState state_;
};

struct StepReport {
    PendulumState state;
    // Integrator updates (omega += alpha*dt, theta += omega*dt) whose exact
    // result left the 8-bit integer range. Bit 0..3: omega1, omega2,
    // theta1, theta2 (either the product or the sum wrapped).
    std::uint8_t wrapped = 0;
    // hw layer only: sine/cosine evaluations whose range reduction left the
    // angle outside both branches, so the result register kept its +0.00.
    std::uint32_t unassigned_sines = 0;

    bool any_wrap() const { return wrapped != 0; }
};

namespace pendulum {

inline constexpr Fix32 kDefaultDt = Fix32::from_raw(20);  // +0.20

Fix32 alpha1(Layer layer, const PendulumParams& p, const PendulumState& s);
Fix32 alpha2(Layer layer, const PendulumParams& p, const PendulumState& s);

// Semi-implicit Euler. dt must lie in [+0.01, +0.50] (or be +0.00, which
// leaves the state unchanged); otherwise std::invalid_argument.
StepReport step(Layer layer, const PendulumParams& p, const PendulumState& s, Fix32 dt);

// CSV trajectory dump: header then `step,theta1,theta2,omega1,omega2`.
void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, std::uint64_t step, const PendulumState& s);

}  // namespace pendulum
}  // namespace chaospend
