// SPDX-License-Identifier: Apache-2.0

#include "chaospend/pendulum.hpp"

#include <ostream>

namespace chaospend {

namespace {

using constants::const2;

StepFailure failure_for(Fault fault) {
    switch (fault) {
        case Fault::divide_by_zero: return StepFailure::divide_by_zero;
        case Fault::overflow: return StepFailure::overflow;
        case Fault::range_reduction: return StepFailure::range_reduction;
        case Fault::none: break;
    }
    return StepFailure::divide_by_zero;
}

// Layer-bound operator set; any fault becomes a StepError for `state`.
class Ops {
public:
    Ops(Layer layer, const PendulumState& state, std::uint32_t* unassigned_sines = nullptr)
        : layer_(layer), state_(state), unassigned_sines_(unassigned_sines) {}

    Fix32 plus(Fix32 a, Fix32 b) const { return take(fixnum::try_plus(layer_, a, b)); }
    Fix32 minus(Fix32 a, Fix32 b) const { return take(fixnum::try_minus(layer_, a, b)); }
    Fix32 times(Fix32 a, Fix32 b) const { return take(fixnum::try_times(layer_, a, b)); }
    Fix32 sin(Fix32 a) const { return take_trig(fixnum::try_sin(layer_, a)); }
    Fix32 cos(Fix32 a) const { return take_trig(fixnum::try_cos(layer_, a)); }
    static Fix32 neg(Fix32 a) { return fixnum::neg(a); }

    Fix32 divide_by_denominator(Fix32 num, Fix32 den) const {
        if (den.is_zero()) {
            throw StepError(StepFailure::degenerate_denominator, state_,
                            "degenerate denominator at state " + to_string(state_));
        }
        return take(fixnum::try_divide(layer_, num, den));
    }

private:
    // In the hw layer a missed sine branch yields the modeled register
    // value; it is counted, not raised.
    Fix32 take_trig(FixResult r) const {
        if (layer_ == Layer::hw && r.fault == Fault::range_reduction) {
            if (unassigned_sines_ != nullptr) ++*unassigned_sines_;
            return r.value;
        }
        return take(r);
    }

    Fix32 take(FixResult r) const {
        if (!r.ok()) {
            throw StepError(failure_for(r.fault), state_,
                            std::string("arithmetic fault (") + std::string(to_string(r.fault)) +
                                ") at state " + to_string(state_));
        }
        return r.value;
    }

    Layer layer_;
    const PendulumState& state_;
    std::uint32_t* unassigned_sines_;
};

// Subterms shared by both accelerations.
struct Shared {
    Fix32 s12;   // sin(t1 - t2)
    Fix32 c12;   // cos(t1 - t2)
    Fix32 c2d;   // cos(2 (t1 - t2))
    Fix32 mass;  // 2 m1 + m2
};

Shared shared_terms(const Ops& op, const PendulumParams& p, const PendulumState& s) {
    const Fix32 d = op.minus(s.theta1, s.theta2);
    return {op.sin(d), op.cos(d), op.cos(op.times(const2, d)), op.plus(op.times(const2, p.m1), p.m2)};
}

Fix32 denominator(const Ops& op, const PendulumParams& p, const Shared& t, Fix32 length) {
    return op.times(length, op.minus(t.mass, op.times(p.m2, t.c2d)));
}

Fix32 alpha1_with(const Ops& op, const PendulumParams& p, const PendulumState& s, const Shared& t) {
    const Fix32 gravity = op.neg(op.times(op.times(p.g, t.mass), op.sin(s.theta1)));
    const Fix32 coupling =
        op.times(p.m2, op.times(p.g, op.sin(op.minus(s.theta1, op.times(const2, s.theta2)))));
    const Fix32 spin = op.times(
        op.times(op.times(const2, t.s12), p.m2),
        op.plus(op.times(op.times(s.omega2, s.omega2), p.l2),
                op.times(op.times(op.times(s.omega1, s.omega1), p.l1), t.c12)));
    const Fix32 num = op.minus(op.minus(gravity, coupling), spin);
    return op.divide_by_denominator(num, denominator(op, p, t, p.l1));
}

Fix32 alpha2_with(const Ops& op, const PendulumParams& p, const PendulumState& s, const Shared& t) {
    const Fix32 total = op.plus(p.m1, p.m2);
    const Fix32 bracket =
        op.plus(op.plus(op.times(op.times(op.times(s.omega1, s.omega1), p.l1), total),
                        op.times(op.times(p.g, total), op.cos(s.theta1))),
                op.times(op.times(op.times(s.omega2, s.omega2), p.l2), op.times(p.m2, t.c12)));
    const Fix32 num = op.times(op.times(const2, t.s12), bracket);
    return op.divide_by_denominator(num, denominator(op, p, t, p.l2));
}

}  // namespace

bool PendulumParams::valid() const {
    for (const Fix32 v : {m1, m2, l1, l2, g}) {
        if (v.negative() || !v.normalized() || v.hundredths() < 1 || v.hundredths() > 9999) return false;
    }
    return true;
}

std::string to_string(const PendulumState& s) {
    return "(" + s.theta1.to_string() + ", " + s.theta2.to_string() + ", " + s.omega1.to_string() + ", " +
           s.omega2.to_string() + ")";
}

std::string_view to_string(StepFailure failure) {
    switch (failure) {
        case StepFailure::degenerate_denominator: return "degenerate_denominator";
        case StepFailure::divide_by_zero: return "divide_by_zero";
        case StepFailure::overflow: return "overflow";
        case StepFailure::range_reduction: return "range_reduction";
    }
    return "unknown";
}

namespace pendulum {

Fix32 alpha1(Layer layer, const PendulumParams& p, const PendulumState& s) {
    const Ops op(layer, s);
    return alpha1_with(op, p, s, shared_terms(op, p, s));
}

Fix32 alpha2(Layer layer, const PendulumParams& p, const PendulumState& s) {
    const Ops op(layer, s);
    return alpha2_with(op, p, s, shared_terms(op, p, s));
}

StepReport step(Layer layer, const PendulumParams& p, const PendulumState& s, Fix32 dt) {
    if (dt.negative() || !dt.normalized() || dt.hundredths() > 50) {
        throw std::invalid_argument("dt must lie in [+0.01, +0.50], got " + dt.to_string());
    }
    StepReport report;
    const Ops op(layer, s, &report.unassigned_sines);
    const Shared t = shared_terms(op, p, s);
    const Fix32 a1 = alpha1_with(op, p, s, t);
    const Fix32 a2 = alpha2_with(op, p, s, t);

    const auto integrate = [&](Fix32 value, Fix32 rate, int bit) {
        const Fix32 delta = op.times(rate, dt);
        if (fixnum::times_overflows(rate, dt) || fixnum::plus_overflows(value, delta)) {
            report.wrapped |= static_cast<std::uint8_t>(1u << bit);
        }
        return op.plus(value, delta);
    };
    report.state.omega1 = integrate(s.omega1, a1, 0);
    report.state.omega2 = integrate(s.omega2, a2, 1);
    report.state.theta1 = integrate(s.theta1, report.state.omega1, 2);
    report.state.theta2 = integrate(s.theta2, report.state.omega2, 3);
    return report;
}

void write_trajectory_header(std::ostream& out) { out << "step,theta1,theta2,omega1,omega2\n"; }

void write_trajectory_row(std::ostream& out, std::uint64_t step, const PendulumState& s) {
    out << step << ',' << s.theta1.to_string() << ',' << s.theta2.to_string() << ','
        << s.omega1.to_string() << ',' << s.omega2.to_string() << '\n';
}

}  // namespace pendulum
}  // namespace chaospend
