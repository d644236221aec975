// SPDX-License-Identifier: Apache-2.0

#include "chaospend/fixnum.hpp"

#include <charconv>
#include <cstdlib>

namespace chaospend {

namespace {

constexpr std::uint32_t kFrac = Fix32::kFracMask;  // 23-bit register slice
constexpr std::uint32_t kByte = 0xFFu;             // 8-bit register slice
constexpr std::uint32_t kWord31 = 0x7FFF'FFFFu;

constexpr Fix32 assemble(std::uint32_t sign, std::uint32_t int_part, std::uint32_t frac) {
    return Fix32::from_raw((sign << 31) | ((int_part & kByte) << 23) | (frac & kFrac));
}

constexpr std::int64_t magnitude(Fix32 a) {
    return static_cast<std::int64_t>(a.int_part()) * 100 + a.frac_part();
}

}  // namespace

std::string_view to_string(Layer layer) { return layer == Layer::hw ? "hw" : "ref"; }

Layer parse_layer(std::string_view text) {
    if (text == "hw" || text == "HW") return Layer::hw;
    if (text == "ref" || text == "REF") return Layer::ref;
    throw std::invalid_argument("unknown layer '" + std::string(text) + "' (expected hw or ref)");
}

std::string_view to_string(Fault fault) {
    switch (fault) {
        case Fault::none: return "none";
        case Fault::divide_by_zero: return "divide_by_zero";
        case Fault::overflow: return "overflow";
        case Fault::range_reduction: return "range_reduction";
    }
    return "unknown";
}

Fix32 Fix32::encode(bool negative, unsigned int_part, unsigned hundredths) {
    if (int_part > 255) throw std::out_of_range("integer part exceeds 255");
    if (hundredths > 99) throw std::out_of_range("hundredths exceed 99");
    return assemble(negative ? 1u : 0u, int_part, hundredths);
}

Fix32 Fix32::from_hundredths(std::int64_t value) {
    const std::int64_t mag = value < 0 ? -value : value;
    if (mag > kMaxHundredths) throw std::out_of_range("value does not fit in 8 integer bits");
    return assemble(value < 0 ? 1u : 0u, static_cast<std::uint32_t>(mag / 100),
                    static_cast<std::uint32_t>(mag % 100));
}

Fix32 Fix32::parse(std::string_view text) {
    const std::string original(text);
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    const std::string_view whole = text.substr(0, dot);
    std::string_view decimals = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || decimals.size() > 2 || (dot != std::string_view::npos && decimals.empty())) {
        throw std::invalid_argument("malformed fixed-point literal '" + original + "'");
    }
    unsigned int_part = 0;
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), int_part);
    if (ec != std::errc{} || ptr != whole.data() + whole.size()) {
        throw std::invalid_argument("malformed fixed-point literal '" + original + "'");
    }
    unsigned frac = 0;
    for (std::size_t i = 0; i < 2; ++i) {
        frac *= 10;
        if (i < decimals.size()) {
            const char c = decimals[i];
            if (c < '0' || c > '9') throw std::invalid_argument("malformed fixed-point literal '" + original + "'");
            frac += static_cast<unsigned>(c - '0');
        }
    }
    return encode(negative, int_part, frac);
}

std::string Fix32::to_string() const {
    const std::int64_t v = hundredths();
    const std::int64_t mag = v < 0 ? -v : v;
    std::string out = negative() ? "-" : "+";
    out += std::to_string(mag / 100);
    out += '.';
    out += static_cast<char>('0' + (mag % 100) / 10);
    out += static_cast<char>('0' + mag % 10);
    return out;
}

Fix32 FixResult::get() const {
    if (fault != Fault::none) {
        throw ArithmeticFault(fault, "fixed-point fault: " + std::string(chaospend::to_string(fault)));
    }
    return value;
}

namespace fixnum {

// ---------------------------------------------------------------------------
// hw layer. Each function mirrors the HDL body; masks reproduce the register
// slice widths (8-bit integer, 23-bit fraction, 31-bit flattened operand).

namespace hw {

Fix32 plus(Fix32 a, Fix32 b) {
    std::uint32_t ai = a.int_part();
    const std::uint32_t af = a.frac_part();
    std::uint32_t bi = b.int_part();
    const std::uint32_t bf = b.frac_part();
    const std::uint32_t key = (a.negative() ? 8u : 0u) | (b.negative() ? 4u : 0u) |
                              (!(ai >= bi) ? 2u : 0u) | (!(af >= bf) ? 1u : 0u);

    std::uint32_t sign = 0;
    std::uint32_t vi = 0;
    std::uint32_t vf = 0;

    // while (var[22:0] >= 100) { var[30:23] += 1; var[22:0] -= 100; }
    const auto carry_sum = [&] {
        vi = (ai + bi) & kByte;
        vf = (af + bf) & kFrac;
        vi = (vi + vf / 100) & kByte;
        vf %= 100;
    };

    switch (key) {
        case 0b0000:
        case 0b0001:
        case 0b0010:
        case 0b0011:
            sign = 0;
            carry_sum();
            break;
        case 0b0100:
            sign = 0;
            vi = (ai - bi) & kByte;
            vf = (af - bf) & kFrac;
            break;
        case 0b0101:
            sign = 0;
            if (ai == bi) {
                sign = 1;
                ai = (ai + 1) & kByte;
                vf = (bf - af) & kFrac;  // overwritten below, as in the listing
            }
            vi = (ai - bi - 1) & kByte;
            vf = (af + 100 - bf) & kFrac;
            break;
        case 0b0110:
            sign = 1;
            if (ai == bi) bi = (bi + 1) & kByte;
            vi = (bi - ai - 1) & kByte;
            vf = (100 + bf - af) & kFrac;
            break;
        case 0b0111:
            sign = 1;
            vi = (bi - ai) & kByte;
            vf = (bf - af) & kFrac;
            break;
        case 0b1000:
            sign = 1;
            vi = (ai - bi) & kByte;
            vf = (af - bf) & kFrac;
            break;
        case 0b1001:
            sign = 1;
            if (ai == bi) ai = (ai + 1) & kByte;
            vi = (ai - bi - 1) & kByte;
            vf = (100 + af - bf) & kFrac;
            break;
        case 0b1010:
            sign = 0;
            if (ai == bi) bi = (bi + 1) & kByte;
            vi = (bi - ai - 1) & kByte;
            vf = (100 + bf - af) & kFrac;
            break;
        case 0b1011:
            sign = 0;
            vi = (bi - ai) & kByte;
            vf = (bf - af) & kFrac;
            break;
        case 0b1100:
        case 0b1101:
        case 0b1110:
        case 0b1111:
            sign = 1;
            carry_sum();
            break;
        default:
            return Fix32::from_raw(100);
    }
    return assemble(sign, vi, vf);
}

Fix32 minus(Fix32 a, Fix32 b) { return plus(a, neg(b)); }

Fix32 times(Fix32 a, Fix32 b) {
    const std::uint32_t ai = a.int_part();
    const std::uint32_t af = a.frac_part();
    const std::uint32_t bi = b.int_part();
    const std::uint32_t bf = b.frac_part();

    const std::uint32_t whole_by_frac = (ai * bf) & kFrac;  // A * .b
    const std::uint32_t frac_by_whole = (bi * af) & kFrac;  // B * .a
    const std::uint32_t frac_by_frac = static_cast<std::uint32_t>(
        (static_cast<std::uint64_t>(af) * bf) & kFrac);     // .a * .b
    const std::uint32_t frac_carry = (frac_by_frac / 100) & kByte;
    const std::uint32_t dec = (whole_by_frac + frac_by_whole + frac_carry) & kFrac;
    const std::uint32_t int_carry = (dec / 100) & kByte;
    const std::uint32_t vi = (ai * bi + int_carry) & kByte;
    const std::uint32_t vf = dec - (dec / 100) * 100;
    const std::uint32_t sign = (a.negative() != b.negative()) ? 1u : 0u;
    return assemble(sign, vi, vf);
}

FixResult divide(Fix32 a, Fix32 b) {
    // a[30:0] = A[30:23]*100 + A[7:0]
    const std::uint32_t fa = (a.int_part() * 100 + (a.raw() & kByte)) & kWord31;
    const std::uint32_t fb = (b.int_part() * 100 + (b.raw() & kByte)) & kWord31;
    if (fb == 0) return {Fix32{}, Fault::divide_by_zero};

    const std::uint32_t key =
        (a.negative() ? 4u : 0u) | (b.negative() ? 2u : 0u) | (!(fa >= fb) ? 1u : 0u);

    const auto long_division = [&](std::uint32_t sign) {
        const std::uint32_t whole = (fa / fb) & kByte;
        const std::uint32_t rem = (fa - whole * fb) & kWord31;
        const std::uint32_t dec = (static_cast<std::uint32_t>(rem * 100u) / fb) & kFrac;
        return assemble(sign, whole, dec);
    };
    const auto fraction_only = [&](std::uint32_t sign) {
        const std::uint32_t dec = (static_cast<std::uint32_t>(fa * 100u) / fb) & kFrac;
        return assemble(sign, 0, dec);
    };

    switch (key) {
        case 0b000:
        case 0b110: return {long_division(0)};
        case 0b001:
        case 0b111: return {fraction_only(0)};
        case 0b011:
        case 0b101: return {fraction_only(1)};
        case 0b010:
        case 0b100: return {long_division(1)};
        default: return {Fix32::from_raw(100)};
    }
}

}  // namespace hw

// ---------------------------------------------------------------------------
// ref layer: exact hundredths arithmetic, truncation toward zero.

namespace ref {

namespace {

FixResult signed_result(bool negative, std::int64_t mag) {
    if (mag > Fix32::kMaxHundredths) return {Fix32{}, Fault::overflow};
    return {assemble(negative ? 1u : 0u, static_cast<std::uint32_t>(mag / 100),
                     static_cast<std::uint32_t>(mag % 100))};
}

}  // namespace

FixResult plus(Fix32 a, Fix32 b) {
    const std::int64_t sum = a.hundredths() + b.hundredths();
    return signed_result(sum < 0, sum < 0 ? -sum : sum);
}

FixResult minus(Fix32 a, Fix32 b) { return plus(a, neg(b)); }

FixResult times(Fix32 a, Fix32 b) {
    return signed_result(a.negative() != b.negative(), magnitude(a) * magnitude(b) / 100);
}

FixResult divide(Fix32 a, Fix32 b) {
    const std::int64_t den = magnitude(b);
    if (den == 0) return {Fix32{}, Fault::divide_by_zero};
    return signed_result(a.negative() != b.negative(), magnitude(a) * 100 / den);
}

}  // namespace ref

// ---------------------------------------------------------------------------

FixResult try_plus(Layer layer, Fix32 a, Fix32 b) {
    return layer == Layer::hw ? FixResult{hw::plus(a, b)} : ref::plus(a, b);
}

FixResult try_minus(Layer layer, Fix32 a, Fix32 b) {
    return layer == Layer::hw ? FixResult{hw::minus(a, b)} : ref::minus(a, b);
}

FixResult try_times(Layer layer, Fix32 a, Fix32 b) {
    return layer == Layer::hw ? FixResult{hw::times(a, b)} : ref::times(a, b);
}

FixResult try_divide(Layer layer, Fix32 a, Fix32 b) {
    return layer == Layer::hw ? hw::divide(a, b) : ref::divide(a, b);
}

namespace {

// Short-circuits the first fault so the sine body reads like the listing.
class Chain {
public:
    explicit Chain(Layer layer) : layer_(layer) {}

    Fix32 plus(Fix32 a, Fix32 b) { return take(try_plus(layer_, a, b)); }
    Fix32 minus(Fix32 a, Fix32 b) { return take(try_minus(layer_, a, b)); }
    Fix32 times(Fix32 a, Fix32 b) { return take(try_times(layer_, a, b)); }
    Fix32 divide(Fix32 a, Fix32 b) { return take(try_divide(layer_, a, b)); }

    Layer layer() const { return layer_; }
    Fault fault() const { return fault_; }
    void fail(Fault f) {
        if (fault_ == Fault::none) fault_ = f;
    }

private:
    Fix32 take(FixResult r) {
        fail(r.fault);
        return r.value;
    }

    Layer layer_;
    Fault fault_ = Fault::none;
};

// Integer part of theta / 2pi, sign and fraction cleared.
Fix32 whole_turns(Chain& c, Fix32 theta) {
    const Fix32 store = c.divide(theta, constants::pi_2);
    return Fix32::from_raw(store.raw() & (Fix32::kIntMask << Fix32::kIntShift));
}

}  // namespace

FixResult try_sin(Layer layer, Fix32 theta) {
    using namespace constants;
    Chain c(layer);

    const Fix32 store = c.divide(theta, pi_2);
    const bool past_turn = store.int_part() >= 1;
    if (!theta.negative() && past_turn) {
        theta = c.minus(theta, c.times(whole_turns(c, theta), pi_2));
    } else if (theta.negative() && !past_turn) {
        theta = c.minus(pi_2, abs(theta));
    } else if (theta.negative() && past_turn) {
        theta = c.plus(theta, c.times(c.plus(const1, whole_turns(c, theta)), pi_2));
    }
    if (c.fault() != Fault::none) return {Fix32{}, c.fault()};

    // Branches compare raw words as unsigned, like the listing.
    Fix32 y;
    if (theta.raw() <= pi.raw()) {
        // y = 16x(pi-x) / (5pi^2 - 4x(pi-x))
        const Fix32 num = c.times(c.times(const16, theta), c.minus(pi, theta));
        const Fix32 five_pi_sq = c.times(c.times(pi, pi), const5);
        const Fix32 quad = c.times(c.times(const4, theta), c.minus(pi, theta));
        // The listing subtracts these two with a raw 32-bit '-', not minus().
        const Fix32 den = layer == Layer::hw ? Fix32::from_raw(five_pi_sq.raw() - quad.raw())
                                             : c.minus(five_pi_sq, quad);
        y = c.divide(num, den);
    } else if (theta.raw() <= pi_2.raw()) {
        // y = -16(x-2pi)(pi-x) / (5pi^2 - 4(x-2pi)(pi-x))
        const Fix32 num = c.times(c.times(neg(const16), c.minus(theta, pi_2)), c.minus(pi, theta));
        const Fix32 den = c.minus(c.times(c.times(pi, pi), const5),
                                  c.times(c.times(const4, c.minus(theta, pi_2)), c.minus(pi, theta)));
        y = c.divide(num, den);
    } else {
        // Neither branch assigns the result register. The hw layer models
        // that register as +0.00 and reports the miss alongside it.
        return {Fix32{}, Fault::range_reduction};
    }
    if (c.fault() != Fault::none) return {Fix32{}, c.fault()};
    return {y};
}

FixResult try_cos(Layer layer, Fix32 theta) {
    const FixResult half_pi = try_divide(layer, constants::pi, constants::const2);
    if (!half_pi.ok()) return half_pi;
    const FixResult arg = try_minus(layer, half_pi.value, theta);
    if (!arg.ok()) return arg;
    return try_sin(layer, arg.value);
}

Fix32 plus(Layer layer, Fix32 a, Fix32 b) { return try_plus(layer, a, b).get(); }
Fix32 minus(Layer layer, Fix32 a, Fix32 b) { return try_minus(layer, a, b).get(); }
Fix32 times(Layer layer, Fix32 a, Fix32 b) { return try_times(layer, a, b).get(); }
Fix32 divide(Layer layer, Fix32 a, Fix32 b) { return try_divide(layer, a, b).get(); }
Fix32 sin(Layer layer, Fix32 theta) { return try_sin(layer, theta).get(); }
Fix32 cos(Layer layer, Fix32 theta) { return try_cos(layer, theta).get(); }

bool plus_overflows(Fix32 a, Fix32 b) {
    return std::llabs(a.hundredths() + b.hundredths()) > Fix32::kMaxHundredths;
}

bool times_overflows(Fix32 a, Fix32 b) {
    return magnitude(a) * magnitude(b) / 100 > Fix32::kMaxHundredths;
}

}  // namespace fixnum
}  // namespace chaospend
