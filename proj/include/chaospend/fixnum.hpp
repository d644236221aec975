// SPDX-License-Identifier: Apache-2.0
//
// 32-bit sign-magnitude base-100 fixed point.
//
//   bit 31      sign (1 = negative)
//   bits 30:23  integer part, 0..255
//   bits 22:0   hundredths, 0..99 when normalized
//
// Every arithmetic entry point takes a Layer. Layer::hw evaluates the
// original HDL function bodies statement for statement, including their
// wrap-around and borrow anomalies. Layer::ref is exact 2-decimal
// sign-magnitude arithmetic with truncation toward zero.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chaospend {

enum class Layer : std::uint8_t { hw, ref };

std::string_view to_string(Layer layer);
Layer parse_layer(std::string_view text);

class Fix32 {
public:
    static constexpr std::uint32_t kSignBit = 0x8000'0000u;
    static constexpr std::uint32_t kIntMask = 0xFFu;
    static constexpr int kIntShift = 23;
    static constexpr std::uint32_t kFracMask = 0x7F'FFFFu;
    static constexpr std::int64_t kMaxHundredths = 25599;

    constexpr Fix32() = default;

    static constexpr Fix32 from_raw(std::uint32_t raw) { return Fix32{raw}; }

    // Throws std::out_of_range unless int_part <= 255 and hundredths <= 99.
    static Fix32 encode(bool negative, unsigned int_part, unsigned hundredths);

    // Normalized word for a signed hundredths count; zero encodes as +0.00.
    static Fix32 from_hundredths(std::int64_t value);

    // Parses "+33.73", "-0.5", "12". At most two decimals.
    static Fix32 parse(std::string_view text);

    constexpr std::uint32_t raw() const { return raw_; }
    constexpr bool negative() const { return (raw_ & kSignBit) != 0; }
    constexpr unsigned int_part() const { return (raw_ >> kIntShift) & kIntMask; }
    constexpr unsigned frac_part() const { return raw_ & kFracMask; }
    constexpr bool normalized() const { return frac_part() <= 99; }

    // (-1)^sign * (int_part*100 + frac_part). Total on all words, so a
    // transient frac_part of 100 decodes as one more whole unit.
    constexpr std::int64_t hundredths() const {
        const std::int64_t magnitude =
            static_cast<std::int64_t>(int_part()) * 100 + static_cast<std::int64_t>(frac_part());
        return negative() ? -magnitude : magnitude;
    }

    constexpr bool is_zero() const { return hundredths() == 0; }
    double to_double() const { return static_cast<double>(hundredths()) / 100.0; }

    // Signed two-decimal rendering of the decoded value, e.g. "-107.64".
    std::string to_string() const;

    friend constexpr bool operator==(Fix32, Fix32) = default;

private:
    constexpr explicit Fix32(std::uint32_t raw) : raw_(raw) {}

    std::uint32_t raw_ = 0;
};

enum class Fault : std::uint8_t { none, divide_by_zero, overflow, range_reduction };

std::string_view to_string(Fault fault);

class ArithmeticFault : public std::runtime_error {
public:
    ArithmeticFault(Fault fault, const std::string& what)
        : std::runtime_error(what), fault_(fault) {}

    Fault fault() const noexcept { return fault_; }

private:
    Fault fault_;
};

// Non-throwing result used by the sweeps, where faults are routine.
struct FixResult {
    Fix32 value;
    Fault fault = Fault::none;

    constexpr bool ok() const { return fault == Fault::none; }
    // Throws ArithmeticFault when fault != none.
    Fix32 get() const;
};

namespace constants {
inline constexpr Fix32 pi = Fix32::from_raw((3u << 23) | 14u);
inline constexpr Fix32 pi_2 = Fix32::from_raw((6u << 23) | 28u);
inline constexpr Fix32 const16 = Fix32::from_raw(16u << 23);
inline constexpr Fix32 const5 = Fix32::from_raw(5u << 23);
inline constexpr Fix32 const4 = Fix32::from_raw(4u << 23);
inline constexpr Fix32 const2 = Fix32::from_raw(2u << 23);
inline constexpr Fix32 const1 = Fix32::from_raw(1u << 23);
}  // namespace constants

namespace fixnum {

// Layer-independent sign manipulation (the HDL calls abs `mod`).
constexpr Fix32 abs(Fix32 a) { return Fix32::from_raw(a.raw() & ~Fix32::kSignBit); }
constexpr Fix32 neg(Fix32 a) { return Fix32::from_raw(a.raw() ^ Fix32::kSignBit); }

namespace hw {
Fix32 plus(Fix32 a, Fix32 b);
Fix32 minus(Fix32 a, Fix32 b);
Fix32 times(Fix32 a, Fix32 b);
FixResult divide(Fix32 a, Fix32 b);
}  // namespace hw

namespace ref {
FixResult plus(Fix32 a, Fix32 b);
FixResult minus(Fix32 a, Fix32 b);
FixResult times(Fix32 a, Fix32 b);
FixResult divide(Fix32 a, Fix32 b);
}  // namespace ref

FixResult try_plus(Layer layer, Fix32 a, Fix32 b);
FixResult try_minus(Layer layer, Fix32 a, Fix32 b);
FixResult try_times(Layer layer, Fix32 a, Fix32 b);
FixResult try_divide(Layer layer, Fix32 a, Fix32 b);
FixResult try_sin(Layer layer, Fix32 theta);
FixResult try_cos(Layer layer, Fix32 theta);

// Throwing forms; faults surface as ArithmeticFault.
Fix32 plus(Layer layer, Fix32 a, Fix32 b);
Fix32 minus(Layer layer, Fix32 a, Fix32 b);
Fix32 times(Layer layer, Fix32 a, Fix32 b);
Fix32 divide(Layer layer, Fix32 a, Fix32 b);
Fix32 sin(Layer layer, Fix32 theta);
Fix32 cos(Layer layer, Fix32 theta);

// True when the exact result of a+b or a*b (truncated to hundredths) does
// not fit the 8-bit integer field, i.e. when the hw layer would wrap.
bool plus_overflows(Fix32 a, Fix32 b);
bool times_overflows(Fix32 a, Fix32 b);

}  // namespace fixnum
}  // namespace chaospend
