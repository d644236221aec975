// SPDX-License-Identifier: Apache-2.0
//
// Quirk census: exhaustive hw-vs-ref differential sweep over
// sign x integer 0..max_int x hundredths 0..99 operand pairs for plus,
// minus, times and divide. A row is written for every pair where the two
// layers decode to different values. Pairs where the ref layer faults
// (overflow, division by zero) are outside its exactness contract and are
// only counted.
//
// CSV: op,a_raw_hex,b_raw_hex,hw_raw_hex,ref_raw_hex (8 upper-case hex
// digits, no prefix). Paths ending in .gz are read and written gzipped.

#pragma once

#include "chaospend/fixnum.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace chaospend::census {

enum class Op : std::uint8_t { plus, minus, times, divide };

inline constexpr std::array<Op, 4> kOps{Op::plus, Op::minus, Op::times, Op::divide};

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view text);

inline constexpr unsigned kDefaultMaxInt = 40;
inline constexpr std::string_view kHeader = "op,a_raw_hex,b_raw_hex,hw_raw_hex,ref_raw_hex";

struct Row {
    Op op;
    Fix32 a;
    Fix32 b;
    Fix32 hw;
    Fix32 ref;

    friend bool operator==(const Row&, const Row&) = default;
};

std::string format_row(const Row& row);
std::optional<Row> parse_row(std::string_view line);

enum class Family : std::uint8_t {
    equal_integer_mixed_sign,  // plus operands of opposite sign, equal integer parts, |a| frac < |b| frac
    fraction_borrow,           // hw result carries a fraction field of 100
    unexplained,
};

std::string_view to_string(Family family);

Family classify(const Row& row);

struct OpSummary {
    std::uint64_t pairs = 0;
    std::uint64_t divergences = 0;
    std::uint64_t ref_faults = 0;
    std::uint64_t unexplained = 0;
};

struct Summary {
    std::array<OpSummary, 4> ops{};

    std::uint64_t divergences() const;
    std::uint64_t unexplained() const;
};

// Operand order: sign 0 then 1, integer 0..max_int, hundredths 0..99; a
// outer, b inner; ops in kOps order.
Summary sweep(unsigned max_int, const std::function<void(const Row&)>& on_divergence);

Summary write_census(const std::filesystem::path& path, unsigned max_int = kDefaultMaxInt);

struct Mismatch {
    std::uint64_t line = 0;
    std::string expected;  // empty when the committed file ran out
    std::string actual;    // empty when the regenerated census ran out
};

struct Comparison {
    Summary summary;
    std::optional<Mismatch> mismatch;
    std::uint64_t rows_compared = 0;
};

// Regenerates the census restricted to integer parts 0..max_int and compares
// it row by row against the committed file, ignoring committed rows whose
// operands fall outside that domain.
Comparison compare_census(const std::filesystem::path& committed, unsigned max_int = kDefaultMaxInt);

}  // namespace chaospend::census
