// SPDX-License-Identifier: Apache-2.0
//
// Exact-arithmetic oracle for the fixed-point layers. Values are signed
// integer counts of hundredths with arbitrary precision; multiplication and
// division truncate toward zero. Nothing here touches fixnum code paths.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>

namespace chaospend::refcalc {

using ExactHundredths = boost::multiprecision::cpp_int;

ExactHundredths r_add(const ExactHundredths& a, const ExactHundredths& b);
ExactHundredths r_sub(const ExactHundredths& a, const ExactHundredths& b);

// trunc(a * b / 100)
ExactHundredths r_mul_trunc(const ExactHundredths& a, const ExactHundredths& b);

// trunc(100 * a / b); throws std::domain_error when b == 0.
ExactHundredths r_div_trunc(const ExactHundredths& a, const ExactHundredths& b);

// sin(theta_hundredths / 100) evaluated with 50 decimal digits.
double r_sin(std::int64_t theta_hundredths);
double r_cos(std::int64_t theta_hundredths);

}  // namespace chaospend::refcalc
