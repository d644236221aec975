// SPDX-License-Identifier: Apache-2.0

#include "chaospend/refcalc.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace chaospend::refcalc {

namespace {

using Real = boost::multiprecision::cpp_dec_float_50;

Real radians(std::int64_t theta_hundredths) {
    return Real(theta_hundredths) / 100;
}

}  // namespace

ExactHundredths r_add(const ExactHundredths& a, const ExactHundredths& b) { return a + b; }

ExactHundredths r_sub(const ExactHundredths& a, const ExactHundredths& b) { return a - b; }

// cpp_int division truncates toward zero, which is the rounding we want.
ExactHundredths r_mul_trunc(const ExactHundredths& a, const ExactHundredths& b) {
    return (a * b) / 100;
}

ExactHundredths r_div_trunc(const ExactHundredths& a, const ExactHundredths& b) {
    if (b == 0) throw std::domain_error("r_div_trunc: division by zero");
    return (a * 100) / b;
}

double r_sin(std::int64_t theta_hundredths) {
    return static_cast<double>(boost::multiprecision::sin(radians(theta_hundredths)));
}

double r_cos(std::int64_t theta_hundredths) {
    return static_cast<double>(boost::multiprecision::cos(radians(theta_hundredths)));
}

}  // namespace chaospend::refcalc
