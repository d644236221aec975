// SPDX-License-Identifier: Apache-2.0
//
// Self-checks run by `chaospend selftest`: printed golden values, ref-layer
// agreement with the exact oracle, census regeneration, trig accuracy.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace chaospend::selftest {

struct Options {
    bool quick = false;
    std::filesystem::path census_path;
    std::uint64_t oracle_pairs = 1'000'000;  // per op; quick mode uses 10^4
    std::uint64_t rng_seed = 0x5EED'0F0Bull;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;  // first divergent case on failure, summary otherwise
};

Check check_golden_vectors();
Check check_oracle_equivalence(std::uint64_t pairs_per_op, std::uint64_t rng_seed);
Check check_divide_by_zero();
Check check_census(const std::filesystem::path& committed, unsigned max_int);
Check check_trig_accuracy();

std::vector<Check> run(const Options& options, std::ostream& log);

}  // namespace chaospend::selftest
