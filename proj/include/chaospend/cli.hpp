// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "chaospend/prng.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace chaospend::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Stable exit codes.
enum ExitCode : int {
    kOk = 0,
    kSelftestFailed = 1,
    kUsage = 2,
    kDegenerate = 3,
};

// Everything needed to replay a `gen` run bit for bit.
struct RunManifest {
    Seed64 seed;
    std::string seed_source;
    GeneratorConfig config;
    std::uint64_t n = 0;
    std::string format;
    std::string output;
    std::string tool_version = kToolVersion;
    std::string started_utc;
    std::string finished_utc;
    std::uint64_t reseed_events = 0;
    std::uint64_t wrap_steps = 0;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
    static RunManifest load(const std::filesystem::path& path);
};

// Reads a number stream: plain text (one number per line) or CSV with an
// `index,value` header. Throws std::runtime_error with the line number.
std::vector<OutputNumber> read_stream(const std::filesystem::path& path);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace chaospend::cli
