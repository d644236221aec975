// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chaospend/cli.hpp"
#include "chaospend/census.hpp"
#include "chaospend/sensorio.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace chaospend;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
    const fs::path dir = CHAOSPEND_TEST_TMP;
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("gen writes numbers and a manifest that replays") {
    const fs::path a = tmp("a.txt"), b = tmp("b.txt");
    const Result r = run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "50", "-o", a.string()});
    REQUIRE(r.code == 0);
    const std::string text = slurp(a);
    CHECK(text.substr(0, 33) == "5827239755\n9697915262\n4191297173\n");
    CHECK(std::count(text.begin(), text.end(), '\n') == 50);

    const cli::RunManifest m = cli::RunManifest::load(a.string() + ".manifest.json");
    CHECK(m.seed.payload == 0x0123456789ABCDEFull);
    CHECK(m.n == 50);
    CHECK(m.format == "text");
    CHECK(m.config.dt.to_string() == "+0.20");
    CHECK(m.config.warmup_steps == 100);
    CHECK(m.seed_source == "hex");

    REQUIRE(run({"gen", "--replay", a.string() + ".manifest.json", "-o", b.string()}).code == 0);
    CHECK(slurp(a) == slurp(b));

    const fs::path c = tmp("c.csv");
    REQUIRE(run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "3", "-o", c.string()}).code == 0);
    CHECK(slurp(c) == "index,value\n0,5827239755\n1,9697915262\n2,4191297173\n");

    const Result to_stdout = run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "1"});
    CHECK(to_stdout.out == "5827239755\n");
    CHECK(to_stdout.err.find("\"seed\": \"0123456789ABCDEF\"") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run({"gen", "-n", "5"}).code == 2);
    CHECK(run({"gen", "--seed-hex", "01", "--os-entropy", "-n", "5"}).code == 2);
    CHECK(run({"gen", "--seed-hex", "01", "-n", "5", "--dt", "0.60"}).code == 2);
    CHECK(run({"gen", "--seed-hex", "01", "-n", "5", "--layer", "float"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"gen", "--help"}).code == 0);

    const fs::path a = tmp("r.txt");
    REQUIRE(run({"gen", "--seed-hex", "01", "-n", "5", "-o", a.string()}).code == 0);
    const Result mixed = run({"gen", "--replay", a.string() + ".manifest.json", "--dt", "0.10"});
    CHECK(mixed.code == 2);
    CHECK(mixed.err.find("--replay") != std::string::npos);
}

TEST_CASE("analyze writes reports and rejects bad input") {
    const fs::path in = tmp("an.txt");
    REQUIRE(run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "2000", "-o", in.string()}).code == 0);
    const Result r = run({"analyze", in.string(), "--series-first", "10", "--threads", "3", "--cycle"});
    REQUIRE(r.code == 0);
    const std::string prefix = (in.parent_path() / in.stem()).string();
    const std::string hist = slurp(prefix + ".histogram.csv");
    CHECK(hist.rfind("bucket_low,bucket_high,count\n0,100000000,", 0) == 0);
    CHECK(std::count(hist.begin(), hist.end(), '\n') == 101);
    const std::string series = slurp(prefix + ".series.csv");
    CHECK(series.rfind("index,value\n0,5827239755\n", 0) == 0);
    CHECK(std::count(series.begin(), series.end(), '\n') == 11);
    CHECK(slurp(prefix + ".report.json").find("chi_square") != std::string::npos);
    CHECK(slurp(prefix + ".cycle.json").find("\"found\":false") != std::string::npos);

    const fs::path empty = tmp("empty.txt");
    std::ofstream(empty).close();
    CHECK(run({"analyze", empty.string()}).code == 2);

    const fs::path orphan = tmp("orphan.txt");
    fs::copy_file(in, orphan, fs::copy_options::overwrite_existing);
    CHECK(run({"analyze", orphan.string(), "--cycle"}).code == 2);
    CHECK(run({"analyze", orphan.string()}).code == 0);

    const fs::path junk = tmp("junk.txt");
    std::ofstream(junk) << "123\nnot-a-number\n";
    const Result bad = run({"analyze", junk.string()});
    CHECK(bad.code == 2);
    CHECK(bad.err.find(":2:") != std::string::npos);
}

TEST_CASE("decode") {
    CHECK(run({"decode", "--hmc", "123400000000"}).out == "x=4660 z=0 y=0\n");
    CHECK(run({"decode", "--hmc", "800000007FFF"}).out == "x=-32768 z=0 y=32767\n");
    CHECK(run({"decode", "--hmc", "1234"}).code == 2);
    CHECK(run({"decode", "--mcp3202", "6800"}).out == "source=MCP3202_A channel=1 value=2048\n");
    CHECK(run({"decode", "--mcp3202", "0800"}).code == 2);
    CHECK(run({"decode", "--seed-hex", "0123456789ABCDEF"}).out ==
          "0123456789ABCDEF mag=0123 mic=4567 light=89AB temp_hum=CDEF\n");
    CHECK(run({"decode"}).code == 2);

    const fs::path log = tmp("sensors.csv");
    std::ofstream(log) << sensorio::kSensorLogHeader << "\n0,1,0,0,XADC,0,0,XADC,0,0,0\n";
    const Result packed = run({"decode", "--sensor-log", log.string(), "--pack"});
    REQUIRE(packed.code == 0);
    CHECK(packed.out == "0001000000000000 mag=0001 mic=0000 light=0000 temp_hum=0000\n");

    // gen packs the first record.
    const Result from_log = run({"gen", "--sensor-log", log.string(), "-n", "4"});
    const Result from_hex = run({"gen", "--seed-hex", "0001000000000000", "-n", "4"});
    REQUIRE(from_log.code == 0);
    CHECK(from_log.out == from_hex.out);

    std::ofstream(log, std::ios::app) << "0,1,2\n";
    const Result broken = run({"decode", "--sensor-log", log.string()});
    CHECK(broken.code == 2);
    CHECK(broken.err.find("(at 3)") != std::string::npos);
}

TEST_CASE("a degenerate generator exits 3") {
    const Result r = run({"gen", "--seed-hex", "0383038300950095", "--layer", "ref", "--reseed", "halt", "--warmup",
                          "0", "-n", "10"});
    CHECK(r.code == 3);
    CHECK(r.err.find("generator degenerate at step 0") != std::string::npos);

    const Result perturbed =
        run({"gen", "--seed-hex", "0383038300950095", "--layer", "ref", "--warmup", "0", "-n", "10"});
    CHECK(perturbed.code == 0);
    CHECK(perturbed.err.find("\"reseed_events\": 0") == std::string::npos);
}

TEST_CASE("selftest") {
    const Result quick = run({"selftest", "--quick"});
    CHECK(quick.code == 0);
    CHECK(quick.out.find("selftest: all checks passed") != std::string::npos);

    const fs::path census = tmp("census.csv");
    REQUIRE(run({"census", "-o", census.string(), "--max-int", "3"}).code == 0);
    std::ifstream in(census);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    in.close();
    REQUIRE(lines.size() > 10);
    auto row = *census::parse_row(lines[7]);
    row.hw = fixnum::neg(row.hw);
    lines[7] = census::format_row(row);
    {
        std::ofstream out(census);
        for (const auto& l : lines) out << l << '\n';
    }
    const Result bad = run({"selftest", "--quick", "--census", census.string()});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("FAIL quirk census") != std::string::npos);
    CHECK(bad.out.find("line 8") != std::string::npos);
    CHECK(bad.out.find(std::string(census::to_string(row.op))) != std::string::npos);
}

TEST_CASE("default layer comes from the environment") {
    ::setenv("CHAOSPEND_DEFAULT_LAYER", "ref", 1);
    const fs::path a = tmp("env.txt");
    const Result r = run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "2", "-o", a.string()});
    ::unsetenv("CHAOSPEND_DEFAULT_LAYER");
    REQUIRE(r.code == 0);
    CHECK(cli::RunManifest::load(a.string() + ".manifest.json").config.layer == Layer::ref);
    const fs::path b = tmp("env_hw.txt");
    REQUIRE(run({"gen", "--seed-hex", "0123456789ABCDEF", "-n", "2", "-o", b.string()}).code == 0);
    CHECK(cli::RunManifest::load(b.string() + ".manifest.json").config.layer == Layer::hw);
}

TEST_CASE("trace") {
    const Result r = run({"trace", "--seed-hex", "0123456789ABCDEF", "--steps", "3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("step,theta1,theta2,omega1,omega2\n0,", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);

    const Result bad = run({"trace", "--seed-hex", "0383038300950095", "--layer", "ref", "--steps", "3"});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("step 1 failed") != std::string::npos);
}
