// SPDX-License-Identifier: Apache-2.0

#include "chaospend/cli.hpp"

#include "chaospend/census.hpp"
#include "chaospend/pendulum.hpp"
#include "chaospend/selftest.hpp"
#include "chaospend/sensorio.hpp"
#include "chaospend/stats.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#ifndef CHAOSPEND_CENSUS_PATH
#define CHAOSPEND_CENSUS_PATH "data/quirk_census.csv.gz"
#endif

namespace chaospend::cli {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Bad flags or bad input; maps to kUsage.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string hex4(std::uint16_t v) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%04X", v);
    return buf;
}

std::string seed_views(Seed64 seed) {
    return seed.to_hex() + " mag=" + hex4(seed.mag()) + " mic=" + hex4(seed.mic()) +
           " light=" + hex4(seed.light()) + " temp_hum=" + hex4(seed.temp_hum());
}

std::vector<std::uint8_t> parse_hex_bytes(std::string_view text) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.remove_prefix(2);
    if (text.empty() || text.size() % 2 != 0)
        throw sensorio::DecodeError("hex input needs an even, non-zero number of digits", text.size());
    std::vector<std::uint8_t> bytes;
    for (std::size_t i = 0; i < text.size(); i += 2) {
        unsigned v = 0;
        const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + i + 2, v, 16);
        if (ec != std::errc{} || ptr != text.data() + i + 2)
            throw sensorio::DecodeError("bad hex digit at offset " + std::to_string(i), i);
        bytes.push_back(static_cast<std::uint8_t>(v));
    }
    return bytes;
}

Layer default_layer() {
    if (const char* env = std::getenv("CHAOSPEND_DEFAULT_LAYER"); env != nullptr && *env != '\0') {
        try {
            return parse_layer(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("CHAOSPEND_DEFAULT_LAYER must be hw or ref, got '") + env + "'");
        }
    }
    return Layer::hw;
}

struct SeedFlags {
    std::string seed_hex;
    std::string seed_file;
    std::string sensor_log;
    bool os_entropy = false;
    std::string replay;  // gen and trace only

    void add(CLI::App& cmd, bool with_replay) {
        cmd.add_option("--seed-hex", seed_hex, "64-bit seed as 16 hex digits");
        cmd.add_option("--seed-file", seed_file, "seed file: 8 raw bytes or 16 hex characters");
        cmd.add_option("--sensor-log", sensor_log, "sensor log CSV; the first record is packed");
        cmd.add_flag("--os-entropy", os_entropy, "draw the seed from the platform entropy source");
        if (with_replay) cmd.add_option("--replay", replay, "replay the seed and config of a run manifest");
    }

    int count() const {
        return static_cast<int>(!seed_hex.empty()) + static_cast<int>(!seed_file.empty()) +
               static_cast<int>(!sensor_log.empty()) + static_cast<int>(os_entropy) +
               static_cast<int>(!replay.empty());
    }

    // Resolves every source except --replay.
    std::pair<Seed64, std::string> resolve() const {
        if (count() != 1)
            throw UsageError("exactly one seed source is required: --seed-hex, --seed-file, --sensor-log, "
                             "--os-entropy or --replay");
        if (!seed_hex.empty()) return {Seed64::parse_hex(seed_hex), "hex"};
        if (!seed_file.empty()) return {sensorio::read_seed_file(seed_file), "file:" + seed_file};
        if (!sensor_log.empty()) {
            const auto records = sensorio::read_sensor_log(sensor_log);
            if (records.empty()) throw UsageError("sensor log " + sensor_log + " has no records");
            return {sensorio::pack_seed64(records.front()), "sensor-log:" + sensor_log};
        }
        return {sensorio::pack_seed64(sensorio::os_entropy_seed()), "os-entropy"};
    }
};

struct ConfigFlags {
    std::string layer;
    std::string dt;
    std::optional<std::uint64_t> warmup;
    std::optional<std::uint64_t> steps_per_output;
    std::string reseed;

    void add(CLI::App& cmd) {
        cmd.add_option("--layer", layer, "arithmetic layer: hw or ref");
        cmd.add_option("--dt", dt, "integrator step, e.g. 0.20");
        cmd.add_option("--warmup", warmup, "steps discarded before the first output");
        cmd.add_option("--steps-per-output", steps_per_output, "pendulum steps per emitted number");
        cmd.add_option("--reseed", reseed, "reseed policy: halt or perturb");
    }

    bool any() const {
        return !layer.empty() || !dt.empty() || warmup || steps_per_output || !reseed.empty();
    }

    GeneratorConfig build() const {
        GeneratorConfig cfg;
        cfg.layer = layer.empty() ? default_layer() : parse_layer(layer);
        if (!dt.empty()) cfg.dt = Fix32::parse(dt);
        if (warmup) cfg.warmup_steps = *warmup;
        if (steps_per_output) cfg.steps_per_output = *steps_per_output;
        if (!reseed.empty()) cfg.reseed_policy = parse_reseed_policy(reseed);
        cfg.validate();
        return cfg;
    }
};

struct Resolved {
    Seed64 seed;
    std::string source;
    GeneratorConfig config;
    std::optional<RunManifest> manifest;
};

Resolved resolve_run(const SeedFlags& seeds, const ConfigFlags& config) {
    if (!seeds.replay.empty()) {
        if (seeds.count() != 1) throw UsageError("--replay cannot be combined with another seed source");
        if (config.any()) throw UsageError("--replay takes its configuration from the manifest");
        RunManifest m = RunManifest::load(seeds.replay);
        m.config.validate();
        return {m.seed, m.seed_source, m.config, m};
    }
    auto [seed, source] = seeds.resolve();
    return {seed, std::move(source), config.build(), std::nullopt};
}

std::string infer_format(const std::string& format, const std::string& output) {
    if (!format.empty()) {
        if (format != "text" && format != "csv") throw UsageError("--format must be text or csv");
        return format;
    }
    return fs::path(output).extension() == ".csv" ? "csv" : "text";
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << contents;
    if (!f.flush()) throw std::runtime_error("write failed: " + path.string());
}

// ---------------------------------------------------------------- gen

struct GenFlags {
    SeedFlags seeds;
    ConfigFlags config;
    std::optional<std::uint64_t> n;
    std::string output;
    std::string format;
    std::string manifest;
};

int cmd_gen(const GenFlags& f, std::ostream& out, std::ostream& err) {
    Resolved r = resolve_run(f.seeds, f.config);

    RunManifest m;
    m.seed = r.seed;
    m.seed_source = r.source;
    m.config = r.config;
    if (f.n) {
        m.n = *f.n;
    } else if (r.manifest) {
        m.n = r.manifest->n;
    } else {
        throw UsageError("-n is required");
    }
    if (m.n == 0) throw UsageError("-n must be at least 1");
    m.format = (f.format.empty() && r.manifest) ? r.manifest->format : infer_format(f.format, f.output);
    if (m.format != "text" && m.format != "csv") throw UsageError("manifest format must be text or csv");
    m.output = f.output.empty() ? "-" : f.output;
    m.started_utc = utc_now();

    std::ofstream file;
    if (!f.output.empty()) {
        file.open(f.output, std::ios::binary);
        if (!file) throw UsageError("cannot open output " + f.output);
    }
    std::ostream& sink = f.output.empty() ? out : static_cast<std::ostream&>(file);

    int code = kOk;
    {
        Generator gen(r.seed, r.config);
        if (m.format == "csv") sink << "index,value\n";
        std::string line;
        for (std::uint64_t i = 0; i < m.n; ++i) {
            OutputNumber v;
            try {
                v = gen.next();
            } catch (const GeneratorHalted& h) {
                err << "error: generator degenerate at step " << h.step_index() << " ("
                    << to_string(h.failure()) << "): " << h.what() << "\n";
                code = kDegenerate;
                break;
            }
            line.clear();
            if (m.format == "csv") line += std::to_string(i) + ",";
            line += v.digits();
            line += '\n';
            sink << line;
        }
        m.reseed_events = gen.events().size();
        m.wrap_steps = gen.wrap_steps();
    }
    sink.flush();
    if (!sink) throw std::runtime_error("write failed: " + m.output);
    m.finished_utc = utc_now();

    const std::string json = m.to_json();
    if (!f.manifest.empty()) {
        write_file(f.manifest, json);
    } else if (!f.output.empty()) {
        write_file(f.output + ".manifest.json", json);
    } else {
        err << json;
    }
    return code;
}

// ------------------------------------------------------------ analyze

struct AnalyzeFlags {
    std::string input;
    std::size_t buckets = stats::kDefaultBuckets;
    std::string out_prefix;
    std::size_t lag = 1;
    std::size_t series_first = 1000;
    unsigned threads = 0;
    bool cycle = false;
    std::optional<std::uint64_t> max_steps;
    std::string manifest;
};

std::string default_prefix(const std::string& input) {
    fs::path p(input);
    if (p.has_extension()) p.replace_extension();
    return p.string();
}

int cmd_analyze(const AnalyzeFlags& f, std::ostream& out, std::ostream& err) {
    if (f.buckets < 2) throw UsageError("--histogram needs at least 2 buckets");
    if (f.lag == 0) throw UsageError("--lag must be at least 1");

    // Resolve the manifest before any work so a missing one fails fast.
    std::optional<RunManifest> manifest;
    if (f.cycle) {
        const fs::path path = f.manifest.empty() ? fs::path(f.input + ".manifest.json") : fs::path(f.manifest);
        if (!fs::exists(path)) throw UsageError("--cycle needs a run manifest; not found: " + path.string());
        manifest = RunManifest::load(path);
        manifest->config.validate();
    }

    const std::vector<OutputNumber> stream = read_stream(f.input);
    if (stream.empty()) throw UsageError("input stream " + f.input + " is empty");

    stats::AnalysisOptions opts;
    opts.bucket_count = f.buckets;
    opts.lag = f.lag;
    opts.threads = f.threads != 0 ? f.threads : std::max(1u, std::thread::hardware_concurrency());
    const stats::Analysis a = stats::analyze(stream, opts);

    const std::string prefix = f.out_prefix.empty() ? default_prefix(f.input) : f.out_prefix;
    {
        std::ostringstream csv;
        a.histogram.write_csv(csv);
        write_file(prefix + ".histogram.csv", csv.str());
    }
    stats::export_series(stream, prefix + ".series.csv", std::min(f.series_first, stream.size()));

    ordered_json report;
    report["input"] = f.input;
    report["n"] = stream.size();
    ordered_json hist;
    hist["buckets"] = f.buckets;
    hist["empty_buckets"] = a.histogram.empty_buckets();
    report["histogram"] = hist;

    ordered_json chi;
    chi["threshold"] = stats::kChiSquare9At999;
    if (stream.size() >= 1000) {
        chi["per_position"] = a.chi.per_position;
        chi["pooled"] = a.chi.pooled;
        chi["pass"] = std::all_of(a.chi.per_position.begin(), a.chi.per_position.end(),
                                  [](double x) { return x < stats::kChiSquare9At999; });
    } else {
        chi["per_position"] = nullptr;
        chi["note"] = "needs at least 1000 values";
    }
    report["chi_square"] = chi;

    ordered_json lag;
    lag["lag"] = f.lag;
    lag["threshold"] = 0.01;
    if (a.lag_r) {
        lag["r"] = *a.lag_r;
        lag["pass"] = std::abs(*a.lag_r) < 0.01;
    } else {
        lag["r"] = nullptr;
    }
    report["lag_correlation"] = lag;
    write_file(prefix + ".report.json", report.dump(2) + "\n");

    out << "n=" << stream.size() << " empty_buckets=" << a.histogram.empty_buckets();
    if (stream.size() >= 1000) {
        const double worst = *std::max_element(a.chi.per_position.begin(), a.chi.per_position.end());
        out << " chi2_max=" << worst;
    }
    if (a.lag_r) out << " lag" << f.lag << "_r=" << *a.lag_r;
    out << "\n";

    if (f.cycle) {
        const std::uint64_t max_steps = f.max_steps ? *f.max_steps : manifest->n;
        Generator gen(manifest->seed, manifest->config);
        std::uint64_t index = 0;
        std::optional<std::string> mismatch;
        const auto next = [&]() -> std::optional<PendulumState> {
            OutputNumber v;
            try {
                v = gen.next();
            } catch (const GeneratorHalted&) {
                return std::nullopt;
            }
            if (!mismatch && index < stream.size() && stream[index] != v)
                mismatch = "stream differs from manifest replay at index " + std::to_string(index);
            ++index;
            return gen.state();
        };
        const stats::CycleReport c = stats::detect_cycle(next, max_steps);
        if (mismatch) throw UsageError(*mismatch);
        write_file(prefix + ".cycle.json", c.to_record() + "\n");
        out << c.to_record() << "\n";
    }
    (void)err;
    return kOk;
}

// ----------------------------------------------------------- selftest

int cmd_selftest(bool quick, const std::string& census, std::optional<std::uint64_t> pairs, std::ostream& out) {
    selftest::Options opts;
    opts.quick = quick;
    opts.census_path = census.empty() ? fs::path(CHAOSPEND_CENSUS_PATH) : fs::path(census);
    if (pairs) opts.oracle_pairs = *pairs;
    const auto checks = selftest::run(opts, out);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const selftest::Check& c) { return c.passed; });
    out << (ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    return ok ? kOk : kSelftestFailed;
}

// ------------------------------------------------------------- decode

struct DecodeFlags {
    std::string hmc;
    std::string hmc_order = "xzy";
    std::string seed_file;
    std::string seed_hex;
    std::string sensor_log;
    bool pack = false;
    std::string mcp3202;
    std::string adc_source = "MCP3202_A";
};

int cmd_decode(const DecodeFlags& f, std::ostream& out) {
    const int sources = static_cast<int>(!f.hmc.empty()) + static_cast<int>(!f.seed_file.empty()) +
                        static_cast<int>(!f.seed_hex.empty()) + static_cast<int>(!f.sensor_log.empty()) +
                        static_cast<int>(!f.mcp3202.empty());
    if (sources != 1)
        throw UsageError("exactly one input is required: --hmc, --seed-file, --seed-hex, --sensor-log or --mcp3202");
    if (f.pack && f.sensor_log.empty()) throw UsageError("--pack applies to --sensor-log only");

    if (!f.hmc.empty()) {
        const auto bytes = parse_hex_bytes(f.hmc);
        const auto s = sensorio::decode_hmc_frame(bytes, sensorio::parse_hmc_order(f.hmc_order));
        out << "x=" << s.x << " z=" << s.z << " y=" << s.y << "\n";
    } else if (!f.seed_file.empty()) {
        out << seed_views(sensorio::read_seed_file(f.seed_file)) << "\n";
    } else if (!f.seed_hex.empty()) {
        out << seed_views(Seed64::parse_hex(f.seed_hex)) << "\n";
    } else if (!f.sensor_log.empty()) {
        const auto records = sensorio::read_sensor_log(f.sensor_log);
        if (!f.pack) out << sensorio::kSensorLogHeader << "\n";
        for (const auto& rec : records) {
            if (f.pack) {
                out << seed_views(sensorio::pack_seed64(rec)) << "\n";
            } else {
                out << sensorio::format_sensor_log_row(rec) << "\n";
            }
        }
    } else {
        std::string_view text = f.mcp3202;
        if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.remove_prefix(2);
        unsigned bits = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), bits, 16);
        if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
            throw sensorio::DecodeError("bad hex in --mcp3202", static_cast<std::size_t>(ptr - text.data()));
        if (bits > 0x7FFF) throw sensorio::DecodeError("MCP3202 window is 15 bits", 0);
        const auto s = sensorio::decode_mcp3202(static_cast<std::uint16_t>(bits),
                                                sensorio::parse_adc_source(f.adc_source));
        out << "source=" << to_string(s.source) << " channel=" << unsigned{s.channel} << " value=" << s.value
            << "\n";
    }
    return kOk;
}

// -------------------------------------------------------------- trace

int cmd_trace(const SeedFlags& seeds, const ConfigFlags& config, std::uint64_t steps, const std::string& output,
              std::ostream& out, std::ostream& err) {
    const Resolved r = resolve_run(seeds, config);
    const InitialConditions ic = seed_to_initial(r.seed);

    std::ofstream file;
    if (!output.empty()) {
        file.open(output, std::ios::binary);
        if (!file) throw UsageError("cannot open output " + output);
    }
    std::ostream& sink = output.empty() ? out : static_cast<std::ostream&>(file);

    pendulum::write_trajectory_header(sink);
    PendulumState s = ic.state;
    pendulum::write_trajectory_row(sink, 0, s);
    for (std::uint64_t i = 1; i <= steps; ++i) {
        try {
            s = pendulum::step(r.config.layer, ic.params, s, r.config.dt).state;
        } catch (const StepError& e) {
            sink.flush();
            err << "error: step " << i << " failed (" << to_string(e.failure()) << "): " << e.what() << "\n";
            return kDegenerate;
        }
        pendulum::write_trajectory_row(sink, i, s);
    }
    sink.flush();
    return kOk;
}

// ------------------------------------------------------------- census

int cmd_census(const std::string& output, unsigned max_int, std::ostream& out) {
    if (max_int > 255) throw UsageError("--max-int must be at most 255");
    const auto summary = census::write_census(output, max_int);
    for (std::size_t i = 0; i < census::kOps.size(); ++i) {
        const auto& s = summary.ops[i];
        out << to_string(census::kOps[i]) << ": pairs=" << s.pairs << " divergences=" << s.divergences
            << " skipped_faults=" << s.ref_faults << " unexplained=" << s.unexplained << "\n";
    }
    return summary.unexplained() == 0 ? kOk : kSelftestFailed;
}

}  // namespace

// ------------------------------------------------------------ manifest

std::string RunManifest::to_json() const {
    ordered_json j;
    j["tool_version"] = tool_version;
    j["seed"] = seed.to_hex();
    j["seed_source"] = seed_source;
    j["layer"] = std::string(to_string(config.layer));
    j["dt"] = config.dt.to_string();
    j["warmup"] = config.warmup_steps;
    j["steps_per_output"] = config.steps_per_output;
    j["reseed"] = std::string(to_string(config.reseed_policy));
    j["n"] = n;
    j["format"] = format;
    j["output"] = output;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    j["reseed_events"] = reseed_events;
    j["wrap_steps"] = wrap_steps;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    RunManifest m;
    try {
        const auto j = nlohmann::json::parse(text);
        m.seed = Seed64::parse_hex(j.at("seed").get<std::string>());
        m.seed_source = j.value("seed_source", std::string{});
        m.config.layer = parse_layer(j.at("layer").get<std::string>());
        m.config.dt = Fix32::parse(j.at("dt").get<std::string>());
        m.config.warmup_steps = j.at("warmup").get<std::uint64_t>();
        m.config.steps_per_output = j.at("steps_per_output").get<std::uint64_t>();
        m.config.reseed_policy = parse_reseed_policy(j.at("reseed").get<std::string>());
        m.n = j.at("n").get<std::uint64_t>();
        m.format = j.value("format", std::string{"text"});
        m.output = j.value("output", std::string{});
        m.tool_version = j.value("tool_version", std::string{});
        m.started_utc = j.value("started_utc", std::string{});
        m.finished_utc = j.value("finished_utc", std::string{});
        m.reseed_events = j.value("reseed_events", std::uint64_t{0});
        m.wrap_steps = j.value("wrap_steps", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("bad manifest: ") + e.what());
    }
    return m;
}

RunManifest RunManifest::load(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read manifest " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_json(ss.str());
}

std::vector<OutputNumber> read_stream(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path.string());
    std::vector<OutputNumber> values;
    std::string line;
    std::uint64_t lineno = 0;
    bool csv = false;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line == "index,value") {
            csv = true;
            continue;
        }
        if (line.empty()) continue;
        std::string_view field = line;
        if (csv) {
            const auto comma = field.find(',');
            if (comma == std::string_view::npos)
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected index,value");
            field.remove_prefix(comma + 1);
        }
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || field.size() > 10 || ec != std::errc{} || ptr != field.data() + field.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": not a 10-digit number");
        values.emplace_back(v);
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Double-pendulum pseudo-random number generator on emulated fixed-point hardware", "chaospend"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    GenFlags gen;
    auto* gen_cmd = app.add_subcommand("gen", "generate a number stream and its run manifest");
    gen.seeds.add(*gen_cmd, true);
    gen.config.add(*gen_cmd);
    gen_cmd->add_option("-n", gen.n, "numbers to emit");
    gen_cmd->add_option("-o,--output", gen.output, "output file (stdout when omitted)");
    gen_cmd->add_option("--format", gen.format, "text or csv (default: csv for a .csv output, else text)");
    gen_cmd->add_option("--manifest", gen.manifest, "manifest path (default: <output>.manifest.json)");

    AnalyzeFlags an;
    auto* an_cmd = app.add_subcommand("analyze", "histogram, digit chi-square, lag correlation, cycle check");
    an_cmd->add_option("input", an.input, "number stream (text or index,value CSV)")->required();
    an_cmd->add_option("--histogram", an.buckets, "histogram bucket count");
    an_cmd->add_option("--out-prefix", an.out_prefix, "prefix for report files (default: input without extension)");
    an_cmd->add_option("--lag", an.lag, "lag for the serial correlation");
    an_cmd->add_option("--series-first", an.series_first, "values exported to the series CSV");
    an_cmd->add_option("--threads", an.threads, "worker threads (default: hardware concurrency)");
    an_cmd->add_flag("--cycle", an.cycle, "replay the manifest and search the full state for a cycle");
    an_cmd->add_option("--max-steps", an.max_steps, "outputs to replay for --cycle (default: manifest n)");
    an_cmd->add_option("--manifest", an.manifest, "manifest path (default: <input>.manifest.json)");

    bool quick = false;
    std::string census_path;
    std::optional<std::uint64_t> pairs;
    auto* st_cmd = app.add_subcommand("selftest", "oracle, census, golden vector and trig checks");
    st_cmd->add_flag("--quick", quick, "10^4-pair subset and a small census slice");
    st_cmd->add_option("--census", census_path, "committed census file");
    st_cmd->add_option("--pairs", pairs, "oracle pairs per op");

    DecodeFlags dec;
    auto* dec_cmd = app.add_subcommand("decode", "decode sensor frames, logs and seed files");
    dec_cmd->add_option("--hmc", dec.hmc, "6-byte HMC5883L data frame as hex");
    dec_cmd->add_option("--hmc-order", dec.hmc_order, "register order: xzy or xyz");
    dec_cmd->add_option("--seed-file", dec.seed_file, "seed file");
    dec_cmd->add_option("--seed-hex", dec.seed_hex, "seed as hex");
    dec_cmd->add_option("--sensor-log", dec.sensor_log, "sensor log CSV");
    dec_cmd->add_flag("--pack", dec.pack, "print the packed seed of each sensor log record");
    dec_cmd->add_option("--mcp3202", dec.mcp3202, "15-bit MCP3202 response window as hex");
    dec_cmd->add_option("--adc-source", dec.adc_source, "source label for --mcp3202");

    SeedFlags tr_seeds;
    ConfigFlags tr_config;
    std::uint64_t tr_steps = 100;
    std::string tr_output;
    auto* tr_cmd = app.add_subcommand("trace", "dump the pendulum trajectory from the seeded start state");
    tr_seeds.add(*tr_cmd, true);
    tr_config.add(*tr_cmd);
    tr_cmd->add_option("--steps", tr_steps, "steps to integrate");
    tr_cmd->add_option("-o,--output", tr_output, "output CSV (stdout when omitted)");

    std::string census_out;
    unsigned max_int = census::kDefaultMaxInt;
    auto* ce_cmd = app.add_subcommand("census", "write the hw-vs-ref divergence census");
    ce_cmd->add_option("-o,--output", census_out, "output path; .gz compresses")->required();
    ce_cmd->add_option("--max-int", max_int, "largest integer part swept");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen, out, err);
        if (an_cmd->parsed()) return cmd_analyze(an, out, err);
        if (st_cmd->parsed()) return cmd_selftest(quick, census_path, pairs, out);
        if (dec_cmd->parsed()) return cmd_decode(dec, out);
        if (tr_cmd->parsed()) return cmd_trace(tr_seeds, tr_config, tr_steps, tr_output, out, err);
        if (ce_cmd->parsed()) return cmd_census(census_out, max_int, out);
    } catch (const sensorio::DecodeError& e) {
        err << "error: " << e.what() << " (at " << e.location() << ")\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace chaospend::cli
