// SPDX-License-Identifier: Apache-2.0

#include "chaospend/sensorio.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace chaospend::sensorio {

namespace {

constexpr std::uint8_t kRegCra = 0x00;
constexpr std::uint8_t kRegCrb = 0x01;
constexpr std::uint8_t kRegMode = 0x02;
constexpr std::uint8_t kRegDataX = 0x03;

std::int16_t be16(std::uint8_t hi, std::uint8_t lo) {
    return static_cast<std::int16_t>(static_cast<std::uint16_t>((hi << 8) | lo));
}

std::uint16_t rotl16(std::uint16_t v, unsigned k) {
    return static_cast<std::uint16_t>((v << k) | (v >> (16 - k)));
}

std::uint16_t fold_adc(std::uint16_t value) {
    return static_cast<std::uint16_t>((value << 4) ^ (value >> 8));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

template <typename T>
T parse_int(std::string_view field, std::string_view column, std::size_t line, long long lo, long long hi) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw DecodeError("line " + std::to_string(line) + ": column " + std::string(column) +
                              ": not an integer: '" + std::string(field) + "'",
                          line);
    }
    if (v < lo || v > hi) {
        throw DecodeError("line " + std::to_string(line) + ": column " + std::string(column) + ": value " +
                              std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]",
                          line);
    }
    return static_cast<T>(v);
}

AdcSample parse_adc(std::string_view src, std::string_view ch, std::string_view val, std::string_view name,
                    std::size_t line) {
    AdcSample s;
    try {
        s.source = parse_adc_source(src);
    } catch (const std::invalid_argument& e) {
        throw DecodeError("line " + std::to_string(line) + ": column " + std::string(name) + "_src: " + e.what(),
                          line);
    }
    s.channel = parse_int<std::uint8_t>(ch, std::string(name) + "_ch", line, 0, 1);
    s.value = parse_int<std::uint16_t>(val, std::string(name) + "_val", line, 0, 4095);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::vector<BusAction> hmc_config_sequence() {
    return {{RegisterAction::cra, HmcConfig::cra},
            {RegisterAction::crb, HmcConfig::crb},
            {RegisterAction::mode, HmcConfig::mode},
            {RegisterAction::read, HmcConfig::read_len}};
}

std::vector<std::uint8_t> hmc_serialize(const std::vector<BusAction>& sequence) {
    std::vector<std::uint8_t> bytes;
    for (const BusAction& a : sequence) {
        bytes.push_back(HmcConfig::addr7);
        switch (a.action) {
            case RegisterAction::cra: bytes.push_back(kRegCra); break;
            case RegisterAction::crb: bytes.push_back(kRegCrb); break;
            case RegisterAction::mode: bytes.push_back(kRegMode); break;
            case RegisterAction::read: bytes.push_back(kRegDataX); break;
        }
        bytes.push_back(a.value);
    }
    return bytes;
}

HmcOrder parse_hmc_order(std::string_view text) {
    if (text == "xzy") return HmcOrder::xzy;
    if (text == "xyz") return HmcOrder::xyz;
    throw std::invalid_argument("hmc order must be xzy or xyz");
}

MagSample decode_hmc_frame(std::span<const std::uint8_t> bytes, HmcOrder order) {
    if (bytes.size() != HmcConfig::read_len) {
        throw DecodeError("HMC5883L frame must be 6 bytes, got " + std::to_string(bytes.size()), bytes.size());
    }
    const std::int16_t first = be16(bytes[0], bytes[1]);
    const std::int16_t second = be16(bytes[2], bytes[3]);
    const std::int16_t third = be16(bytes[4], bytes[5]);
    if (order == HmcOrder::xzy) return {first, third, second};
    return {first, second, third};
}

std::string_view to_string(AdcSource source) {
    switch (source) {
        case AdcSource::xadc: return "XADC";
        case AdcSource::mcp3202_a: return "MCP3202_A";
        case AdcSource::mcp3202_b: return "MCP3202_B";
    }
    return "?";
}

AdcSource parse_adc_source(std::string_view text) {
    if (text == "XADC") return AdcSource::xadc;
    if (text == "MCP3202_A") return AdcSource::mcp3202_a;
    if (text == "MCP3202_B") return AdcSource::mcp3202_b;
    throw std::invalid_argument("unknown ADC source '" + std::string(text) + "'");
}

std::uint16_t encode_mcp3202(const AdcSample& sample) {
    if (sample.value > 4095) throw std::out_of_range("MCP3202 sample exceeds 12 bits");
    if (sample.channel > 1) throw std::out_of_range("MCP3202 channel must be 0 or 1");
    return static_cast<std::uint16_t>((1u << 14) | (std::uint16_t{sample.channel} << 13) | sample.value);
}

AdcSample decode_mcp3202(std::uint16_t bits, AdcSource source) {
    if (bits >> 15) throw DecodeError("MCP3202 window wider than 15 bits", 15);
    if (!((bits >> 14) & 1u)) throw DecodeError("MCP3202 SGL/DIFF bit clear; only single-ended is framed", 14);
    if ((bits >> 12) & 1u) throw DecodeError("MCP3202 null bit is set", 12);
    AdcSample s;
    s.source = source;
    s.channel = static_cast<std::uint8_t>((bits >> 13) & 1u);
    s.value = static_cast<std::uint16_t>(bits & 0x0FFFu);
    return s;
}

Seed64 pack_seed64(const SeedRecord& rec) {
    const auto x = static_cast<std::uint16_t>(rec.mag.x);
    const auto y = static_cast<std::uint16_t>(rec.mag.y);
    const auto z = static_cast<std::uint16_t>(rec.mag.z);
    const std::uint16_t mag = static_cast<std::uint16_t>(x ^ rotl16(y, 5) ^ rotl16(z, 10));
    return Seed64::from_fields(mag, fold_adc(rec.mic.value), fold_adc(rec.light.value), rec.temp_hum);
}

std::array<std::uint8_t, 8> uart_chunk(Seed64 seed) {
    std::array<std::uint8_t, 8> out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(seed.payload >> (8 * i));
    }
    return out;
}

Seed64 uart_unchunk(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 8) {
        throw DecodeError("UART seed transfer must be 8 bytes, got " + std::to_string(bytes.size()), bytes.size());
    }
    std::uint64_t payload = 0;
    for (std::size_t i = 0; i < 8; ++i) payload |= std::uint64_t{bytes[i]} << (8 * i);
    return Seed64{payload};
}

std::vector<SeedRecord> parse_sensor_log(std::string_view text) {
    if (!text.empty() && text.back() != '\n') {
        throw DecodeError("sensor log is truncated: last line has no terminating newline",
                          static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n') + 1));
    }
    std::vector<SeedRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.find('\r') != std::string_view::npos) {
            throw DecodeError("line " + std::to_string(line_no) + ": CR characters are not allowed", line_no);
        }
        if (line_no == 1) {
            if (line != kSensorLogHeader) {
                throw DecodeError("line 1: expected header '" + std::string(kSensorLogHeader) + "'", 1);
            }
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 11) {
            throw DecodeError("line " + std::to_string(line_no) + ": expected 11 fields, got " +
                                  std::to_string(f.size()),
                              line_no);
        }
        SeedRecord rec;
        if (!f[0].empty()) {
            rec.timestamp = parse_int<std::int64_t>(f[0], "timestamp", line_no, 0, INT64_MAX);
        }
        rec.mag.x = parse_int<std::int16_t>(f[1], "mag_x", line_no, -32768, 32767);
        rec.mag.y = parse_int<std::int16_t>(f[2], "mag_y", line_no, -32768, 32767);
        rec.mag.z = parse_int<std::int16_t>(f[3], "mag_z", line_no, -32768, 32767);
        rec.mic = parse_adc(f[4], f[5], f[6], "mic", line_no);
        rec.light = parse_adc(f[7], f[8], f[9], "light", line_no);
        rec.temp_hum = parse_int<std::uint16_t>(f[10], "temp_hum", line_no, 0, 65535);
        records.push_back(rec);
    }
    if (line_no == 0) throw DecodeError("sensor log is empty; header required", 1);
    return records;
}

std::vector<SeedRecord> read_sensor_log(const std::filesystem::path& path) {
    return parse_sensor_log(read_file(path));
}

std::string format_sensor_log_row(const SeedRecord& rec) {
    std::ostringstream out;
    if (rec.timestamp) out << *rec.timestamp;
    out << ',' << rec.mag.x << ',' << rec.mag.y << ',' << rec.mag.z << ',' << to_string(rec.mic.source) << ','
        << int{rec.mic.channel} << ',' << rec.mic.value << ',' << to_string(rec.light.source) << ','
        << int{rec.light.channel} << ',' << rec.light.value << ',' << rec.temp_hum;
    return out.str();
}

Seed64 read_seed_file(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    if (data.size() == 8) {
        return uart_unchunk(std::span(reinterpret_cast<const std::uint8_t*>(data.data()), data.size()));
    }
    std::string_view text = data;
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.remove_suffix(1);
    if (text.size() != 16) {
        throw DecodeError("seed file must hold 8 raw bytes or 16 hex characters (" + path.string() + ")",
                          data.size());
    }
    try {
        return Seed64::parse_hex(text);
    } catch (const std::invalid_argument& e) {
        throw DecodeError(std::string(e.what()) + " (" + path.string() + ")", 0);
    }
}

void write_seed_file(const std::filesystem::path& path, Seed64 seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    const auto bytes = uart_chunk(seed);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

SeedRecord os_entropy_seed() {
    try {
        std::random_device rd;
        const auto draw16 = [&] { return static_cast<std::uint16_t>(rd() & 0xFFFFu); };
        SeedRecord rec;
        rec.mag = {static_cast<std::int16_t>(draw16()), static_cast<std::int16_t>(draw16()),
                   static_cast<std::int16_t>(draw16())};
        const std::uint16_t channels = draw16();
        rec.mic = {AdcSource::xadc, static_cast<std::uint8_t>(channels & 1u),
                   static_cast<std::uint16_t>(draw16() & 0x0FFFu)};
        rec.light = {AdcSource::mcp3202_a, static_cast<std::uint8_t>((channels >> 1) & 1u),
                     static_cast<std::uint16_t>(draw16() & 0x0FFFu)};
        rec.temp_hum = draw16();
        return rec;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("platform entropy source unavailable: ") + e.what());
    }
}

}  // namespace chaospend::sensorio
