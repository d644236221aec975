// SPDX-License-Identifier: Apache-2.0
//
// Byte-level codecs for the seed sensors: HMC5883L magnetometer over I2C,
// MCP3202 / XADC 12-bit samples, and the 8 x 8-bit UART transfer of the
// packed 64-bit seed. No bus timing is modeled.

#pragma once

#include "chaospend/prng.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chaospend::sensorio {

// Malformed wire or file input. `location` is a line number for logs and a
// byte offset or empty for frames.
class DecodeError : public std::runtime_error {
public:
    DecodeError(const std::string& what, std::size_t location = 0)
        : std::runtime_error(what), location_(location) {}

    std::size_t location() const noexcept { return location_; }

private:
    std::size_t location_;
};

struct MagSample {
    std::int16_t x = 0;
    std::int16_t y = 0;
    std::int16_t z = 0;

    friend bool operator==(const MagSample&, const MagSample&) = default;
};

struct HmcConfig {
    static constexpr std::uint8_t addr7 = 0x3C;
    static constexpr std::uint8_t cra = 0x10;   // 1 sample, 15 Hz, normal
    static constexpr std::uint8_t crb = 0x60;   // gain +/-2.5
    static constexpr std::uint8_t mode = 0x01;  // single measurement
    static constexpr std::uint8_t read_len = 6;
};

enum class RegisterAction : std::uint8_t { cra, crb, mode, read };

struct BusAction {
    RegisterAction action;
    std::uint8_t value;  // register value, or byte count for read

    friend bool operator==(const BusAction&, const BusAction&) = default;
};

std::vector<BusAction> hmc_config_sequence();

// Bytes put on the bus: each register write as {addr, register, value},
// then the read request {addr, data register, count}.
std::vector<std::uint8_t> hmc_serialize(const std::vector<BusAction>& sequence);

// Data register order. The device emits X, Z, Y.
enum class HmcOrder : std::uint8_t { xzy, xyz };

HmcOrder parse_hmc_order(std::string_view text);

MagSample decode_hmc_frame(std::span<const std::uint8_t> bytes, HmcOrder order = HmcOrder::xzy);

enum class AdcSource : std::uint8_t { xadc, mcp3202_a, mcp3202_b };

std::string_view to_string(AdcSource source);
AdcSource parse_adc_source(std::string_view text);

struct AdcSample {
    AdcSource source = AdcSource::xadc;
    std::uint8_t channel = 0;
    std::uint16_t value = 0;

    friend bool operator==(const AdcSample&, const AdcSample&) = default;
};

// 15-bit MCP3202 response window, MSB first:
//   bit 14     SGL/DIFF echo, 1 = single-ended
//   bit 13     ODD/SIGN echo, the channel
//   bit 12     null bit, always 0
//   bits 11:0  sample, MSB first
std::uint16_t encode_mcp3202(const AdcSample& sample);
AdcSample decode_mcp3202(std::uint16_t bits, AdcSource source = AdcSource::mcp3202_a);

struct SeedRecord {
    MagSample mag;
    AdcSample mic;
    AdcSample light;
    std::uint16_t temp_hum = 0;
    std::optional<std::int64_t> timestamp;

    friend bool operator==(const SeedRecord&, const SeedRecord&) = default;
};

Seed64 pack_seed64(const SeedRecord& rec);

std::array<std::uint8_t, 8> uart_chunk(Seed64 seed);
Seed64 uart_unchunk(std::span<const std::uint8_t> bytes);

inline constexpr std::string_view kSensorLogHeader =
    "timestamp,mag_x,mag_y,mag_z,mic_src,mic_ch,mic_val,light_src,light_ch,light_val,temp_hum";

// Strict parse of the sensor log CSV. Errors carry the 1-based line number.
std::vector<SeedRecord> parse_sensor_log(std::string_view text);
std::vector<SeedRecord> read_sensor_log(const std::filesystem::path& path);
std::string format_sensor_log_row(const SeedRecord& rec);

// Seed file: 8 raw bytes in uart_chunk order, or 16 hex characters.
Seed64 read_seed_file(const std::filesystem::path& path);
void write_seed_file(const std::filesystem::path& path, Seed64 seed);

// Fills every field from the platform entropy source. Not replayable.
SeedRecord os_entropy_seed();

}  // namespace chaospend::sensorio
