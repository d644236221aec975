// SPDX-License-Identifier: Apache-2.0

#include "chaospend/census.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <vector>

namespace chaospend::census {

namespace {

std::vector<Fix32> operand_domain(unsigned max_int) {
    std::vector<Fix32> values;
    values.reserve(2u * (max_int + 1) * 100);
    for (const bool negative : {false, true}) {
        for (unsigned i = 0; i <= max_int; ++i) {
            for (unsigned f = 0; f < 100; ++f) values.push_back(Fix32::encode(negative, i, f));
        }
    }
    return values;
}

bool in_domain(Fix32 v, unsigned max_int) { return v.int_part() <= max_int && v.frac_part() <= 99; }

struct GzCloser {
    void operator()(gzFile f) const { gzclose(f); }
};
using GzHandle = std::unique_ptr<std::remove_pointer_t<gzFile>, GzCloser>;

// Line source over a plain or gzipped file.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path) : file_(gzopen(path.string().c_str(), "rb")) {
        if (!file_) throw std::runtime_error("cannot open census " + path.string());
        buf_.resize(256);
    }

    std::optional<std::string> next() {
        if (gzgets(file_.get(), buf_.data(), static_cast<int>(buf_.size())) == nullptr) return std::nullopt;
        std::string line(buf_.data());
        if (!line.empty() && line.back() == '\n') line.pop_back();
        return line;
    }

private:
    GzHandle file_;
    std::vector<char> buf_;
};

class LineWriter {
public:
    explicit LineWriter(const std::filesystem::path& path) {
        if (path.extension() == ".gz") {
            gz_.reset(gzopen(path.string().c_str(), "wb9"));
            if (!gz_) throw std::runtime_error("cannot write " + path.string());
        } else {
            plain_ = std::fopen(path.string().c_str(), "wb");
            if (plain_ == nullptr) throw std::runtime_error("cannot write " + path.string());
        }
    }
    ~LineWriter() {
        if (plain_ != nullptr) std::fclose(plain_);
    }
    LineWriter(const LineWriter&) = delete;
    LineWriter& operator=(const LineWriter&) = delete;

    void write(std::string_view line) {
        if (gz_) {
            gzwrite(gz_.get(), line.data(), static_cast<unsigned>(line.size()));
            gzputc(gz_.get(), '\n');
        } else {
            std::fwrite(line.data(), 1, line.size(), plain_);
            std::fputc('\n', plain_);
        }
    }

private:
    GzHandle gz_;
    std::FILE* plain_ = nullptr;
};

std::optional<std::uint32_t> parse_hex32(std::string_view s) {
    if (s.size() != 8) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

std::string_view to_string(Op op) {
    switch (op) {
        case Op::plus: return "plus";
        case Op::minus: return "minus";
        case Op::times: return "times";
        case Op::divide: return "divide";
    }
    return "?";
}

std::optional<Op> parse_op(std::string_view text) {
    for (const Op op : kOps) {
        if (to_string(op) == text) return op;
    }
    return std::nullopt;
}

std::string_view to_string(Family family) {
    switch (family) {
        case Family::equal_integer_mixed_sign: return "equal_integer_mixed_sign";
        case Family::fraction_borrow: return "fraction_borrow";
        case Family::unexplained: return "unexplained";
    }
    return "?";
}

std::string format_row(const Row& row) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s,%08X,%08X,%08X,%08X", std::string(to_string(row.op)).c_str(),
                  row.a.raw(), row.b.raw(), row.hw.raw(), row.ref.raw());
    return buf;
}

std::optional<Row> parse_row(std::string_view line) {
    std::array<std::string_view, 5> f{};
    std::size_t start = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto comma = line.find(',', start);
        if ((comma == std::string_view::npos) != (i == f.size() - 1)) return std::nullopt;
        f[i] = line.substr(start, comma - start);
        start = comma + 1;
    }
    const auto op = parse_op(f[0]);
    const auto a = parse_hex32(f[1]);
    const auto b = parse_hex32(f[2]);
    const auto hw = parse_hex32(f[3]);
    const auto ref = parse_hex32(f[4]);
    if (!op || !a || !b || !hw || !ref) return std::nullopt;
    return Row{*op, Fix32::from_raw(*a), Fix32::from_raw(*b), Fix32::from_raw(*hw), Fix32::from_raw(*ref)};
}

Family classify(const Row& row) {
    if (row.op == Op::plus || row.op == Op::minus) {
        // minus(a, b) is plus(a, neg(b)).
        const Fix32 b = row.op == Op::minus ? fixnum::neg(row.b) : row.b;
        if (row.a.negative() != b.negative() && row.a.int_part() == b.int_part() &&
            row.a.frac_part() < b.frac_part()) {
            return Family::equal_integer_mixed_sign;
        }
    }
    if (row.hw.frac_part() == 100) return Family::fraction_borrow;
    return Family::unexplained;
}

std::uint64_t Summary::divergences() const {
    std::uint64_t n = 0;
    for (const auto& s : ops) n += s.divergences;
    return n;
}

std::uint64_t Summary::unexplained() const {
    std::uint64_t n = 0;
    for (const auto& s : ops) n += s.unexplained;
    return n;
}

Summary sweep(unsigned max_int, const std::function<void(const Row&)>& on_divergence) {
    if (max_int > 255) throw std::invalid_argument("census max_int must be <= 255");
    const std::vector<Fix32> values = operand_domain(max_int);
    Summary summary;
    for (std::size_t k = 0; k < kOps.size(); ++k) {
        const Op op = kOps[k];
        OpSummary& s = summary.ops[k];
        for (const Fix32 a : values) {
            for (const Fix32 b : values) {
                ++s.pairs;
                FixResult hw;
                FixResult ref;
                switch (op) {
                    case Op::plus:
                        hw = fixnum::try_plus(Layer::hw, a, b);
                        ref = fixnum::try_plus(Layer::ref, a, b);
                        break;
                    case Op::minus:
                        hw = fixnum::try_minus(Layer::hw, a, b);
                        ref = fixnum::try_minus(Layer::ref, a, b);
                        break;
                    case Op::times:
                        hw = fixnum::try_times(Layer::hw, a, b);
                        ref = fixnum::try_times(Layer::ref, a, b);
                        break;
                    case Op::divide:
                        hw = fixnum::try_divide(Layer::hw, a, b);
                        ref = fixnum::try_divide(Layer::ref, a, b);
                        break;
                }
                if (!ref.ok() || !hw.ok()) {
                    ++s.ref_faults;
                    continue;
                }
                if (hw.value.hundredths() == ref.value.hundredths()) continue;
                const Row row{op, a, b, hw.value, ref.value};
                ++s.divergences;
                if (classify(row) == Family::unexplained) ++s.unexplained;
                on_divergence(row);
            }
        }
    }
    return summary;
}

Summary write_census(const std::filesystem::path& path, unsigned max_int) {
    LineWriter out(path);
    out.write(kHeader);
    return sweep(max_int, [&](const Row& row) { out.write(format_row(row)); });
}

Comparison compare_census(const std::filesystem::path& committed, unsigned max_int) {
    LineReader in(committed);
    Comparison result;

    std::uint64_t line_no = 1;
    const auto header = in.next();
    if (!header || *header != kHeader) {
        result.mismatch = Mismatch{1, header.value_or(""), std::string(kHeader)};
        return result;
    }

    // Next committed row inside the regenerated domain.
    const auto next_expected = [&]() -> std::optional<std::string> {
        while (auto line = in.next()) {
            ++line_no;
            const auto row = parse_row(*line);
            if (row && (!in_domain(row->a, max_int) || !in_domain(row->b, max_int))) continue;
            return line;
        }
        return std::nullopt;
    };

    result.summary = sweep(max_int, [&](const Row& row) {
        if (result.mismatch) return;
        const std::string actual = format_row(row);
        const auto expected = next_expected();
        if (!expected || *expected != actual) {
            result.mismatch = Mismatch{line_no, expected.value_or(""), actual};
            return;
        }
        ++result.rows_compared;
    });
    if (!result.mismatch) {
        if (auto extra = next_expected()) result.mismatch = Mismatch{line_no, *extra, ""};
    }
    return result;
}

}  // namespace chaospend::census
