// csv.hpp: locale-independent number formatting and a minimal CSV row writer

#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace phasedir {

// 15 significant digits, shortest of fixed/scientific, always '.' as separator.
inline std::string format_number(double value) {
    char buf[64];
    if (value == 0.0) value = 0.0;  // no "-0"
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

// Parses the whole of `text` as a double; nullopt on trailing garbage.
inline std::optional<double> parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

// Writes comma-separated rows terminated by '\n'.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out_ << ',';
            out_ << names[i];
        }
        out_ << '\n';
    }

    CsvWriter& cell(double value) {
        separate();
        out_ << format_number(value);
        return *this;
    }

    CsvWriter& cell(std::string_view text) {
        separate();
        out_ << text;
        return *this;
    }

    void end_row() {
        out_ << '\n';
        first_ = true;
    }

private:
    void separate() {
        if (!first_) out_ << ',';
        first_ = false;
    }

    std::ostream& out_;
    bool first_{true};
};

}  // namespace phasedir
