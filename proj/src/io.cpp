#include "rcr/io.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace rcr::io {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string quote_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string q = "\"";
    for (char c : field) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    std::vector<Cell> cells(names.begin(), names.end());
    row(cells);
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    bool first = true;
    for (const auto& cell : cells) {
        if (!first) out_ << ',';
        first = false;
        if (const auto* s = std::get_if<std::string>(&cell)) {
            out_ << quote_field(*s);
        } else if (const auto* d = std::get_if<double>(&cell)) {
            out_ << format_number(*d);
        } else {
            out_ << std::get<std::int64_t>(cell);
        }
    }
    out_ << "\r\n";
}

}  // namespace rcr::io
