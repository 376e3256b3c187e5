#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rcr::io {

/// Shortest round-trip decimal representation; stable across runs.
std::string format_number(double value);

using Cell = std::variant<std::string, double, std::int64_t>;

/// Minimal RFC-4180 writer: CRLF line ends, fields quoted when they contain
/// a comma, quote, CR or LF.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void row(const std::vector<Cell>& cells);
    void header(const std::vector<std::string>& names);

private:
    std::ostream& out_;
};

std::string quote_field(std::string_view field);

}  // namespace rcr::io
