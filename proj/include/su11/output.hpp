#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace su11 {

enum class OutputFormat { Csv, JsonLines };

OutputFormat parse_output_format(const std::string& name);

using Cell = std::variant<double, std::int64_t, std::string>;

/// Shortest round-trip decimal form; non-finite values print as inf, -inf, nan.
std::string format_double(double v);

/// Streams rows as CSV (single header row, RFC 4180 quoting) or JSON Lines
/// (one object per row, non-finite numbers as strings).
class RowWriter {
public:
    RowWriter(std::ostream& os, OutputFormat format, std::vector<std::string> columns);

    void write(const std::vector<Cell>& row);
    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::ostream& os_;
    OutputFormat format_;
    std::vector<std::string> columns_;
    bool header_done_ = false;
};

} // namespace su11
