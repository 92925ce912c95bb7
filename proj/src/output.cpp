#include "su11/output.hpp"

#include "su11/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>

namespace su11 {

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "jsonl") return OutputFormat::JsonLines;
    throw InvalidParameter("unknown output format '" + name + "' (expected csv or jsonl)");
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

} // namespace

RowWriter::RowWriter(std::ostream& os, OutputFormat format, std::vector<std::string> columns)
    : os_(os), format_(format), columns_(std::move(columns)) {}

void RowWriter::write(const std::vector<Cell>& row) {
    if (row.size() != columns_.size()) throw ContractViolation("row width does not match the column set");
    if (format_ == OutputFormat::Csv) {
        if (!header_done_) {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                os_ << (i ? "," : "") << csv_field(columns_[i]);
            os_ << "\r\n";
            header_done_ = true;
        }
        for (std::size_t i = 0; i < row.size(); ++i) os_ << (i ? "," : "") << csv_field(cell_text(row[i]));
        os_ << "\r\n";
        return;
    }
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
        const auto& c = row[i];
        if (const auto* d = std::get_if<double>(&c)) {
            if (std::isfinite(*d))
                obj[columns_[i]] = *d;
            else
                obj[columns_[i]] = format_double(*d);
        } else if (const auto* n = std::get_if<std::int64_t>(&c)) {
            obj[columns_[i]] = *n;
        } else {
            obj[columns_[i]] = std::get<std::string>(c);
        }
    }
    os_ << obj.dump() << '\n';
}

} // namespace su11
