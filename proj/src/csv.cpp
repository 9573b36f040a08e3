#include "llmcost/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace llmcost {

namespace {

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << quote(fields[i]);
    }
    out << '\n';
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_comment(std::string text) { comments_.push_back(std::move(text)); }

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) {
        throw std::logic_error("csv row has " + std::to_string(row.size()) + " fields, header has " +
                               std::to_string(header_.size()));
    }
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const {
    for (const auto& c : comments_) out << "# " << c << '\n';
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
}

std::string CsvTable::str() const {
    std::ostringstream s;
    write(s);
    return s.str();
}

std::string format_number(double value) {
    if (!std::isfinite(value)) return {};
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, end);
}

std::string format_count(std::int64_t value) { return std::to_string(value); }

}  // namespace llmcost
