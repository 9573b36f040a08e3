#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace llmcost {

/// A header plus rows with a fixed column count. Comment lines ("# ...") are
/// written before the header and carry run metadata.
class CsvTable {
public:
    CsvTable() = default;
    explicit CsvTable(std::vector<std::string> header);

    void add_comment(std::string text);
    void add_row(std::vector<std::string> row);  // throws if the width differs

    const std::vector<std::string>& header() const { return header_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    const std::vector<std::string>& comments() const { return comments_; }

    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::string> comments_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// 17 significant digits, round-trippable. Non-finite values become empty cells.
std::string format_number(double value);
std::string format_count(std::int64_t value);

}  // namespace llmcost
