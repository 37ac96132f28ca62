#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace fedsust::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    // Column index by header name; throws ValidationError when absent.
    std::size_t column(const std::string& name) const;
};

// RFC 4180 subset: comma separator, double-quoted fields with "" escapes,
// no embedded newlines. Blank lines are skipped. A UTF-8 BOM is tolerated.
Table read(std::istream& in, const std::string& source_name);
Table read_file(const std::filesystem::path& path);

// Parses a decimal number occupying the whole field; reports source, line
// and column on failure.
double parse_number(const std::string& field, const std::string& source, std::size_t line,
                    const std::string& column);

}  // namespace fedsust::csv
