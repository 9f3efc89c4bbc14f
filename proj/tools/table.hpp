#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlrod::cli {

// Empty monostate prints as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_meta(const std::string& key, Cell value) { meta.emplace_back(key, std::move(value)); }
};

enum class Format { csv, json };

// Numbers are rounded to 12 significant digits before either emitter sees them.
std::string format_number(double v);
std::string render(const Table& t, Format f);

// Writes through a temporary file in the target directory and renames it into
// place. An empty path or "-" writes to stdout.
void write_output(const std::string& path, const std::string& content);

}  // namespace nlrod::cli
