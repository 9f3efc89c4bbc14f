#include "table.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>

namespace nlrod::cli {

namespace {

double rounded(double v) {
    std::string s = fmt::format("{:.12g}", v);
    double out = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out == 0.0 ? 0.0 : out;
}

std::string csv_field(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        double v = std::get<double>(c);
        return std::isfinite(v) ? format_number(v) : "";
    }
    if (std::holds_alternative<long long>(c))
        return std::to_string(std::get<long long>(c));
    if (std::holds_alternative<std::string>(c)) {
        const auto& s = std::get<std::string>(c);
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char ch : s)
            q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    }
    return "";
}

nlohmann::ordered_json json_value(const Cell& c) {
    if (std::holds_alternative<double>(c)) {
        double v = std::get<double>(c);
        if (!std::isfinite(v))
            return nullptr;
        return rounded(v);
    }
    if (std::holds_alternative<long long>(c))
        return std::get<long long>(c);
    if (std::holds_alternative<std::string>(c))
        return std::get<std::string>(c);
    return nullptr;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.12g}", v == 0.0 ? 0.0 : v); }

std::string render(const Table& t, Format f) {
    if (f == Format::csv) {
        std::string out;
        for (std::size_t i = 0; i < t.columns.size(); ++i)
            out += (i ? "," : "") + t.columns[i];
        out += "\n";
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out += (i ? "," : "") + csv_field(row[i]);
            out += "\n";
        }
        return out;
    }
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta)
        doc["meta"][k] = json_value(v);
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i)
            r[t.columns[i]] = json_value(row[i]);
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content << std::flush;
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::random_device rd;
    fs::path tmp = dir / fmt::format(".{}.{:08x}.tmp", target.filename().string(), rd());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place at " + path);
    }
}

}  // namespace nlrod::cli
