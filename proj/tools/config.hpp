#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nlrod::cli {

// Flat key=value file. Blank lines and lines starting with '#' are skipped;
// whitespace around keys and values is trimmed.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path);

// Appends "--key=value" for every config entry whose option was not given on
// the command line. Command-line values win.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::pair<std::string, std::string>>& entries);

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlrod::cli
