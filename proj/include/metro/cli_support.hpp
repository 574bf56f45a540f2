#pragma once

#include "metro/common.hpp"

#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace metro {

// Flat key=value configuration file: one pair per line, '#' comments,
// blank lines ignored. Keys name long options without the leading dashes.
inline std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string body = strip(line);
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw UsageError("config file " + path + ": line " + std::to_string(lineno) +
                             " is not key=value");
        const std::string key = strip(body.substr(0, eq));
        const std::string value = strip(body.substr(eq + 1));
        if (key.empty()) throw UsageError("config file " + path + ": empty key on line " +
                                          std::to_string(lineno));
        pairs.emplace_back(key, value);
    }
    return pairs;
}

// Splices `--config FILE` into ordinary long options. The expansion is
// inserted before the first flag so that explicit command-line flags,
// parsed with a take-last policy, override file values regardless of
// where --config appeared.
inline std::vector<std::string> expand_config_tokens(std::vector<std::string> args) {
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config requires a file path");
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_path.empty()) return rest;

    std::vector<std::string> expanded;
    for (const auto& [key, value] : parse_config_file(config_path))
        expanded.push_back("--" + key + "=" + value);

    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < rest.size() && !rest[i].empty() && rest[i][0] != '-') out.push_back(rest[i++]);
    out.insert(out.end(), expanded.begin(), expanded.end());
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(i), rest.end());
    return out;
}

}  // namespace metro
