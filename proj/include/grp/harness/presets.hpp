#pragma once

// Named problem files: <dir>/<name>.cfg

#include <filesystem>

#include "grp/harness/config.hpp"

namespace grp::harness {

inline std::vector<std::string> list_presets(const std::string& dir) {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(dir, ec))
        if (e.is_regular_file() && e.path().extension() == ".cfg") out.push_back(e.path().stem().string());
    if (ec) throw ConfigError("cannot read preset directory '" + dir + "'");
    std::sort(out.begin(), out.end());
    return out;
}

inline ProblemConfig load_preset(const std::string& dir, const std::string& name) {
    const auto path = std::filesystem::path(dir) / (name + ".cfg");
    if (!std::filesystem::exists(path)) throw ConfigError("unknown preset '" + name + "'");
    ProblemConfig c = load_config_file(path.string());
    if (c.name.empty()) c.name = name;
    return c;
}

}  // namespace grp::harness
