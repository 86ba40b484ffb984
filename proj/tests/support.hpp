#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "asciitox/font.hpp"

namespace testing {

inline std::filesystem::path env_path(const char* name, const char* fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? std::filesystem::path(v) : std::filesystem::path(fallback);
}

inline std::filesystem::path data_dir() { return env_path("ASCIITOX_DATA_DIR", "data"); }
inline std::filesystem::path test_data() { return env_path("ASCIITOX_TEST_DATA", "tests/data"); }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) {
        if (!l.empty() && l.front() != '#') out.push_back(l);
    }
    return out;
}

inline const asciitox::Font& testfont() {
    static const asciitox::Font f = asciitox::load_font_file(test_data() / "fonts" / "testfont.flf");
    return f;
}

inline std::string upper(std::string s) {
    for (char& c : s) {
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 32);
    }
    return s;
}

/// Builds FLF text with the given letter glyphs (others left undefined).
std::string make_flf(int height, const std::vector<std::pair<char, std::vector<std::string>>>& glyphs,
                     char hardblank = '$', int space_width = 2);

}  // namespace testing
