#include "support.hpp"

namespace testing {

std::string make_flf(int height, const std::vector<std::pair<char, std::vector<std::string>>>& glyphs, char hardblank,
                     int space_width) {
    std::string out = std::string("flf2a") + hardblank + " " + std::to_string(height) + " " + std::to_string(height) +
                      " 20 -1 0\n";
    for (int code = 32; code < 127; ++code) {
        std::vector<std::string> rows(static_cast<std::size_t>(height));
        if (code == ' ') {
            for (auto& r : rows) r.assign(static_cast<std::size_t>(space_width), hardblank);
        }
        for (const auto& [c, g] : glyphs) {
            if (c == code) rows = g;
        }
        for (std::size_t r = 0; r < rows.size(); ++r) out += rows[r] + (r + 1 == rows.size() ? "@@\n" : "@\n");
    }
    return out;
}

}  // namespace testing
