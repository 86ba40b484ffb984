#include <algorithm>

#include "asciitox/errors.hpp"
#include "asciitox/font.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

namespace {
int checked_dim(int n) {
    if (n < 0) throw InvalidArgument("mask dimensions must be non-negative");
    return n;
}
}  // namespace

Mask::Mask(int height, int width)
    : height_(checked_dim(height)),
      width_(checked_dim(width)),
      cells_(static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_), 0) {}

std::size_t Mask::count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

Mask banner_mask(std::span<const std::string> lines) {
    std::vector<std::u32string> rows;
    rows.reserve(lines.size());
    std::size_t width = 0;
    for (const auto& line : lines) {
        rows.push_back(utf8::decode(line));
        width = std::max(width, rows.back().size());
    }
    Mask mask(static_cast<int>(rows.size()), static_cast<int>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            if (rows[r][c] != U' ') mask.set(static_cast<int>(r), static_cast<int>(c));
        }
    }
    return mask;
}

Mask glyph_mask(const Glyph& glyph) {
    Mask mask(glyph.height(), glyph.width());
    for (int r = 0; r < glyph.height(); ++r) {
        const auto& row = glyph.rows[static_cast<std::size_t>(r)];
        for (int c = 0; c < glyph.width(); ++c) {
            if (row[static_cast<std::size_t>(c)] != U' ') mask.set(r, c);
        }
    }
    return mask;
}

Mask downsample_mask(const Mask& mask, int k) {
    if (k < 1) throw InvalidArgument("downsample factor must be >= 1");
    const int h = (mask.height() + k - 1) / k;
    const int w = (mask.width() + k - 1) / k;
    Mask out(h, w);
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (mask.at(r, c)) out.set(r / k, c / k);
        }
    }
    return out;
}

std::vector<std::string> mask_lines(const Mask& mask, char on, char off) {
    std::vector<std::string> lines(static_cast<std::size_t>(mask.height()),
                                   std::string(static_cast<std::size_t>(mask.width()), off));
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (mask.at(r, c)) lines[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = on;
        }
    }
    return lines;
}

}  // namespace asciitox
