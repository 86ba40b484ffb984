#include <algorithm>

#include "asciitox/errors.hpp"
#include "asciitox/font.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

int Banner::width() const {
    std::size_t w = 0;
    for (const auto& line : lines) w = std::max(w, utf8::length(line));
    return static_cast<int>(w);
}

Banner render(std::string_view text, const Font& font, int letter_spacing) {
    if (letter_spacing < 0) throw InvalidArgument("letter_spacing must be non-negative");
    const std::u32string chars = utf8::decode(text);

    std::vector<const Glyph*> glyphs;
    glyphs.reserve(chars.size());
    for (char32_t c : chars) {
        const Glyph* g = (c >= 0x20 && c < 0x7F) ? font.find(c) : nullptr;
        // Zero-width blocks are how FIGlet files leave a character undefined.
        if (g == nullptr || g->height() != font.height || (g->width() == 0 && c != U' '))
            throw UnsupportedChar(c, "font " + font.id);
        glyphs.push_back(g);
    }

    const auto h = static_cast<std::size_t>(font.height);
    std::vector<std::u32string> rows(h);
    for (std::size_t i = 0; i < glyphs.size(); ++i) {
        for (std::size_t r = 0; r < h; ++r) {
            if (i > 0) rows[r].append(static_cast<std::size_t>(letter_spacing), U' ');
            rows[r] += glyphs[i]->rows[r];
        }
    }

    Banner banner;
    banner.font_id = font.id;
    banner.source_text = std::string(text);
    banner.lines.reserve(h);
    for (const auto& row : rows) banner.lines.push_back(utf8::encode(row));
    return banner;
}

std::string to_text(std::span<const std::string> lines) {
    std::size_t width = 0;
    for (const auto& line : lines) width = std::max(width, utf8::length(line));
    std::string out;
    for (const auto& line : lines) {
        out += line;
        out.append(width - utf8::length(line), ' ');
        out += '\n';
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = nl + 1;
    }
    return lines;
}

}  // namespace asciitox
