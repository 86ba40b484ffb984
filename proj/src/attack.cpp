#include "asciitox/attack.hpp"

#include <fstream>
#include <iterator>
#include <set>

#include "asciitox/errors.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

namespace {

bool is_whitespace(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0x00A0 ||
           c == 0x2028 || c == 0x2029 || c == 0x3000 || (c >= 0x2000 && c <= 0x200B);
}

}  // namespace

SpecialBanner synth_special(const Banner& banner, std::string_view token) {
    const std::u32string cells = utf8::decode(token);
    if (cells.empty()) throw BadToken("special token is empty");
    for (char32_t c : cells) {
        if (is_whitespace(c)) throw BadToken("special token contains whitespace: '" + std::string(token) + "'");
    }
    const std::size_t len = cells.size();
    const Mask mask = banner_mask(banner);

    SpecialBanner out;
    out.token = std::string(token);
    out.base_font_id = banner.font_id;
    out.lines.reserve(static_cast<std::size_t>(mask.height()));
    for (int r = 0; r < mask.height(); ++r) {
        std::string line;
        line.reserve(static_cast<std::size_t>(mask.width()) * token.size());
        for (int c = 0; c < mask.width(); ++c) {
            if (mask.at(r, c)) {
                line += token;
            } else {
                line.append(len, ' ');
            }
        }
        out.lines.push_back(std::move(line));
    }
    return out;
}

std::u32string normalize_filler(std::string_view filler) {
    std::u32string out;
    for (char32_t c : utf8::decode(filler)) {
        if (!is_whitespace(c)) out.push_back(c);
    }
    return out;
}

FilledBanner synth_filled(std::string_view text, const Font& font, std::string_view filler, int letter_spacing) {
    const std::u32string stream = normalize_filler(filler);
    if (stream.empty()) throw EmptyFiller("filler has no non-space characters");

    const Banner base = render(text, font, letter_spacing);
    const Mask mask = banner_mask(base);

    FilledBanner out;
    out.filler_source = std::string(filler);
    out.base_font_id = font.id;
    std::size_t k = 0;
    for (int r = 0; r < mask.height(); ++r) {
        std::u32string row(static_cast<std::size_t>(mask.width()), U' ');
        for (int c = 0; c < mask.width(); ++c) {
            if (mask.at(r, c)) row[static_cast<std::size_t>(c)] = stream[k++ % stream.size()];
        }
        out.lines.push_back(utf8::encode(row));
    }
    return out;
}

HomoglyphTable::HomoglyphTable(std::map<char32_t, char32_t> mapping, std::string version)
    : mapping_(std::move(mapping)), version_(std::move(version)) {}

bool HomoglyphTable::injective() const {
    std::set<char32_t> seen;
    for (const auto& [from, to] : mapping_) {
        if (!seen.insert(to).second) return false;
    }
    return true;
}

HomoglyphTable HomoglyphTable::inverse() const {
    std::map<char32_t, char32_t> inv;
    for (const auto& [from, to] : mapping_) {
        if (!inv.emplace(to, from).second) throw InvalidArgument("homoglyph table is not injective");
    }
    return HomoglyphTable(std::move(inv), version_);
}

HomoglyphTable parse_homoglyph_table(std::string_view text) {
    std::map<char32_t, char32_t> mapping;
    std::string version;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.front() == '#' && (line.size() < 2 || line[1] != '\t')) {
            static constexpr std::string_view kVersion = "# version:";
            if (line.substr(0, kVersion.size()) == kVersion) {
                std::string_view v = line.substr(kVersion.size());
                while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
                version = std::string(v);
            }
            continue;
        }
        const std::u32string cells = utf8::decode(line);
        if (cells.size() != 3 || cells[1] != U'\t') {
            throw InvalidArgument("homoglyph table line " + std::to_string(line_no) + ": expected <char>\\t<replacement>");
        }
        mapping[cells[0]] = cells[2];
    }
    return HomoglyphTable(std::move(mapping), std::move(version));
}

HomoglyphTable load_homoglyph_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open homoglyph table " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_homoglyph_table(bytes);
}

std::string char_swap(std::string_view text, const HomoglyphTable& table) {
    std::u32string cells = utf8::decode(text);
    for (char32_t& c : cells) {
        if (auto it = table.mapping().find(c); it != table.mapping().end()) c = it->second;
    }
    return utf8::encode(cells);
}

}  // namespace asciitox
