#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>

#include "asciitox/errors.hpp"
#include "asciitox/font.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

namespace {

constexpr char32_t kFirstCode = 32;
constexpr int kRequiredGlyphs = 95;  // code points 32..126

bool is_space(char32_t c) { return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == U'\f' || c == U'\v'; }

bool is_ascii_lower(char32_t c) { return c >= U'a' && c <= U'z'; }
bool is_ascii_upper(char32_t c) { return c >= U'A' && c <= U'Z'; }
char32_t to_upper(char32_t c) { return is_ascii_lower(c) ? c - 32 : c; }
char32_t to_lower(char32_t c) { return is_ascii_upper(c) ? c + 32 : c; }

std::vector<std::u32string> split_u32_lines(const std::u32string& text) {
    std::vector<std::u32string> lines;
    std::u32string cur;
    for (char32_t c : text) {
        if (c == U'\n') {
            if (!cur.empty() && cur.back() == U'\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) {
        if (cur.back() == U'\r') cur.pop_back();
        lines.push_back(std::move(cur));
    }
    return lines;
}

// FIGlet's rule: drop trailing whitespace, then the run of endmark characters.
std::u32string strip_endmark(const std::u32string& line) {
    std::size_t end = line.size();
    while (end > 0 && is_space(line[end - 1])) --end;
    if (end == 0) return {};
    const char32_t endmark = line[end - 1];
    while (end > 0 && line[end - 1] == endmark) --end;
    return line.substr(0, end);
}

bool ends_with_double_endmark(const std::u32string& line) {
    std::size_t end = line.size();
    while (end > 0 && is_space(line[end - 1])) --end;
    return end >= 2 && line[end - 1] == line[end - 2];
}

int parse_int(std::string_view tok, const char* field) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw MalformedHeader(std::string("header field ") + field + " is not an integer: '" +
                              std::string(tok) + "'");
    }
    return value;
}

}  // namespace

bool Glyph::blank() const noexcept {
    for (const auto& row : rows) {
        for (char32_t c : row) {
            if (c != U' ') return false;
        }
    }
    return true;
}

const Glyph* Font::find(char32_t c) const {
    if (auto it = glyphs.find(c); it != glyphs.end()) return &it->second;
    if (is_ascii_lower(c) && !has_lowercase) {
        if (auto it = glyphs.find(to_upper(c)); it != glyphs.end()) return &it->second;
    }
    return nullptr;
}

std::vector<char32_t> self_spelling_letters(const Font& font) {
    std::vector<char32_t> out;
    for (const auto& [c, glyph] : font.glyphs) {
        if (!is_ascii_lower(c) && !is_ascii_upper(c)) continue;
        bool any = false;
        bool only_self = true;
        for (const auto& row : glyph.rows) {
            for (char32_t cell : row) {
                if (cell == U' ') continue;
                any = true;
                if (to_upper(cell) != to_upper(c)) only_self = false;
            }
        }
        if (any && only_self) out.push_back(c);
    }
    return out;
}

Font parse_flf(std::string_view bytes, std::string id, const ParseOptions& options) {
    const std::u32string text = utf8::is_valid(bytes) ? utf8::decode(bytes) : utf8::decode_latin1(bytes);
    const auto lines = split_u32_lines(text);
    if (lines.empty()) throw MalformedHeader(id + ": empty file");

    const std::u32string& header = lines.front();
    static constexpr std::u32string_view kSignature = U"flf2a";
    if (header.size() < kSignature.size() + 1 || header.compare(0, kSignature.size(), kSignature) != 0) {
        throw MalformedHeader(id + ": missing flf2a signature");
    }

    Font font;
    font.id = std::move(id);
    font.hardblank = header[kSignature.size()];
    if (is_space(font.hardblank)) throw MalformedHeader(font.id + ": missing hardblank character");

    std::vector<std::string> fields;
    {
        std::istringstream in(utf8::encode(header.substr(kSignature.size() + 1)));
        std::string tok;
        while (in >> tok) fields.push_back(tok);
    }
    if (fields.size() < 5) throw MalformedHeader(font.id + ": header needs height, baseline, max_length, old_layout, comment_lines");
    font.height = parse_int(fields[0], "height");
    font.baseline = parse_int(fields[1], "baseline");
    font.max_length = parse_int(fields[2], "max_length");
    font.old_layout = parse_int(fields[3], "old_layout");
    const int comment_lines = parse_int(fields[4], "comment_lines");
    if (font.height < 1) throw MalformedHeader(font.id + ": height must be positive");
    if (comment_lines < 0) throw MalformedHeader(font.id + ": negative comment_lines");

    std::size_t pos = 1;
    const auto remaining = [&] { return lines.size() - std::min(lines.size(), pos); };
    if (remaining() < static_cast<std::size_t>(comment_lines)) {
        throw TruncatedGlyphTable(font.id + ": file ends inside the comment section");
    }
    for (int i = 0; i < comment_lines; ++i) font.comments.push_back(utf8::encode(lines[pos++]));

    const auto h = static_cast<std::size_t>(font.height);
    for (int g = 0; g < kRequiredGlyphs; ++g) {
        const char32_t code = kFirstCode + static_cast<char32_t>(g);
        if (remaining() < h) {
            throw TruncatedGlyphTable(font.id + ": only " + std::to_string(g) + " of 95 glyph blocks present");
        }
        // A block that closes early leaves its doubled endmark on an inner row.
        if (h > 1 && !ends_with_double_endmark(lines[pos + h - 1])) {
            for (std::size_t r = 0; r + 1 < h; ++r) {
                if (ends_with_double_endmark(lines[pos + r])) {
                    throw TruncatedGlyphTable(font.id + ": glyph " + utf8::describe(code) + " has " +
                                              std::to_string(r + 1) + " rows, header says " + std::to_string(h));
                }
            }
        }

        Glyph glyph;
        bool had_control = false;
        for (std::size_t r = 0; r < h; ++r) {
            std::u32string row = strip_endmark(lines[pos + r]);
            for (char32_t& c : row) {
                if (c == font.hardblank) {
                    c = U' ';
                } else if (c < 0x20 || c == 0x7F || (c >= 0x80 && c < 0xA0)) {
                    c = U' ';
                    had_control = true;
                }
            }
            glyph.rows.push_back(std::move(row));
        }
        pos += h;

        std::size_t width = 0;
        for (const auto& row : glyph.rows) width = std::max(width, row.size());
        bool ragged = false;
        for (auto& row : glyph.rows) {
            if (row.size() != width) {
                ragged = true;
                row.resize(width, U' ');
            }
        }
        if (ragged) font.warnings.push_back("RaggedGlyph: " + utf8::describe(code) + " rows padded to width " + std::to_string(width));
        if (had_control) font.warnings.push_back("control characters in glyph " + utf8::describe(code) + " replaced by spaces");
        font.glyphs.emplace(code, std::move(glyph));
    }

    // Case aliasing: a font that draws only one case serves both.
    bool lower_distinct = false;
    bool upper_distinct = false;
    for (char32_t c = U'A'; c <= U'Z'; ++c) {
        const Glyph& up = font.glyphs.at(c);
        const Glyph& lo = font.glyphs.at(to_lower(c));
        if (!lo.blank() && lo != up) lower_distinct = true;
        if (!up.blank() && lo != up) upper_distinct = true;
    }
    if (!lower_distinct) {
        for (char32_t c = U'A'; c <= U'Z'; ++c) font.glyphs[to_lower(c)] = font.glyphs.at(c);
        font.has_lowercase = false;
    } else if (!upper_distinct) {
        for (char32_t c = U'A'; c <= U'Z'; ++c) font.glyphs[c] = font.glyphs.at(to_lower(c));
        font.has_lowercase = true;
    } else {
        font.has_lowercase = true;
    }

    const auto leaking = self_spelling_letters(font);
    if (!leaking.empty()) {
        std::string list;
        for (char32_t c : leaking) list += utf8::encode(c);
        const std::string msg = font.id + ": glyphs drawn with their own letter: " + list;
        if (!options.allow_self_spelling) throw SelfSpellingFont(msg);
        font.warnings.push_back("SelfSpellingFont: " + msg);
    }
    return font;
}

std::string serialize_flf(const Font& font) {
    std::string out = "flf2a" + utf8::encode(font.hardblank) + " " + std::to_string(font.height) + " " +
                      std::to_string(font.baseline) + " " + std::to_string(font.max_length) + " " +
                      std::to_string(font.old_layout) + " " + std::to_string(font.comments.size()) + "\n";
    for (const auto& c : font.comments) out += c + "\n";

    const Glyph empty{std::vector<std::u32string>(static_cast<std::size_t>(font.height))};
    for (int g = 0; g < kRequiredGlyphs; ++g) {
        const char32_t code = kFirstCode + static_cast<char32_t>(g);
        auto it = font.glyphs.find(code);
        const Glyph& glyph = it != font.glyphs.end() ? it->second : empty;

        // The endmark must not coincide with a row's final cell.
        char32_t endmark = U'@';
        for (char32_t candidate : {U'@', U'#', U'$', U'%', U'&', U'!'}) {
            endmark = candidate;
            bool clash = candidate == font.hardblank;
            for (const auto& row : glyph.rows) {
                if (!row.empty() && row.back() == candidate) clash = true;
            }
            if (!clash) break;
        }
        for (int r = 0; r < font.height; ++r) {
            const std::u32string row = r < glyph.height() ? glyph.rows[static_cast<std::size_t>(r)] : std::u32string{};
            out += utf8::encode(row);
            out += utf8::encode(endmark);
            if (r + 1 == font.height) out += utf8::encode(endmark);
            out += "\n";
        }
    }
    return out;
}

Font load_font_file(const std::filesystem::path& path, const ParseOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open font file " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_flf(bytes, path.stem().string(), options);
}

const Font* FontLibrary::find(std::string_view id) const {
    for (const auto& f : fonts) {
        if (f.id == id) return &f;
    }
    return nullptr;
}

FontLibrary load_font_dir(const std::filesystem::path& dir, const ParseOptions& options) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".flf") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    FontLibrary lib;
    for (const auto& path : files) {
        try {
            lib.fonts.push_back(load_font_file(path, options));
        } catch (const Error& e) {
            lib.errors.push_back({path, e.what()});
        }
    }
    if (lib.fonts.empty()) throw NoFontsFound("no loadable .flf fonts in " + dir.string());
    std::sort(lib.fonts.begin(), lib.fonts.end(), [](const Font& a, const Font& b) { return a.id < b.id; });
    return lib;
}

}  // namespace asciitox
