#include "asciitox/utf8.hpp"

#include <cstdint>
#include <cstdio>

#include "asciitox/errors.hpp"

namespace asciitox {

UnsupportedChar::UnsupportedChar(char32_t c, const std::string& context)
    : Error("unsupported character " + utf8::describe(c) +
            (context.empty() ? std::string{} : " (" + context + ")")),
      c_(c) {}

SchemaViolation::SchemaViolation(std::size_t line, const std::string& what)
    : Error("schema violation at line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace asciitox

namespace asciitox::utf8 {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// Returns the sequence length at `i`, or 0 if the bytes there are not valid UTF-8.
std::size_t sequence_at(std::string_view s, std::size_t i, char32_t& out) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        out = b0;
        return 1;
    }
    std::size_t len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return 0;
    }
    if (i + len > s.size()) return 0;
    for (std::size_t k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) return 0;
        cp = (cp << 6) | (b & 0x3F);
    }
    // overlong, surrogate, out of range
    static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
    out = cp;
    return len;
}

}  // namespace

std::u32string decode(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    while (i < bytes.size()) {
        char32_t cp = 0;
        const std::size_t n = sequence_at(bytes, i, cp);
        if (n == 0) {
            out.push_back(kReplacement);
            ++i;
        } else {
            out.push_back(cp);
            i += n;
        }
    }
    return out;
}

bool is_valid(std::string_view bytes) {
    std::size_t i = 0;
    while (i < bytes.size()) {
        char32_t cp = 0;
        const std::size_t n = sequence_at(bytes, i, cp);
        if (n == 0) return false;
        i += n;
    }
    return true;
}

std::u32string decode_latin1(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    for (char b : bytes) out.push_back(static_cast<unsigned char>(b));
    return out;
}

std::string encode(char32_t c) {
    std::string out;
    if (c < 0x80) {
        out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (c >> 6)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (c >> 12)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (c >> 18)));
        out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
    return out;
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t c : text) out += encode(c);
    return out;
}

std::size_t length(std::string_view bytes) {
    std::size_t n = 0;
    for (char b : bytes) {
        if ((static_cast<unsigned char>(b) & 0xC0) != 0x80) ++n;
    }
    return n;
}

std::string describe(char32_t c) {
    if (c >= 0x21 && c < 0x7F) return std::string("'") + static_cast<char>(c) + "'";
    char buf[16];
    std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(c));
    return buf;
}

}  // namespace asciitox::utf8
