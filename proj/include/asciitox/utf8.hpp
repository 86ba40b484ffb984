#pragma once

#include <string>
#include <string_view>

namespace asciitox::utf8 {

// Invalid sequences decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

bool is_valid(std::string_view bytes);

// Bytes as ISO-8859-1 code points.
std::u32string decode_latin1(std::string_view bytes);

// Number of code points.
std::size_t length(std::string_view bytes);

// Display form for diagnostics: printable ASCII as-is, everything else U+XXXX.
std::string describe(char32_t c);

}  // namespace asciitox::utf8
