#pragma once

// Payload synthesis: special-token fonts, text-filled fonts, and the
// homoglyph substitution baseline.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asciitox/font.hpp"

namespace asciitox {

/// Banner whose ink cells are each one copy of a special token.
struct SpecialBanner {
    std::vector<std::string> lines;
    std::string token;
    std::string base_font_id;
};

/// Banner whose ink cells carry filler text, read row-major.
struct FilledBanner {
    std::vector<std::string> lines;
    std::string filler_source;
    std::string base_font_id;
};

/// Scales every cell by the token length L: ink becomes the token, blank
/// becomes L spaces. Throws BadToken for empty tokens or tokens with
/// whitespace.
SpecialBanner synth_special(const Banner& banner, std::string_view token);

/// Filler with all whitespace removed; case and punctuation kept.
std::u32string normalize_filler(std::string_view filler);

/// Renders `text` and writes the normalized filler, cycled, into the ink
/// cells row-major across the whole banner. Throws EmptyFiller.
FilledBanner synth_filled(std::string_view text, const Font& font, std::string_view filler,
                          int letter_spacing = kDefaultLetterSpacing);

/// Single code point to single code point substitution table.
class HomoglyphTable {
public:
    HomoglyphTable() = default;
    explicit HomoglyphTable(std::map<char32_t, char32_t> mapping, std::string version = {});

    const std::map<char32_t, char32_t>& mapping() const noexcept { return mapping_; }
    const std::string& version() const noexcept { return version_; }
    bool injective() const;

    /// Replacement -> original. Throws InvalidArgument if not injective.
    HomoglyphTable inverse() const;

private:
    std::map<char32_t, char32_t> mapping_;
    std::string version_;
};

/// Lines of `<char>\t<replacement>`; lines starting with '#' (not followed by
/// a tab) are comments, and a `# version: X` comment sets the version.
HomoglyphTable parse_homoglyph_table(std::string_view text);
HomoglyphTable load_homoglyph_table(const std::filesystem::path& path);

std::string char_swap(std::string_view text, const HomoglyphTable& table);

}  // namespace asciitox
