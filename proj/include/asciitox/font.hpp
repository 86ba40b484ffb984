#pragma once

// ASCII-art fonts in the FIGlet .flf format: parsing, serialization,
// full-width rendering, and the binary masks every defense works on.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asciitox {

/// One character's picture. Rows are cell strings of identical length.
struct Glyph {
    std::vector<std::u32string> rows;

    int height() const noexcept { return static_cast<int>(rows.size()); }
    int width() const noexcept { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
    bool blank() const noexcept;

    friend bool operator==(const Glyph&, const Glyph&) = default;
};

/// A parsed ASCII-art font. Only full-width layout is honoured; the layout
/// fields of the header are retained for serialization but never applied.
struct Font {
    std::string id;
    int height = 0;
    char32_t hardblank = U'$';
    int baseline = 0;
    int max_length = 0;
    int old_layout = 0;
    std::vector<std::string> comments;
    std::map<char32_t, Glyph> glyphs;
    bool has_lowercase = false;
    std::vector<std::string> warnings;

    /// Glyph for `c`, uppercasing ASCII lowercase letters when the font
    /// carries no distinct lowercase set.
    const Glyph* find(char32_t c) const;
};

/// Letters (either case) whose glyph is drawn exclusively with that letter.
std::vector<char32_t> self_spelling_letters(const Font& font);

struct ParseOptions {
    /// Load fonts that violate the anti-leak rule, recording a warning
    /// instead of throwing SelfSpellingFont.
    bool allow_self_spelling = false;
};

/// Parse a FIGlet font. Throws MalformedHeader, TruncatedGlyphTable or
/// SelfSpellingFont. Ragged rows are padded and reported in Font::warnings.
Font parse_flf(std::string_view bytes, std::string id, const ParseOptions& options = {});

/// Full-width FLF text for `font`; parse_flf(serialize_flf(f)) is
/// glyph-identical to f, and the output is a fixed point of parse/serialize.
std::string serialize_flf(const Font& font);

Font load_font_file(const std::filesystem::path& path, const ParseOptions& options = {});

struct FontLoadError {
    std::filesystem::path path;
    std::string message;
};

struct FontLibrary {
    std::vector<Font> fonts;  // sorted by id
    std::vector<FontLoadError> errors;

    const Font* find(std::string_view id) const;
};

/// Parses every *.flf in `dir`. Per-file failures are collected; throws
/// NoFontsFound if none parse and IoError if `dir` is not a directory.
FontLibrary load_font_dir(const std::filesystem::path& dir, const ParseOptions& options = {});

inline constexpr int kDefaultLetterSpacing = 1;

/// Rendered ASCII art. `source_text` is kept for tests and never written
/// into payloads.
struct Banner {
    std::vector<std::string> lines;
    std::string font_id;
    std::string source_text;

    int height() const noexcept { return static_cast<int>(lines.size()); }
    int width() const;  // in cells
};

/// Throws UnsupportedChar for characters the font has no glyph for.
Banner render(std::string_view text, const Font& font, int letter_spacing = kDefaultLetterSpacing);

/// Lines right-padded to a common width, each terminated by '\n'.
std::string to_text(std::span<const std::string> lines);
inline std::string to_text(const Banner& banner) { return to_text(banner.lines); }

/// Splits on '\n'; a trailing newline does not open a new line, '\r' is dropped.
std::vector<std::string> split_lines(std::string_view text);

class Mask {
public:
    Mask() = default;
    Mask(int height, int width);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    bool empty() const noexcept { return height_ == 0 || width_ == 0; }

    bool at(int row, int col) const { return cells_[index(row, col)] != 0; }
    void set(int row, int col, bool on = true) { cells_[index(row, col)] = on ? 1 : 0; }

    std::size_t count() const;

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// A cell is on iff it holds anything other than a space. Ragged input is
/// right-padded.
Mask banner_mask(std::span<const std::string> lines);
inline Mask banner_mask(const Banner& banner) { return banner_mask(banner.lines); }
Mask glyph_mask(const Glyph& glyph);

/// Max-pooling over k x k tiles, partial edge tiles included.
Mask downsample_mask(const Mask& mask, int k);

std::vector<std::string> mask_lines(const Mask& mask, char on = '#', char off = ' ');

}  // namespace asciitox
