#pragma once

// Template-matching decoder: recovers the plaintext a banner mask spells by
// matching it against the letter glyphs of known fonts.
//
// Per font, the mask is first split into ink runs at blank columns and
// parsed exactly (a glyph may span several runs when it has internal gaps).
// When no exact parse exists (touching glyphs, approximate art) a column
// dynamic program covers every ink column with the glyph sequence of least
// cell disagreement. Word spaces are inferred from the blank gaps between
// placed glyphs. Ties prefer wider glyphs, then alphabetical order.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asciitox/font.hpp"

namespace asciitox {

inline constexpr double kDefaultTau = 0.9;
inline constexpr int kMaxDecodeHeight = 64;

struct Decoded {
    std::string text;  // uppercase letters, spaces, '?' for glyphs below tau
    std::string font_id;
    std::vector<double> per_glyph_scores;  // one per character of text
    double confidence = 0.0;               // mean of per_glyph_scores
    bool exact = false;                    // every glyph matched cell for cell
};

/// Ink-trimmed letter template of one font.
struct GlyphTemplate {
    char32_t source = 0;  // the font character it came from
    char letter = 0;      // uppercase A-Z
    int lead = 0;         // blank columns left of the ink
    int trail = 0;        // blank columns right of the ink
    int top = 0;          // first inked row
    std::vector<std::uint64_t> columns;  // bit r set = row r inked

    int width() const noexcept { return static_cast<int>(columns.size()); }
};

struct FontModel {
    std::string id;
    int height = 0;
    int space_width = 0;
    std::vector<GlyphTemplate> glyphs;  // sorted: wider first, then letter, then source
    std::vector<int> offsets;           // candidate top rows of a trimmed mask
};

/// Decoder-ready templates for a list of fonts. Fonts taller than
/// kMaxDecodeHeight are skipped.
class GlyphIndex {
public:
    GlyphIndex() = default;
    explicit GlyphIndex(std::span<const Font> fonts);

    const std::vector<FontModel>& models() const noexcept { return models_; }
    bool empty() const noexcept { return models_.empty(); }

private:
    std::vector<FontModel> models_;
};

FontModel build_font_model(const Font& font);

/// OpenMP-parallel over candidate fonts. Throws EmptyMask or NoCompatibleFont.
Decoded decode(const Mask& mask, const GlyphIndex& index, double tau = kDefaultTau);
Decoded decode(const Mask& mask, std::span<const Font> fonts, double tau = kDefaultTau);

/// Single-threaded reference; must agree with decode() exactly.
Decoded decode_serial(const Mask& mask, const GlyphIndex& index, double tau = kDefaultTau);

struct GlyphCollision {
    char32_t first;
    char32_t second;
};

/// Pairs of distinct letters whose inked cells coincide; decode cannot tell
/// them apart in this font.
std::vector<GlyphCollision> collision_audit(const Font& font);

}  // namespace asciitox
