#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asciitox/attack.hpp"
#include "asciitox/decode.hpp"
#include "asciitox/font.hpp"
#include "asciitox/segmenter.hpp"

namespace asciitox {

// ---------------------------------------------------------------------------
// Art detection

struct DetectorParams {
    int min_len = 8;       // shortest line that can be arty
    double density = 0.6;  // share of symbol characters among non-space ones
    int run_len = 4;       // run of one repeated symbol that marks a line arty
    int window = 3;        // consecutive arty lines needed

    /// Throws InvalidArgument when a field is outside its documented range.
    void validate() const;
};

enum class DetectionTrigger { none, density, run };

struct DetectionResult {
    bool is_art = false;
    int arty_line_count = 0;  // longest streak of arty lines
    DetectionTrigger trigger = DetectionTrigger::none;
    std::optional<std::pair<int, int>> window;  // first/last line of the flagged streak
};

DetectionResult detect_art(std::string_view text, const DetectorParams& params = {});

const char* to_string(DetectionTrigger t);

// ---------------------------------------------------------------------------
// Normalisation and recovery

/// Collapses special-token art back into a '#' banner: each token becomes
/// one cell and each run of spaces shrinks by the dominant token length.
Banner split_special(std::string_view text, const Vocab& vocab);

/// Every non-space character in row-major order.
std::string extract_filler(std::span<const std::string> lines);

// ---------------------------------------------------------------------------
// Lexicon

/// Lowercase terms; multi-word terms are matched as contiguous word runs.
class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::vector<std::string> terms, std::string version = {});

    const std::vector<std::string>& terms() const noexcept { return terms_; }
    const std::string& version() const noexcept { return version_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// Terms found as whole-word sequences in `words`.
    std::vector<std::string> match_words(const std::vector<std::string>& words) const;
    /// Terms whose space-free form occurs anywhere in `letters`.
    std::vector<std::string> match_fused(std::string_view letters) const;

private:
    std::vector<std::string> terms_;
    std::vector<std::vector<std::string>> split_;
    std::vector<std::string> fused_;
    std::string version_;
};

Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::filesystem::path& path);

/// Inverse-homoglyph mapping, then ASCII lowercase; anything outside a-z
/// separates words.
std::vector<std::string> lexicon_words(std::string_view text, const HomoglyphTable& inverse);
std::string lexicon_letters(std::string_view text, const HomoglyphTable& inverse);

// ---------------------------------------------------------------------------
// Screening pipeline

enum class Channel { surface, decoded, filler };
const char* to_string(Channel c);

struct Verdict {
    bool toxic = false;
    std::vector<std::string> matched_terms;
    Channel channel = Channel::surface;
};

struct ScreenContext {
    GlyphIndex fonts;
    Vocab vocab;
    Lexicon lexicon;
    HomoglyphTable inverse_homoglyphs;
    DetectorParams params;
    double tau = kDefaultTau;
    /// Also attempt a decode on input of two or more non-blank lines that the
    /// detector does not flag, so filled fonts (which read as prose) and
    /// short banners still reach the decoder.
    bool decode_multiline = true;
};

struct ScreenReport {
    std::vector<Verdict> verdicts;  // surface first, then decoded and filler when evaluated
    DetectionResult detection;
    bool special_tokens = false;
    std::optional<Decoded> decoded;
    std::vector<std::string> warnings;

    bool toxic() const;
    /// Art by the detector, special-token structure, or an exact glyph decode.
    bool art() const;
};

ScreenReport screen(std::string_view text, const ScreenContext& ctx);

/// OpenMP-parallel over documents; identical output to screen_batch_serial.
std::vector<ScreenReport> screen_batch(std::span<const std::string> texts, const ScreenContext& ctx);
std::vector<ScreenReport> screen_batch_serial(std::span<const std::string> texts, const ScreenContext& ctx);

}  // namespace asciitox
