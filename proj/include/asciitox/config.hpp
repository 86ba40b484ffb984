#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "asciitox/defense.hpp"

namespace asciitox {

/// Shared settings for the command-line tool. Empty paths mean "use the
/// bundled data directory".
struct Config {
    std::filesystem::path data_dir;
    std::filesystem::path font_dir;
    std::string vocab_preset = "all";
    DetectorParams params;
    double tau = kDefaultTau;
    std::filesystem::path lexicon_path;
    std::filesystem::path homoglyph_path;
    int parallelism = 1;
    std::uint64_t seed = 0;

    std::filesystem::path data() const;
    std::filesystem::path fonts() const;
    std::filesystem::path vocab_dir() const;
    std::filesystem::path lexicon() const;
    std::filesystem::path homoglyphs() const;

    /// Throws InvalidArgument on out-of-range values or missing paths.
    void validate() const;
};

/// Bundled data: $ASCIITOX_DATA_DIR, else the path fixed at build time.
std::filesystem::path default_data_dir();

/// `key = value` lines; '#' starts a comment. Unknown keys are rejected.
void apply_config_text(Config& config, std::string_view text);
void apply_config_file(Config& config, const std::filesystem::path& path);

/// Vocab named by config.vocab_preset; "all" merges every preset, "none" is empty.
Vocab load_config_vocab(const Config& config);

/// Builds the screening context (fonts, vocab, lexicon, inverse homoglyphs).
ScreenContext make_screen_context(const Config& config, std::vector<std::string>* warnings = nullptr);

}  // namespace asciitox
