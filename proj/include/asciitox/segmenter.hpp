#pragma once

// Special-token-aware segmentation. Models only what matters for special
// tokens: each registered token is one unit, everything else is an opaque
// literal span.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace asciitox {

/// Registered special tokens of one tokenizer family.
class Vocab {
public:
    Vocab() = default;
    /// Throws BadVocab on empty tokens or tokens containing a newline.
    /// Duplicates are dropped, first occurrence wins.
    Vocab(std::string id, std::vector<std::string> tokens, std::string version = {});

    const std::string& id() const noexcept { return id_; }
    const std::string& version() const noexcept { return version_; }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    bool empty() const noexcept { return tokens_.empty(); }
    bool contains(std::string_view token) const;

    /// First token listed; for the bundled presets this is the token the
    /// special-token font is built from.
    const std::string& primary() const;

    /// Longest token that is a prefix of `text`, or empty view.
    std::string_view longest_match(std::string_view text) const;

private:
    std::string id_;
    std::string version_;
    std::vector<std::string> tokens_;
    std::vector<std::string> by_length_;  // longest first
};

/// One token per line, '#' starts a comment line and `# version: X` sets the
/// version. Id defaults to the file stem.
Vocab load_vocab_file(const std::filesystem::path& path, std::string id = {});
Vocab parse_vocab(std::string_view text, std::string id);

/// Loads `<dir>/<id>.txt`. Throws BadVocab if absent.
Vocab load_vocab_preset(const std::filesystem::path& dir, std::string_view id);
std::vector<std::string> list_vocab_presets(const std::filesystem::path& dir);

/// Union of several vocabs, id joined with '+'.
Vocab merge_vocabs(const std::vector<Vocab>& vocabs);

enum class SegmentKind { special, literal, newline };

struct Segment {
    SegmentKind kind;
    std::string text;
    int line = 0;
    int char_col = 0;     // code points from the start of the line
    int token_index = 0;  // position in the emitted stream

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Greedy longest-match, left to right. Concatenating the texts of the
/// result reproduces `text` exactly.
std::vector<Segment> segment(std::string_view text, const Vocab& vocab);

std::string join_segments(const std::vector<Segment>& segments);

struct LineColumns {
    std::vector<int> char_cols;      // start column of each special segment
    std::vector<int> token_indices;  // its index among the line's segments
    std::vector<int> widths;         // its length in characters
};

struct AlignmentReport {
    std::vector<LineColumns> lines;
    std::vector<int> special_counts;  // per line

    /// Every special token's character span overlaps a special token on
    /// another line: the art's vertical structure lives in character space.
    bool columns_aligned = true;
    /// Whether per-line token indices determine character columns. False for
    /// any art whose rows place tokens differently.
    bool token_index_carries_columns = true;
    /// Every special segment advances the token index by exactly one while
    /// advancing the column by its full width.
    bool unit_advance = true;
};

/// Throws NotArt when `art` holds no special token.
AlignmentReport alignment_report(std::string_view art, const Vocab& vocab);

}  // namespace asciitox
