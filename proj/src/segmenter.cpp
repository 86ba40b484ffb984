#include "asciitox/segmenter.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>

#include "asciitox/errors.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

Vocab::Vocab(std::string id, std::vector<std::string> tokens, std::string version)
    : id_(std::move(id)), version_(std::move(version)) {
    for (auto& t : tokens) {
        if (t.empty()) throw BadVocab("vocab " + id_ + ": empty token");
        if (t.find('\n') != std::string::npos || t.find('\r') != std::string::npos) {
            throw BadVocab("vocab " + id_ + ": token contains a newline");
        }
        if (std::find(tokens_.begin(), tokens_.end(), t) == tokens_.end()) tokens_.push_back(std::move(t));
    }
    by_length_ = tokens_;
    std::stable_sort(by_length_.begin(), by_length_.end(),
                     [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
}

bool Vocab::contains(std::string_view token) const {
    return std::find(tokens_.begin(), tokens_.end(), token) != tokens_.end();
}

const std::string& Vocab::primary() const {
    if (tokens_.empty()) throw BadVocab("vocab " + id_ + " is empty");
    return tokens_.front();
}

std::string_view Vocab::longest_match(std::string_view text) const {
    for (const auto& t : by_length_) {
        if (text.substr(0, t.size()) == t) return std::string_view(t);
    }
    return {};
}

Vocab parse_vocab(std::string_view text, std::string id) {
    constexpr std::string_view kVersionTag = "# version:";
    std::vector<std::string> tokens;
    std::string version;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.substr(0, kVersionTag.size()) == kVersionTag) {
            line.remove_prefix(kVersionTag.size());
            while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            version = std::string(line);
        } else if (!line.empty() && line.front() != '#') {
            tokens.emplace_back(line);
        }
        start = nl + 1;
    }
    return Vocab(std::move(id), std::move(tokens), std::move(version));
}

Vocab load_vocab_file(const std::filesystem::path& path, std::string id) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw BadVocab("cannot open vocab file " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_vocab(bytes, id.empty() ? path.stem().string() : std::move(id));
}

Vocab load_vocab_preset(const std::filesystem::path& dir, std::string_view id) {
    const auto path = dir / (std::string(id) + ".txt");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw BadVocab("unknown vocab preset '" + std::string(id) + "'");
    return load_vocab_file(path, std::string(id));
}

std::vector<std::string> list_vocab_presets(const std::filesystem::path& dir) {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

Vocab merge_vocabs(const std::vector<Vocab>& vocabs) {
    std::string id;
    std::vector<std::string> tokens;
    for (const auto& v : vocabs) {
        if (!id.empty()) id += '+';
        id += v.id();
        tokens.insert(tokens.end(), v.tokens().begin(), v.tokens().end());
    }
    return Vocab(std::move(id), std::move(tokens));
}

std::vector<Segment> segment(std::string_view text, const Vocab& vocab) {
    std::vector<Segment> out;
    int line = 0;
    int col = 0;
    std::size_t literal_start = std::string_view::npos;
    int literal_col = 0;

    const auto flush_literal = [&](std::size_t end) {
        if (literal_start == std::string_view::npos) return;
        out.push_back({SegmentKind::literal, std::string(text.substr(literal_start, end - literal_start)), line,
                       literal_col, static_cast<int>(out.size())});
        literal_start = std::string_view::npos;
    };

    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] == '\n') {
            flush_literal(i);
            out.push_back({SegmentKind::newline, "\n", line, col, static_cast<int>(out.size())});
            ++line;
            col = 0;
            ++i;
            continue;
        }
        const std::string_view match = vocab.longest_match(text.substr(i));
        if (!match.empty()) {
            flush_literal(i);
            out.push_back({SegmentKind::special, std::string(match), line, col, static_cast<int>(out.size())});
            col += static_cast<int>(utf8::length(match));
            i += match.size();
            continue;
        }
        if (literal_start == std::string_view::npos) {
            literal_start = i;
            literal_col = col;
        }
        // step one code point
        std::size_t n = 1;
        while (i + n < text.size() && (static_cast<unsigned char>(text[i + n]) & 0xC0) == 0x80) ++n;
        i += n;
        ++col;
    }
    flush_literal(text.size());
    return out;
}

std::string join_segments(const std::vector<Segment>& segments) {
    std::string out;
    for (const auto& s : segments) out += s.text;
    return out;
}

AlignmentReport alignment_report(std::string_view art, const Vocab& vocab) {
    const auto segments = segment(art, vocab);

    AlignmentReport report;
    int line_count = 1;
    for (const auto& s : segments) {
        if (s.kind == SegmentKind::newline) ++line_count;
    }
    if (!art.empty() && art.back() == '\n') --line_count;
    report.lines.resize(static_cast<std::size_t>(std::max(line_count, 1)));

    std::size_t total_special = 0;
    int index_in_line = 0;
    int current_line = 0;
    int expected_col = 0;
    for (const auto& s : segments) {
        if (s.line != current_line) {
            current_line = s.line;
            index_in_line = 0;
            expected_col = 0;
        }
        if (s.kind == SegmentKind::newline) continue;
        const int width = static_cast<int>(utf8::length(s.text));
        if (s.char_col != expected_col) report.unit_advance = false;
        expected_col = s.char_col + width;
        if (s.kind == SegmentKind::special) {
            if (static_cast<std::size_t>(s.line) >= report.lines.size()) report.lines.resize(static_cast<std::size_t>(s.line) + 1);
            auto& lc = report.lines[static_cast<std::size_t>(s.line)];
            lc.char_cols.push_back(s.char_col);
            lc.token_indices.push_back(index_in_line);
            lc.widths.push_back(width);
            ++total_special;
        }
        ++index_in_line;
    }
    if (total_special == 0) throw NotArt("no special tokens in input");

    for (const auto& lc : report.lines) report.special_counts.push_back(static_cast<int>(lc.char_cols.size()));

    // (a) vertical structure in character space
    std::vector<std::size_t> bearing;
    for (std::size_t l = 0; l < report.lines.size(); ++l) {
        if (!report.lines[l].char_cols.empty()) bearing.push_back(l);
    }
    if (bearing.size() >= 2) {
        for (std::size_t l : bearing) {
            const auto& a = report.lines[l];
            for (std::size_t k = 0; k < a.char_cols.size(); ++k) {
                const int lo = a.char_cols[k];
                const int hi = lo + a.widths[k];
                bool found = false;
                for (std::size_t m : bearing) {
                    if (m == l) continue;
                    const auto& b = report.lines[m];
                    for (std::size_t q = 0; q < b.char_cols.size() && !found; ++q) {
                        found = b.char_cols[q] < hi && lo < b.char_cols[q] + b.widths[q];
                    }
                    if (found) break;
                }
                if (!found) report.columns_aligned = false;
            }
        }
    }

    // (b) is token_index <-> char_col a consistent bijection across lines?
    std::map<int, int> index_to_col;
    std::map<int, int> col_to_index;
    for (const auto& lc : report.lines) {
        for (std::size_t k = 0; k < lc.char_cols.size(); ++k) {
            const auto [it1, new1] = index_to_col.emplace(lc.token_indices[k], lc.char_cols[k]);
            const auto [it2, new2] = col_to_index.emplace(lc.char_cols[k], lc.token_indices[k]);
            if ((!new1 && it1->second != lc.char_cols[k]) || (!new2 && it2->second != lc.token_indices[k])) {
                report.token_index_carries_columns = false;
            }
        }
    }
    return report;
}

}  // namespace asciitox
