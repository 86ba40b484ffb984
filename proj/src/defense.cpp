#include "asciitox/defense.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>

#include "asciitox/errors.hpp"
#include "asciitox/utf8.hpp"

namespace asciitox {

namespace {

bool is_ascii_alnum(char32_t c) {
    return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

bool is_letter(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }

bool is_blank(char32_t c) { return c == U' ' || c == U'\t' || c == U'\r' || c == U'\f' || c == U'\v'; }

bool blank_line(std::u32string_view line) {
    return std::all_of(line.begin(), line.end(), [](char32_t c) { return is_blank(c); });
}

bool blank_text(std::string_view line) { return line.find_first_not_of(" \t\r\f\v") == std::string_view::npos; }

DetectionTrigger classify_line(std::u32string_view line, const DetectorParams& p) {
    std::size_t end = line.size();
    while (end > 0 && is_blank(line[end - 1])) --end;
    line = line.substr(0, end);
    if (static_cast<int>(line.size()) < p.min_len) return DetectionTrigger::none;

    std::size_t non_space = 0;
    std::size_t symbols = 0;
    int run = 0;
    int best_run = 0;
    char32_t prev = 0;
    for (char32_t c : line) {
        if (is_blank(c)) {
            run = 0;
            prev = 0;
            continue;
        }
        ++non_space;
        if (!is_ascii_alnum(c)) ++symbols;
        if (!is_letter(c)) {
            run = (c == prev) ? run + 1 : 1;
            best_run = std::max(best_run, run);
        } else {
            run = 0;
        }
        prev = c;
    }
    if (non_space == 0) return DetectionTrigger::none;
    if (static_cast<double>(symbols) / static_cast<double>(non_space) >= p.density) return DetectionTrigger::density;
    if (best_run >= p.run_len) return DetectionTrigger::run;
    return DetectionTrigger::none;
}

std::size_t dominant_token_length(const std::vector<const Segment*>& specials) {
    std::map<std::string_view, std::size_t> freq;
    for (const Segment* s : specials) ++freq[s->text];
    std::string_view best;
    std::size_t best_n = 0;
    for (const auto& [tok, n] : freq) {
        if (n > best_n || (n == best_n && utf8::length(tok) > utf8::length(best))) {
            best = tok;
            best_n = n;
        }
    }
    return best_n == 0 ? 1 : utf8::length(best);
}

}  // namespace

void DetectorParams::validate() const {
    if (min_len < 0) throw InvalidArgument("min_len must be >= 0");
    if (!(density >= 0.0 && density <= 1.0)) throw InvalidArgument("density must be within [0, 1]");
    if (run_len < 1) throw InvalidArgument("run_len must be >= 1");
    if (window < 1) throw InvalidArgument("window must be >= 1");
}

const char* to_string(DetectionTrigger t) {
    switch (t) {
        case DetectionTrigger::density: return "density";
        case DetectionTrigger::run: return "run";
        case DetectionTrigger::none: break;
    }
    return "none";
}

const char* to_string(Channel c) {
    switch (c) {
        case Channel::decoded: return "decoded";
        case Channel::filler: return "filler";
        case Channel::surface: break;
    }
    return "surface";
}

DetectionResult detect_art(std::string_view text, const DetectorParams& params) {
    DetectionResult result;
    const auto lines = split_lines(text);

    int streak = 0;
    int streak_start = -1;
    int streak_end = -1;
    bool streak_density = false;
    bool flagged = false;

    const auto close_streak = [&] {
        if (!flagged && streak >= params.window) {
            flagged = true;
            result.is_art = true;
            result.arty_line_count = streak;
            result.trigger = streak_density ? DetectionTrigger::density : DetectionTrigger::run;
            result.window = std::make_pair(streak_start, streak_end);
        }
        if (!flagged) result.arty_line_count = std::max(result.arty_line_count, streak);
        streak = 0;
        streak_start = -1;
        streak_density = false;
    };

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::u32string line = utf8::decode(lines[i]);
        if (blank_line(line)) continue;
        const DetectionTrigger t = classify_line(line, params);
        if (t == DetectionTrigger::none) {
            close_streak();
            continue;
        }
        if (streak == 0) streak_start = static_cast<int>(i);
        ++streak;
        streak_end = static_cast<int>(i);
        streak_density = streak_density || t == DetectionTrigger::density;
    }
    close_streak();
    return result;
}

Banner split_special(std::string_view text, const Vocab& vocab) {
    Banner out;
    if (vocab.empty()) {
        out.lines = split_lines(text);
        return out;
    }
    const auto segments = segment(text, vocab);

    std::vector<std::vector<const Segment*>> per_line;
    std::vector<const Segment*> all_specials;
    for (const auto& s : segments) {
        if (static_cast<std::size_t>(s.line) >= per_line.size()) per_line.resize(static_cast<std::size_t>(s.line) + 1);
        per_line[static_cast<std::size_t>(s.line)].push_back(&s);
        if (s.kind == SegmentKind::special) all_specials.push_back(&s);
    }
    const std::size_t global_len = dominant_token_length(all_specials);

    for (const auto& line_segments : per_line) {
        std::vector<const Segment*> specials;
        for (const Segment* s : line_segments) {
            if (s->kind == SegmentKind::special) specials.push_back(s);
        }
        const std::size_t len = specials.empty() ? global_len : dominant_token_length(specials);

        std::string line;
        for (const Segment* s : line_segments) {
            if (s->kind == SegmentKind::newline) continue;
            if (s->kind == SegmentKind::special) {
                line += '#';
                continue;
            }
            std::size_t spaces = 0;
            const auto flush = [&] {
                if (spaces == 0) return;
                const auto n = std::lround(static_cast<double>(spaces) / static_cast<double>(len));
                line.append(static_cast<std::size_t>(n), ' ');
                spaces = 0;
            };
            for (char ch : s->text) {
                if (ch == ' ') {
                    ++spaces;
                } else {
                    flush();
                    line += ch;
                }
            }
            flush();
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.lines.push_back(std::move(line));
    }
    return out;
}

std::string extract_filler(std::span<const std::string> lines) {
    std::u32string out;
    for (const auto& line : lines) {
        for (char32_t c : utf8::decode(line)) {
            if (!is_blank(c) && c != U'\n') out.push_back(c);
        }
    }
    return utf8::encode(out);
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> words_of(std::string_view lower_ascii) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : lower_ascii) {
        if (c >= 'a' && c <= 'z') {
            cur.push_back(c);
        } else if (!cur.empty()) {
            words.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) words.push_back(std::move(cur));
    return words;
}

std::string normalize(std::string_view text, const HomoglyphTable& inverse) {
    std::string out;
    for (char32_t c : utf8::decode(text)) {
        if (auto it = inverse.mapping().find(c); it != inverse.mapping().end()) c = it->second;
        if (c >= U'A' && c <= U'Z') c += 32;
        out.push_back(c < 0x80 ? static_cast<char>(c) : ' ');
    }
    return out;
}

}  // namespace

Lexicon::Lexicon(std::vector<std::string> terms, std::string version) : version_(std::move(version)) {
    for (auto& t : terms) {
        std::string lower;
        for (char c : t) lower.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c);
        auto words = words_of(lower);
        if (words.empty()) continue;
        std::string canonical;
        std::string fused;
        for (const auto& w : words) {
            if (!canonical.empty()) canonical += ' ';
            canonical += w;
            fused += w;
        }
        if (std::find(terms_.begin(), terms_.end(), canonical) != terms_.end()) continue;
        terms_.push_back(canonical);
        split_.push_back(std::move(words));
        fused_.push_back(std::move(fused));
    }
}

std::vector<std::string> Lexicon::match_words(const std::vector<std::string>& words) const {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < split_.size(); ++t) {
        const auto& term = split_[t];
        if (term.size() > words.size()) continue;
        for (std::size_t i = 0; i + term.size() <= words.size(); ++i) {
            if (std::equal(term.begin(), term.end(), words.begin() + static_cast<std::ptrdiff_t>(i))) {
                out.push_back(terms_[t]);
                break;
            }
        }
    }
    return out;
}

std::vector<std::string> Lexicon::match_fused(std::string_view letters) const {
    std::vector<std::string> out;
    for (std::size_t t = 0; t < fused_.size(); ++t) {
        if (letters.find(fused_[t]) != std::string_view::npos) out.push_back(terms_[t]);
    }
    return out;
}

Lexicon parse_lexicon(std::string_view text) {
    std::vector<std::string> terms;
    std::string version;
    for (auto& line : split_lines(text)) {
        if (line.empty()) continue;
        if (line.front() == '#') {
            static constexpr std::string_view kVersion = "# version:";
            if (line.compare(0, kVersion.size(), kVersion) == 0) {
                version = line.substr(kVersion.size());
                version.erase(0, version.find_first_not_of(' '));
            }
            continue;
        }
        terms.push_back(std::move(line));
    }
    return Lexicon(std::move(terms), std::move(version));
}

Lexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open lexicon " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_lexicon(bytes);
}

std::vector<std::string> lexicon_words(std::string_view text, const HomoglyphTable& inverse) {
    return words_of(normalize(text, inverse));
}

std::string lexicon_letters(std::string_view text, const HomoglyphTable& inverse) {
    std::string out;
    for (char c : normalize(text, inverse)) {
        if (c >= 'a' && c <= 'z') out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------------------

bool ScreenReport::toxic() const {
    return std::any_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.toxic; });
}

bool ScreenReport::art() const {
    if (detection.is_art || special_tokens) return true;
    return decoded && decoded->text.find('?') == std::string::npos &&
           decoded->text.find_first_not_of(' ') != std::string::npos && decoded->exact;
}

ScreenReport screen(std::string_view text, const ScreenContext& ctx) {
    ScreenReport report;
    report.detection = detect_art(text, ctx.params);

    {
        Verdict v;
        v.channel = Channel::surface;
        v.matched_terms = ctx.lexicon.match_words(lexicon_words(text, ctx.inverse_homoglyphs));
        v.toxic = !v.matched_terms.empty();
        report.verdicts.push_back(std::move(v));
    }

    const auto lines = split_lines(text);
    std::vector<std::string> region;
    std::vector<std::string> decode_lines;

    if (!ctx.vocab.empty()) {
        int first = -1;
        int last = -1;
        for (const auto& s : segment(text, ctx.vocab)) {
            if (s.kind != SegmentKind::special) continue;
            if (first < 0) first = s.line;
            last = s.line;
        }
        if (first >= 0) {
            report.special_tokens = true;
            region.assign(lines.begin() + first, lines.begin() + last + 1);
            std::string joined;
            for (const auto& l : region) joined += l + "\n";
            decode_lines = split_special(joined, ctx.vocab).lines;
        }
    }
    if (!report.special_tokens) {
        if (report.detection.is_art && report.detection.window) {
            // The flagged streak can miss sparse rows of the same banner, so
            // grow it over adjacent non-blank lines.
            auto [first, last] = *report.detection.window;
            while (first > 0 && !blank_text(lines[static_cast<std::size_t>(first - 1)])) --first;
            while (last + 1 < static_cast<int>(lines.size()) && !blank_text(lines[static_cast<std::size_t>(last + 1)])) ++last;
            region.assign(lines.begin() + first, lines.begin() + last + 1);
        } else if (ctx.decode_multiline) {
            const auto nonblank = std::count_if(lines.begin(), lines.end(), [](const std::string& l) { return !blank_text(l); });
            if (nonblank >= 2) region = lines;
        }
        decode_lines = region;
    }

    if (!decode_lines.empty()) {
        Verdict v;
        v.channel = Channel::decoded;
        try {
            report.decoded = decode(banner_mask(decode_lines), ctx.fonts, ctx.tau);
            if (!report.decoded->exact && !report.special_tokens && region.size() < lines.size()) {
                Decoded whole = decode(banner_mask(lines), ctx.fonts, ctx.tau);
                if (whole.exact || whole.confidence > report.decoded->confidence) report.decoded = std::move(whole);
            }
            v.matched_terms = ctx.lexicon.match_words(lexicon_words(report.decoded->text, ctx.inverse_homoglyphs));
        } catch (const Error& e) {
            report.warnings.push_back(std::string("decode failed: ") + e.what());
        }
        v.toxic = !v.matched_terms.empty();
        report.verdicts.push_back(std::move(v));
    }

    if (!region.empty() && report.art()) {
        Verdict v;
        v.channel = Channel::filler;
        v.matched_terms = ctx.lexicon.match_fused(lexicon_letters(extract_filler(region), ctx.inverse_homoglyphs));
        v.toxic = !v.matched_terms.empty();
        report.verdicts.push_back(std::move(v));
    }
    return report;
}

std::vector<ScreenReport> screen_batch(std::span<const std::string> texts, const ScreenContext& ctx) {
    std::vector<ScreenReport> out(texts.size());
    std::vector<std::exception_ptr> errors(texts.size());
    const auto n = static_cast<long>(texts.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = screen(texts[k], ctx);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::vector<ScreenReport> screen_batch_serial(std::span<const std::string> texts, const ScreenContext& ctx) {
    std::vector<ScreenReport> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(screen(t, ctx));
    return out;
}

}  // namespace asciitox
