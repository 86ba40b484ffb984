// Acceptance checks. One line per criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "asciitox/benchmark.hpp"
#include "asciitox/config.hpp"
#include "asciitox/decode.hpp"
#include "asciitox/errors.hpp"
#include "asciitox/segmenter.hpp"
#include "asciitox/utf8.hpp"
#include "support.hpp"

using namespace asciitox;

namespace {

constexpr double kAc1Seconds = 60.0;
constexpr double kAc1Confidence = 1.0;
constexpr int kAc1MinFonts = 30;
constexpr double kAc7Tolerance = 1e-9;
constexpr int kAc7Trials = 1000;
constexpr std::size_t kAc8MinCorpus = 50;
constexpr double kAc8MinAccepted = 0.95;

struct Result {
    bool pass = false;
    std::string detail;
};

struct Shared {
    std::vector<std::string> phrases;
    FontLibrary lib;
    std::vector<Font> fonts;  // bundled fonts minus any with collisions
    std::vector<std::string> collided;
    std::unique_ptr<GlyphIndex> index;
    std::unique_ptr<ScreenContext> ctx;
    GenConfig gen;
    std::vector<BenchmarkItem> dataset;
};

Shared& shared() {
    static Shared s = [] {
        Shared s;
        s.phrases = testing::read_lines(testing::data_dir() / "phrases.txt");
        s.lib = load_font_dir(testing::data_dir() / "fonts");
        for (const auto& f : s.lib.fonts) {
            if (collision_audit(f).empty()) s.fonts.push_back(f);
            else s.collided.push_back(f.id);
        }
        s.index = std::make_unique<GlyphIndex>(s.fonts);
        Config c;
        c.data_dir = testing::data_dir();
        s.ctx = std::make_unique<ScreenContext>(make_screen_context(c));
        s.gen.phrases = s.phrases;
        s.gen.benign_texts = testing::read_lines(testing::data_dir() / "benign.txt");
        s.gen.homoglyphs = load_homoglyph_table(testing::data_dir() / "homoglyphs.tsv");
        s.gen.seed = 2024;
        s.dataset = gen_dataset(s.gen, s.fonts);
        return s;
    }();
    return s;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Result ac1() {
    auto& s = shared();
    const auto t0 = std::chrono::steady_clock::now();
    int ok = 0, total = 0;
    std::string first_miss;
    for (const auto& f : s.fonts) {
        for (const auto& p : s.phrases) {
            ++total;
            const Decoded d = decode(banner_mask(render(p, f, 1)), *s.index, 0.9);
            if (d.text == testing::upper(p) && d.confidence == kAc1Confidence) ++ok;
            else if (first_miss.empty()) first_miss = f.id + "/" + p + " -> " + d.text;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string excluded = s.collided.empty() ? "none" : "";
    for (const auto& id : s.collided) excluded += (excluded.empty() ? "" : ",") + id;
    Result r;
    r.pass = ok == total && static_cast<int>(s.fonts.size()) >= kAc1MinFonts && secs < kAc1Seconds;
    r.detail = fmt("%d/%d exact over %zu fonts in %.1fs; collision-excluded: %s", ok, total, s.fonts.size(), secs,
                   excluded.c_str());
    if (!first_miss.empty()) r.detail += "; first miss " + first_miss;
    return r;
}

Result ac2() {
    auto& s = shared();
    std::vector<std::string> payloads;
    for (const auto& it : s.dataset) {
        if (it.variant == Variant::regular) payloads.push_back(it.payload);
    }
    const auto reports = screen_batch(payloads, *s.ctx);
    std::int64_t caught = 0;
    for (const auto& rep : reports) {
        for (const auto& v : rep.verdicts) {
            if (v.channel == Channel::decoded && v.toxic) {
                ++caught;
                break;
            }
        }
    }
    const auto n = static_cast<std::int64_t>(payloads.size());
    const Rational asr = Rational::of(n - caught, n);
    Result r;
    r.pass = n > 0 && asr == Rational::of(0, 1);
    r.detail = fmt("decoded channel flagged %lld/%lld regular items, ASR %lld/%lld", static_cast<long long>(caught),
                   static_cast<long long>(n), static_cast<long long>(asr.num), static_cast<long long>(asr.den));
    return r;
}

Result ac3() {
    auto& s = shared();
    const auto dir = testing::data_dir() / "vocab";
    const auto presets = list_vocab_presets(dir);
    std::int64_t restored = 0, decoded = 0, total = 0;
    std::string first_miss;
    for (const auto& id : presets) {
        const Vocab v = load_vocab_preset(dir, id);
        for (const auto& f : s.fonts) {
            for (const auto& p : s.phrases) {
                ++total;
                const Banner b = render(p, f, 1);
                const Mask base = banner_mask(b);
                std::string text;
                for (const auto& l : synth_special(b, v.primary()).lines) text += l + "\n";
                const Mask back = banner_mask(split_special(text, v));
                if (back != base) {
                    if (first_miss.empty()) first_miss = id + "/" + f.id + "/" + p;
                    continue;
                }
                ++restored;
                const Decoded d = decode(back, *s.index, 0.9);
                if (d.text == testing::upper(p) && d.confidence == kAc1Confidence) ++decoded;
                else if (first_miss.empty()) first_miss = id + "/" + f.id + "/" + p + " -> " + d.text;
            }
        }
    }
    Result r;
    r.pass = presets.size() == 7 && restored == total && decoded == total;
    r.detail = fmt("%zu presets; mask restored %lld/%lld, decoded %lld/%lld", presets.size(),
                   static_cast<long long>(restored), static_cast<long long>(total), static_cast<long long>(decoded),
                   static_cast<long long>(total));
    if (!first_miss.empty()) r.detail += "; first miss " + first_miss;
    return r;
}

Result ac4() {
    auto& s = shared();
    std::vector<Outcome> none;
    for (const auto& it : s.dataset) none.push_back({it.id, false, false, "null", 0.0});
    const Metrics m = score(s.dataset, none, Task::toxicity);
    Result r;
    r.pass = m.asr == Rational::of(1, 1) && m.recall == Rational::of(0, 1) && m.confusion.tp + m.confusion.fn > 0;
    r.detail = fmt("ASR %lld/%lld, recall %lld/%lld over %lld toxic items", static_cast<long long>(m.asr.num),
                   static_cast<long long>(m.asr.den), static_cast<long long>(m.recall.num),
                   static_cast<long long>(m.recall.den), static_cast<long long>(m.confusion.tp + m.confusion.fn));
    return r;
}

Result ac5() {
    auto& s = shared();
    const std::u32string cyc = normalize_filler(s.gen.filler);
    int ok = 0, total = 0;
    std::string first_miss;
    for (const auto& it : s.dataset) {
        if (it.variant != Variant::filled) continue;
        ++total;
        const Font& f = *s.lib.find(it.font_id);
        const auto lines = split_lines(it.payload);
        const Mask regular = banner_mask(render(it.phrase, f, s.gen.letter_spacing));
        const Mask filled = banner_mask(lines);
        const std::u32string got = utf8::decode(extract_filler(lines));
        bool prefix = got.size() == regular.count();
        for (std::size_t i = 0; prefix && i < got.size(); ++i) prefix = got[i] == cyc[i % cyc.size()];
        if (filled == regular && prefix) ++ok;
        else if (first_miss.empty()) first_miss = it.font_id + "/" + it.phrase;
    }
    Result r;
    r.pass = total > 0 && ok == total;
    r.detail = fmt("%d/%d filled items match mask and filler prefix", ok, total);
    if (!first_miss.empty()) r.detail += "; first miss " + first_miss;
    return r;
}

Result ac6() {
    const std::string art = testing::slurp(testing::test_data() / "hi_end_tokens.txt");
    const AlignmentReport rep = alignment_report(art, Vocab("phi-3.5", {"<|end|>"}));
    const std::vector<int> expected{4, 3, 3, 3, 4, 4, 3, 3, 3, 4};
    const Vocab v("phi-3.5", {"<|end|>"});
    bool by_one = true;
    for (const auto& line : split_lines(art)) {
        const auto segs = segment(line, v);
        for (std::size_t k = 1; k < segs.size(); ++k) {
            by_one = by_one && segs[k].token_index == segs[k - 1].token_index + 1;
            if (segs[k - 1].kind == SegmentKind::special) by_one = by_one && segs[k].char_col - segs[k - 1].char_col == 7;
        }
    }
    std::string counts;
    for (int c : rep.special_counts) counts += std::to_string(c);
    Result r;
    r.pass = rep.special_counts == expected && rep.unit_advance && by_one;
    r.detail = "counts " + counts + (by_one ? ", index +1 per segment, 7 columns per token" : ", index advance mismatch");
    return r;
}

// Exact metric oracle: plain fractions from a per-item count, reduced with std::gcd.
std::pair<std::int64_t, std::int64_t> frac(std::int64_t n, std::int64_t d) {
    if (d == 0 || n == 0) return {0, 1};
    const std::int64_t g = std::gcd(n, d);
    return {n / g, d / g};
}

std::pair<std::int64_t, std::int64_t> frac_add_half(std::pair<std::int64_t, std::int64_t> a,
                                                    std::pair<std::int64_t, std::int64_t> b) {
    return frac(a.first * b.second + b.first * a.second, 2 * a.second * b.second);
}

bool same(const Rational& r, std::pair<std::int64_t, std::int64_t> f) { return r.num == f.first && r.den == f.second; }

Result ac7() {
    const Metrics hand = metrics_from_confusion({3, 1, 1, 5});
    const bool hand_ok = std::abs(hand.recall.value() - 0.75) <= kAc7Tolerance &&
                         std::abs(hand.f1_macro.value() - 19.0 / 24.0) <= kAc7Tolerance &&
                         fmt("%.4f", hand.f1_macro.value()) == "0.7917";

    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> cell(0, 40);
    int agree = 0;
    for (int t = 0; t < kAc7Trials; ++t) {
        std::vector<BenchmarkItem> items;
        std::vector<Outcome> outs;
        for (int k = 0; k < 4; ++k) {
            const int n = cell(rng);
            for (int i = 0; i < n; ++i) {
                BenchmarkItem it;
                it.id = std::to_string(items.size());
                it.label_toxic = k == 0 || k == 2;
                it.variant = it.label_toxic ? Variant::charswap : Variant::benign;
                items.push_back(it);
                outs.push_back({it.id, k == 0 || k == 1, false, "r", 0.0});
            }
        }
        std::shuffle(outs.begin(), outs.end(), rng);
        std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
        for (std::size_t i = 0; i < items.size(); ++i) {
            const bool y = items[i].label_toxic;
            const bool yhat = std::find_if(outs.begin(), outs.end(), [&](const Outcome& o) {
                                  return o.item_id == items[i].id;
                              })->flagged_toxic;
            tp += y && yhat;
            fp += !y && yhat;
            fn += y && !yhat;
            tn += !y && !yhat;
        }
        const Metrics m = score(items, outs, Task::toxicity);
        const auto f1 = frac_add_half(frac(2 * tp, 2 * tp + fp + fn), frac(2 * tn, 2 * tn + fp + fn));
        if (same(m.asr, frac(fn, tp + fn)) && same(m.recall, frac(tp, tp + fn)) && same(m.precision, frac(tp, tp + fp)) &&
            same(m.f1_macro, f1)) {
            ++agree;
        }
    }
    Result r;
    r.pass = hand_ok && agree == kAc7Trials;
    r.detail = fmt("hand example %s (recall %.4f, f1_macro %.4f); %d/%d random matrices exact", hand_ok ? "ok" : "off",
                   hand.recall.value(), hand.f1_macro.value(), agree, kAc7Trials);
    return r;
}

Result ac8() {
    std::size_t files = 0, accepted = 0, round_trips = 0, untyped = 0;
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(testing::test_data() / "flf_corpus")) {
        if (e.path().extension() == ".flf") paths.push_back(e.path());
    }
    for (const auto& e : std::filesystem::directory_iterator(testing::data_dir() / "fonts")) {
        if (e.path().extension() == ".flf") paths.push_back(e.path());
    }
    for (const auto& p : paths) {
        ++files;
        try {
            const Font f = load_font_file(p);
            ++accepted;
            const std::string once = serialize_flf(f);
            if (serialize_flf(parse_flf(once, f.id)) == once) ++round_trips;
        } catch (const Error&) {
        } catch (...) {
            ++untyped;
        }
    }
    const double rate = files ? static_cast<double>(accepted) / static_cast<double>(files) : 0.0;
    Result r;
    r.pass = files >= kAc8MinCorpus && rate >= kAc8MinAccepted && untyped == 0 && round_trips == accepted;
    r.detail = fmt("%zu/%zu accepted (%.1f%%), %zu byte-identical round trips, %zu untyped errors", accepted, files,
                   100.0 * rate, round_trips, untyped);
    return r;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Result()>> checks[] = {
        {"AC1 round-trip exactness", ac1}, {"AC2 regular-variant defense", ac2}, {"AC3 special-token defense", ac3},
        {"AC4 null-detector identity", ac4}, {"AC5 fill invisibility", ac5},      {"AC6 end-token listing", ac6},
        {"AC7 metrics oracle", ac7},       {"AC8 parser robustness", ac8},
    };
    int failures = 0;
    for (const auto& [name, fn] : checks) {
        Result r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.detail = std::string("threw: ") + e.what();
        }
        failures += !r.pass;
        std::printf("%s %s: %s\n", r.pass ? "PASS" : "FAIL", name, r.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
