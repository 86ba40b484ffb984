#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "asciitox/attack.hpp"
#include "asciitox/decode.hpp"
#include "asciitox/defense.hpp"
#include "asciitox/errors.hpp"
#include "support.hpp"

using namespace asciitox;
using testing::testfont;

namespace {

const FontLibrary& bundled() {
    static const FontLibrary lib = load_font_dir(testing::data_dir() / "fonts");
    return lib;
}

const GlyphIndex& bundled_index() {
    static const GlyphIndex idx(bundled().fonts);
    return idx;
}

std::span<const Font> only(const Font& f) { return {&f, 1}; }

}  // namespace

TEST_CASE("decode TESTFONT HI exactly") {
    const Decoded d = decode(banner_mask(render("HI", testfont(), 1).lines), only(testfont()), 0.9);
    CHECK(d.text == "HI");
    CHECK(d.confidence == 1.0);
    CHECK(d.exact);
    CHECK(d.font_id == "testfont");
    CHECK(d.per_glyph_scores == std::vector<double>{1.0, 1.0});
}

TEST_CASE("decode rejects empty masks and empty font lists") {
    CHECK_THROWS_AS(decode(Mask(3, 3), only(testfont())), EmptyMask);
    CHECK_THROWS_AS(decode(Mask(), only(testfont())), EmptyMask);
    Mask m(1, 1);
    m.set(0, 0);
    CHECK_THROWS_AS(decode(m, std::span<const Font>{}), NoCompatibleFont);
    CHECK_THROWS_AS(decode(m, only(testfont()), 1.5), InvalidArgument);
}

TEST_CASE("decode rejects masks taller than every font") {
    Mask m(5, 3);
    for (int r = 0; r < 5; ++r) m.set(r, 0);
    CHECK_THROWS_AS(decode(m, only(testfont())), NoCompatibleFont);
}

TEST_CASE("decode trims surrounding blank rows and columns") {
    std::vector<std::string> lines = {"", "          "};
    for (const auto& l : render("OH", testfont(), 1).lines) lines.push_back("    " + l + "   ");
    lines.push_back("");
    const Decoded d = decode(banner_mask(lines), only(testfont()));
    CHECK(d.text == "OH");
}

TEST_CASE("decode infers word spaces") {
    const Decoded d = decode(banner_mask(render("HI OH", testfont(), 1).lines), only(testfont()));
    CHECK(d.text == "HI OH");
    CHECK(d.per_glyph_scores.size() == d.text.size());
}

TEST_CASE("decode handles touching glyphs") {
    const Decoded d = decode(banner_mask(render("HIOH", testfont(), 0).lines), only(testfont()));
    CHECK(d.text == "HIOH");
    CHECK(d.confidence == 1.0);
}

TEST_CASE("low-scoring glyphs decode as '?'") {
    auto lines = render("HOH", testfont(), 1).lines;
    lines[1][5] = '#';  // fill the hole of the O
    const Decoded d = decode(banner_mask(lines), only(testfont()), 0.95);
    CHECK_FALSE(d.exact);
    CHECK(d.text.size() == d.per_glyph_scores.size());
    CHECK(d.text.front() == 'H');
    CHECK(d.text.back() == 'H');
    CHECK(d.text.find('?') != std::string::npos);
    const double mean = std::accumulate(d.per_glyph_scores.begin(), d.per_glyph_scores.end(), 0.0) /
                        static_cast<double>(d.per_glyph_scores.size());
    CHECK(d.confidence == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("scores stay in [0,1] and confidence is their mean on noisy masks") {
    std::mt19937 rng(9);
    const auto& fonts = bundled().fonts;
    for (int trial = 0; trial < 60; ++trial) {
        const Font& f = fonts[rng() % fonts.size()];
        auto lines = render("idiot", f, 1).lines;
        for (auto& l : lines) {
            for (char& c : l) {
                if (rng() % 20 == 0) c = c == ' ' ? '#' : ' ';
            }
        }
        const Mask m = banner_mask(lines);
        if (m.count() == 0) continue;
        Decoded d;
        try {
            d = decode(m, only(f));
        } catch (const NoCompatibleFont&) {
            continue;  // noise outside the font's ink band
        }
        REQUIRE(d.text.size() == d.per_glyph_scores.size());
        double sum = 0;
        for (double s : d.per_glyph_scores) {
            REQUIRE(s >= 0.0);
            REQUIRE(s <= 1.0);
            sum += s;
        }
        if (!d.per_glyph_scores.empty()) {
            REQUIRE(d.confidence == doctest::Approx(sum / static_cast<double>(d.per_glyph_scores.size())));
        }
    }
}

TEST_CASE("parallel and serial decode agree") {
    const auto phrases = testing::read_lines(testing::data_dir() / "phrases.txt");
    std::mt19937 rng(1);
    for (int trial = 0; trial < 40; ++trial) {
        const Font& f = bundled().fonts[rng() % bundled().fonts.size()];
        auto lines = render(phrases[rng() % phrases.size()], f, 1).lines;
        if (trial % 2) {
            for (auto& l : lines) {
                for (char& c : l) {
                    if (rng() % 25 == 0) c = c == ' ' ? '#' : ' ';
                }
            }
        }
        const Mask m = banner_mask(lines);
        if (m.count() == 0) continue;
        const Decoded a = decode(m, bundled_index());
        const Decoded b = decode_serial(m, bundled_index());
        REQUIRE(a.text == b.text);
        REQUIRE(a.font_id == b.font_id);
        REQUIRE(a.per_glyph_scores == b.per_glyph_scores);
        REQUIRE(a.exact == b.exact);
    }
}

TEST_CASE("decode is blind to filler content") {
    for (const auto& f : bundled().fonts) {
        const Decoded plain = decode(banner_mask(render("retard", f, 1).lines), bundled_index());
        const Decoded filled =
            decode(banner_mask(synth_filled("retard", f, "Little Red Riding Hood", 1).lines), bundled_index());
        CHECK_MESSAGE(plain.text == filled.text, f.id);
        CHECK(plain.font_id == filled.font_id);
    }
}

TEST_CASE("collision audit") {
    CHECK(collision_audit(testfont()).empty());
    const Font twins = parse_flf(testing::make_flf(3, {{'A', {"###", "# #", "###"}}, {'B', {"###", "# #", "###"}}}), "twins");
    const auto pairs = collision_audit(twins);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == U'A');
    CHECK(pairs[0].second == U'B');
    for (const auto& f : bundled().fonts) CHECK_MESSAGE(collision_audit(f).empty(), f.id);
}

TEST_CASE("GlyphIndex skips fonts taller than the decode limit") {
    std::vector<std::string> tall(kMaxDecodeHeight + 1, "#");
    const Font f = parse_flf(testing::make_flf(kMaxDecodeHeight + 1, {{'A', tall}}), "tall");
    const std::vector<Font> fonts{f, testfont()};
    const GlyphIndex idx(fonts);
    REQUIRE(idx.models().size() == 1);
    CHECK(idx.models()[0].id == "testfont");
}
