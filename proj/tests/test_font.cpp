#include <doctest.h>

#include <algorithm>
#include <random>

#include "asciitox/errors.hpp"
#include "asciitox/font.hpp"
#include "support.hpp"

using namespace asciitox;
using testing::make_flf;
using testing::testfont;

namespace {

const std::vector<std::pair<char, std::vector<std::string>>> kHIO = {
    {'H', {"# #", "###", "# #"}},
    {'I', {"###", " # ", "###"}},
    {'O', {"###", "# #", "###"}},
};

Mask grid(const std::vector<std::vector<int>>& rows) {
    Mask m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) m.set(r, c, rows[r][c] != 0);
    }
    return m;
}

}  // namespace

TEST_CASE("parse a minimal three-row font") {
    const Font f = parse_flf(make_flf(3, kHIO), "mini");
    CHECK(f.height == 3);
    CHECK(f.id == "mini");
    CHECK(f.glyphs.size() >= 95);
    CHECK(f.find(U'H')->rows[1] == U"###");
    CHECK(f.find(U' ')->rows[0] == U"  ");  // hardblanks become spaces
}

TEST_CASE("lowercase aliases uppercase when only one case is drawn") {
    const Font f = parse_flf(make_flf(3, kHIO), "mini");
    CHECK_FALSE(f.has_lowercase);
    REQUIRE(f.find(U'h') != nullptr);
    CHECK(*f.find(U'h') == *f.find(U'H'));
}

TEST_CASE("both cases kept when the font draws them differently") {
    auto glyphs = kHIO;
    glyphs.push_back({'h', {"#  ", "## ", "# #"}});
    const Font f = parse_flf(make_flf(3, glyphs), "two");
    CHECK(f.has_lowercase);
    CHECK_FALSE(*f.find(U'h') == *f.find(U'H'));
}

TEST_CASE("header errors") {
    CHECK_THROWS_AS(parse_flf("flf2b$ 3 3 10 -1 0\n", "x"), MalformedHeader);
    CHECK_THROWS_AS(parse_flf("flf2a$ three 3 10 -1 0\n", "x"), MalformedHeader);
    CHECK_THROWS_AS(parse_flf("flf2a$ 3 3\n", "x"), MalformedHeader);
    CHECK_THROWS_AS(parse_flf("flf2a$ 0 0 10 -1 0\n", "x"), MalformedHeader);
    CHECK_THROWS_AS(parse_flf("", "x"), MalformedHeader);
}

TEST_CASE("a glyph block shorter than the header height is a truncated table") {
    std::string text = make_flf(4, {{'A', {"/\\", "--", "||", "||"}}});
    // Drop the third row of 'A' so its block closes one line early.
    const auto pos = text.find("||@\n");
    REQUIRE(pos != std::string::npos);
    text.erase(pos, 4);
    CHECK_THROWS_AS(parse_flf(text, "short"), TruncatedGlyphTable);
}

TEST_CASE("fewer than 95 glyph blocks is a truncated table") {
    std::string text = make_flf(3, kHIO);
    text.resize(text.size() / 2);
    text = text.substr(0, text.rfind('\n') + 1);
    CHECK_THROWS_AS(parse_flf(text, "half"), TruncatedGlyphTable);
}

TEST_CASE("self-spelling glyphs are rejected unless overridden") {
    auto glyphs = kHIO;
    glyphs.push_back({'S', {"sss", "ss ", "sss"}});
    const std::string text = make_flf(3, glyphs);
    CHECK_THROWS_AS(parse_flf(text, "leaky"), SelfSpellingFont);

    ParseOptions opts;
    opts.allow_self_spelling = true;
    const Font f = parse_flf(text, "leaky", opts);
    CHECK(self_spelling_letters(f) == std::vector<char32_t>{U'S', U's'});
    CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("glyph drawn with another letter is not self-spelling") {
    auto glyphs = kHIO;
    glyphs.push_back({'S', {"xxx", "xx ", "xxx"}});
    CHECK_NOTHROW(parse_flf(make_flf(3, glyphs), "ok"));
}

TEST_CASE("ragged rows are padded with a warning") {
    const Font f = parse_flf(make_flf(3, {{'A', {"/\\", "--", "|"}}}), "ragged");
    CHECK(f.find(U'A')->rows[2] == U"| ");
    CHECK(std::any_of(f.warnings.begin(), f.warnings.end(),
                      [](const std::string& w) { return w.find("RaggedGlyph") != std::string::npos; }));
}

TEST_CASE("Latin-1 font files decode as Latin-1") {
    std::string text = make_flf(1, {{'A', {"A\xE9"}}});
    const Font f = parse_flf(text, "latin1", ParseOptions{true});
    CHECK(f.find(U'A')->rows[0] == U"Aé");
}

TEST_CASE("load_font_dir collects failures and sorts by id") {
    const auto dir = std::filesystem::temp_directory_path() / "asciitox_fontdir_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "zeta.flf") << make_flf(3, kHIO);
    std::ofstream(dir / "alpha.flf") << make_flf(3, kHIO);
    std::ofstream(dir / "broken.flf") << "not a font\n";
    const FontLibrary lib = load_font_dir(dir);
    REQUIRE(lib.fonts.size() == 2);
    CHECK(lib.fonts[0].id == "alpha");
    CHECK(lib.fonts[1].id == "zeta");
    REQUIRE(lib.errors.size() == 1);
    CHECK(lib.errors[0].path.filename() == "broken.flf");
    CHECK(lib.find("zeta") != nullptr);
    CHECK(lib.find("broken") == nullptr);

    const auto empty = dir / "empty";
    std::filesystem::create_directories(empty);
    CHECK_THROWS_AS(load_font_dir(empty), NoFontsFound);
    CHECK_THROWS_AS(load_font_dir(dir / "missing"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("shipped test-font directory holds TESTFONT") {
    const FontLibrary lib = load_font_dir(testing::test_data() / "fonts");
    REQUIRE(lib.find("testfont") != nullptr);
    CHECK(lib.find("testfont")->height == 3);
}

TEST_CASE("render with TESTFONT") {
    CHECK(render("HI", testfont(), 1).lines == std::vector<std::string>{"# # ###", "###  # ", "# # ###"});
    CHECK(render("", testfont(), 1).lines == std::vector<std::string>{"", "", ""});
    CHECK(render("hi", testfont(), 0).lines == std::vector<std::string>{"# ####", "### # ", "# ####"});
    try {
        render("HQ", testfont(), 1);
        FAIL("expected UnsupportedChar");
    } catch (const UnsupportedChar& e) {
        CHECK(e.character() == U'Q');
    }
    CHECK_THROWS_AS(render("Hé", testfont(), 1), UnsupportedChar);
    CHECK_THROWS_AS(render("H", testfont(), -1), InvalidArgument);
}

TEST_CASE("to_text pads lines and terminates each with a newline") {
    CHECK(to_text(std::vector<std::string>{"ab", "a", ""}) == "ab\na \n  \n");
    CHECK(split_lines("a\r\nb\n") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\n\nb") == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("banner_mask examples") {
    CHECK(banner_mask(std::vector<std::string>{"# #", "###"}) == grid({{1, 0, 1}, {1, 1, 1}}));
    const Mask blank = banner_mask(std::vector<std::string>{"   ", "  "});
    CHECK(blank.height() == 2);
    CHECK(blank.width() == 3);
    CHECK(blank.count() == 0);
    // Multi-byte cells count as one column.
    CHECK(banner_mask(std::vector<std::string>{"é x"}) == grid({{1, 0, 1}}));
}

TEST_CASE("HI mask on-cell count matches a hand count of the glyph rows") {
    // H: "# #","###","# #" -> 2+3+2. I: "###"," # ","###" -> 3+1+3.
    CHECK(banner_mask(render("H", testfont(), 1).lines).count() == 7);
    CHECK(banner_mask(render("I", testfont(), 1).lines).count() == 7);
    CHECK(banner_mask(render("HI", testfont(), 1).lines).count() == 14);
}

TEST_CASE("downsample_mask examples") {
    const Mask m = grid({{1, 0}, {0, 0}});
    CHECK(downsample_mask(m, 1) == m);
    CHECK(downsample_mask(m, 2) == grid({{1}}));
    Mask full(4, 4);
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) full.set(r, c);
    }
    CHECK(downsample_mask(full, 2) == grid({{1, 1}, {1, 1}}));
    CHECK_THROWS_AS(downsample_mask(m, 0), InvalidArgument);
}

TEST_CASE("downsample_mask matches naive max-pooling on random masks") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int h = 1 + static_cast<int>(rng() % 12);
        const int w = 1 + static_cast<int>(rng() % 12);
        const int k = 1 + static_cast<int>(rng() % 5);
        Mask m(h, w);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) m.set(r, c, rng() % 3 == 0);
        }
        const Mask d = downsample_mask(m, k);
        REQUIRE(d.height() == (h + k - 1) / k);
        REQUIRE(d.width() == (w + k - 1) / k);
        for (int r = 0; r < d.height(); ++r) {
            for (int c = 0; c < d.width(); ++c) {
                bool any = false;
                for (int rr = r * k; rr < std::min(h, (r + 1) * k); ++rr) {
                    for (int cc = c * k; cc < std::min(w, (c + 1) * k); ++cc) any = any || m.at(rr, cc);
                }
                REQUIRE(d.at(r, c) == any);
            }
        }
    }
}

TEST_CASE("mask idempotence through '#' serialization") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Mask m(1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 20));
        for (int r = 0; r < m.height(); ++r) {
            for (int c = 0; c < m.width(); ++c) m.set(r, c, rng() % 2 == 0);
        }
        CHECK(banner_mask(mask_lines(m, '#', ' ')) == m);
    }
}

TEST_CASE("rendering width law over bundled fonts") {
    const FontLibrary lib = load_font_dir(testing::data_dir() / "fonts");
    std::mt19937 rng(3);
    const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ ";
    for (const auto& f : lib.fonts) {
        for (int trial = 0; trial < 5; ++trial) {
            std::string text;
            const int n = 1 + static_cast<int>(rng() % 10);
            for (int i = 0; i < n; ++i) text += alphabet[rng() % alphabet.size()];
            const int s = static_cast<int>(rng() % 3);
            int expected = s * (n - 1);
            for (char c : text) expected += f.find(static_cast<char32_t>(c))->width();
            const Banner b = render(text, f, s);
            REQUIRE(b.height() == f.height);
            REQUIRE(b.width() == expected);
        }
    }
}

TEST_CASE("bundled fonts satisfy the anti-leak rule") {
    const FontLibrary lib = load_font_dir(testing::data_dir() / "fonts");
    CHECK(lib.errors.empty());
    CHECK(lib.fonts.size() >= 30);
    for (const auto& f : lib.fonts) CHECK_MESSAGE(self_spelling_letters(f).empty(), f.id);
}

TEST_CASE("serialization round-trips bundled fonts byte-identically") {
    const FontLibrary lib = load_font_dir(testing::data_dir() / "fonts");
    for (const auto& f : lib.fonts) {
        const std::string once = serialize_flf(f);
        const Font again = parse_flf(once, f.id);
        CHECK_MESSAGE(again.glyphs == f.glyphs, f.id);
        CHECK_MESSAGE(serialize_flf(again) == once, f.id);
    }
}

TEST_CASE("serialization picks endmarks that survive glyph content") {
    // Rows ending in '@' must not lose that cell to endmark stripping.
    auto glyphs = kHIO;
    glyphs.push_back({'A', {"@@@", "@ @", "@#@"}});
    Font f = parse_flf(make_flf(3, glyphs, '$'), "ats");
    const Font g = parse_flf(serialize_flf(f), "ats");
    CHECK(g.find(U'A')->rows == f.find(U'A')->rows);
}
