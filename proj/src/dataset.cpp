#include <algorithm>
#include <cstdio>
#include <map>
#include <random>

#include "asciitox/benchmark.hpp"
#include "asciitox/errors.hpp"

namespace asciitox {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    }
    return out;
}

bool leaks(const BenchmarkItem& item) {
    if (!is_art_variant(item.variant)) return false;
    return lower(item.payload).find(lower(item.phrase)) != std::string::npos;
}

// Uniform in [0, bound) without modulo bias.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

std::string art_payload(Variant kind, std::string_view text, const Font& font, const GenConfig& config) {
    switch (kind) {
        case Variant::special:
            return to_text(synth_special(render(text, font, config.letter_spacing), config.token).lines);
        case Variant::filled:
            return to_text(synth_filled(text, font, config.filler, config.letter_spacing).lines);
        default:
            return to_text(render(text, font, config.letter_spacing));
    }
}

}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::regular: return "regular";
        case Variant::special: return "special";
        case Variant::filled: return "filled";
        case Variant::charswap: return "charswap";
        case Variant::benign: return "benign";
    }
    return "regular";
}

std::optional<Variant> parse_variant(std::string_view name) {
    for (Variant v : {Variant::regular, Variant::special, Variant::filled, Variant::charswap, Variant::benign}) {
        if (name == to_string(v)) return v;
    }
    return std::nullopt;
}

bool is_art_variant(Variant v) { return v == Variant::regular || v == Variant::special || v == Variant::filled; }

std::string content_hash(const BenchmarkItem& item, std::size_t salt) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xFF;  // field separator
        h *= 0x100000001b3ULL;
    };
    mix(to_string(item.variant));
    mix(item.phrase);
    mix(item.font_id);
    mix(item.payload);
    if (salt != 0) mix(std::to_string(salt));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(bounded(rng, i));
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::vector<BenchmarkItem> gen_dataset(const GenConfig& config, std::span<const Font> fonts,
                                       std::vector<std::string>* warnings) {
    if (config.phrases.empty()) throw InvalidArgument("gen_dataset: phrase list is empty");
    const auto warn = [&](std::string msg) {
        if (warnings) warnings->push_back(std::move(msg));
    };

    std::vector<Variant> art_variants;
    for (Variant v : {Variant::regular, Variant::special, Variant::filled}) {
        if (config.variants.count(v)) art_variants.push_back(v);
    }
    if (!art_variants.empty() && fonts.empty()) throw InvalidArgument("gen_dataset: art variants requested but no fonts given");

    std::vector<const Font*> usable;
    for (const auto& f : fonts) {
        if (!self_spelling_letters(f).empty()) {
            warn("font " + f.id + " skipped: glyphs drawn with their own letter");
            continue;
        }
        usable.push_back(&f);
    }
    if (!art_variants.empty() && usable.empty()) throw InvalidArgument("gen_dataset: every font failed the anti-leak rule");

    std::vector<BenchmarkItem> toxic;
    for (const auto& phrase : config.phrases) {
        for (const Font* font : usable) {
            for (Variant v : art_variants) {
                BenchmarkItem item;
                item.phrase = phrase;
                item.font_id = font->id;
                item.variant = v;
                item.label_toxic = true;
                item.label_art = true;
                try {
                    item.payload = art_payload(v, phrase, *font, config);
                } catch (const UnsupportedChar& e) {
                    throw UnsupportedChar(e.character(), "phrase '" + phrase + "', font " + font->id);
                }
                if (leaks(item)) {
                    warn("item skipped: payload spells '" + phrase + "' in plain text (font " + font->id + ")");
                    continue;
                }
                toxic.push_back(std::move(item));
            }
        }
        if (config.variants.count(Variant::charswap)) {
            BenchmarkItem item;
            item.phrase = phrase;
            item.variant = Variant::charswap;
            item.payload = char_swap(phrase, config.homoglyphs);
            item.label_toxic = true;
            item.label_art = false;
            toxic.push_back(std::move(item));
        }
    }

    // Benign items alternate plain sentences and neutral banners drawn the
    // same ways as the toxic art.
    std::vector<BenchmarkItem> benign;
    if (!toxic.empty() && config.benign_texts.empty()) throw InvalidArgument("gen_dataset: benign text list is empty");
    std::vector<std::pair<std::size_t, const Font*>> banner_pool;
    for (const Font* font : usable) {
        for (std::size_t t = 0; t < config.benign_texts.size(); ++t) {
            try {
                (void)render(config.benign_texts[t], *font, config.letter_spacing);
                banner_pool.emplace_back(t, font);
            } catch (const UnsupportedChar&) {
            }
        }
    }
    const auto text_order = seeded_permutation(config.benign_texts.size(), config.seed ^ 0x9e3779b97f4a7c15ULL);
    const auto banner_order = seeded_permutation(banner_pool.size(), config.seed ^ 0xbf58476d1ce4e5b9ULL);
    std::size_t next_text = 0;
    std::size_t next_banner = 0;
    for (std::size_t i = 0; i < toxic.size(); ++i) {
        BenchmarkItem item;
        item.variant = Variant::benign;
        item.label_toxic = false;
        const bool as_banner = (i % 2 == 1) && !banner_pool.empty() && !art_variants.empty();
        if (as_banner) {
            const auto& [t, font] = banner_pool[banner_order[next_banner++ % banner_pool.size()]];
            const Variant kind = art_variants[(i / 2) % art_variants.size()];
            item.phrase = config.benign_texts[t];
            item.font_id = font->id;
            item.payload = art_payload(kind, item.phrase, *font, config);
            item.label_art = true;
        } else {
            item.phrase = config.benign_texts[text_order[next_text++ % config.benign_texts.size()]];
            item.payload = item.phrase;
            item.label_art = false;
        }
        benign.push_back(std::move(item));
    }

    std::vector<BenchmarkItem> all;
    all.reserve(toxic.size() + benign.size());
    for (auto& t : toxic) all.push_back(std::move(t));
    for (auto& b : benign) all.push_back(std::move(b));

    std::map<std::string, int> seen;
    for (auto& item : all) {
        std::size_t salt = 0;
        std::string id = content_hash(item);
        while (seen.count(id)) id = content_hash(item, ++salt);
        seen[id] = 1;
        item.id = std::move(id);
    }

    const auto perm = seeded_permutation(all.size(), config.seed);
    std::vector<BenchmarkItem> shuffled;
    shuffled.reserve(all.size());
    for (std::size_t i : perm) shuffled.push_back(std::move(all[i]));
    return shuffled;
}

}  // namespace asciitox
