#include "asciitox/decode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include "asciitox/errors.hpp"

#ifdef ASCIITOX_HAVE_OPENMP
#include <omp.h>
#endif

namespace asciitox {

namespace {

struct TrimmedMask {
    int height = 0;
    std::vector<std::uint64_t> columns;
};

TrimmedMask trim(const Mask& mask) {
    if (mask.empty() || mask.count() == 0) throw EmptyMask("mask has no inked cells");
    int top = mask.height();
    int bottom = -1;
    int left = mask.width();
    int right = -1;
    for (int r = 0; r < mask.height(); ++r) {
        for (int c = 0; c < mask.width(); ++c) {
            if (!mask.at(r, c)) continue;
            top = std::min(top, r);
            bottom = std::max(bottom, r);
            left = std::min(left, c);
            right = std::max(right, c);
        }
    }
    TrimmedMask t;
    t.height = bottom - top + 1;
    if (t.height > kMaxDecodeHeight) throw NoCompatibleFont("mask taller than any decodable font");
    t.columns.assign(static_cast<std::size_t>(right - left + 1), 0);
    for (int c = left; c <= right; ++c) {
        std::uint64_t bits = 0;
        for (int r = top; r <= bottom; ++r) {
            if (mask.at(r, c)) bits |= std::uint64_t{1} << (r - top);
        }
        t.columns[static_cast<std::size_t>(c - left)] = bits;
    }
    return t;
}

struct Placement {
    int x = 0;
    const GlyphTemplate* glyph = nullptr;
    double score = 1.0;
};

struct Candidate {
    std::size_t model = 0;
    int offset = 0;
    bool exact = false;
    std::string text;
    std::vector<double> scores;
    double confidence = 0.0;
    int unknown = 0;
};

bool glyph_matches_at(const GlyphTemplate& g, const std::vector<std::uint64_t>& cols, int x) {
    for (int k = 0; k < g.width(); ++k) {
        if (cols[static_cast<std::size_t>(x + k)] != g.columns[static_cast<std::size_t>(k)]) return false;
    }
    return true;
}

// Parse ink runs exactly; every glyph must start at a run start and end at a run end.
std::optional<std::vector<Placement>> exact_parse(const FontModel& model, const std::vector<std::uint64_t>& cols) {
    const int width = static_cast<int>(cols.size());
    std::vector<int> starts;
    std::vector<int> run_ending_at(static_cast<std::size_t>(width), -1);
    for (int x = 0; x < width; ++x) {
        const bool ink = cols[static_cast<std::size_t>(x)] != 0;
        const bool prev_ink = x > 0 && cols[static_cast<std::size_t>(x - 1)] != 0;
        const bool next_ink = x + 1 < width && cols[static_cast<std::size_t>(x + 1)] != 0;
        if (ink && !prev_ink) starts.push_back(x);
        if (ink && !next_ink) run_ending_at[static_cast<std::size_t>(x)] = static_cast<int>(starts.size()) - 1;
    }
    const std::size_t runs = starts.size();

    // next_run[i][k]: run index after glyph k placed at run i, or -1.
    std::vector<std::vector<std::pair<int, const GlyphTemplate*>>> edges(runs);
    for (std::size_t i = 0; i < runs; ++i) {
        const int x = starts[i];
        for (const auto& g : model.glyphs) {
            const int end = x + g.width() - 1;
            if (end >= width) continue;
            const int j = run_ending_at[static_cast<std::size_t>(end)];
            if (j < static_cast<int>(i)) continue;
            if (glyph_matches_at(g, cols, x)) edges[i].emplace_back(j + 1, &g);
        }
    }

    std::vector<char> feasible(runs + 1, 0);
    feasible[runs] = 1;
    for (std::size_t i = runs; i-- > 0;) {
        for (const auto& [next, g] : edges[i]) {
            if (feasible[static_cast<std::size_t>(next)]) {
                feasible[i] = 1;
                break;
            }
        }
    }
    if (!feasible[0]) return std::nullopt;

    std::vector<Placement> out;
    std::size_t i = 0;
    while (i < runs) {
        for (const auto& [next, g] : edges[i]) {
            if (feasible[static_cast<std::size_t>(next)]) {
                out.push_back({starts[i], g, 1.0});
                i = static_cast<std::size_t>(next);
                break;
            }
        }
    }
    return out;
}

// Cover every inked column with glyphs, minimising disagreeing cells.
std::vector<Placement> approximate_parse(const FontModel& model, const std::vector<std::uint64_t>& cols) {
    const int width = static_cast<int>(cols.size());
    constexpr long kInf = std::numeric_limits<long>::max() / 4;
    std::vector<long> cost(static_cast<std::size_t>(width) + 1, kInf);
    std::vector<int> count(static_cast<std::size_t>(width) + 1, 0);
    std::vector<const GlyphTemplate*> choice(static_cast<std::size_t>(width), nullptr);
    std::vector<long> choice_mismatch(static_cast<std::size_t>(width), 0);
    cost[static_cast<std::size_t>(width)] = 0;

    const auto col_at = [&](int x) { return x < width ? cols[static_cast<std::size_t>(x)] : std::uint64_t{0}; };

    for (int x = width - 1; x >= 0; --x) {
        const auto ux = static_cast<std::size_t>(x);
        long best = kInf;
        int best_count = 0;
        if (cols[ux] == 0) {
            best = cost[ux + 1];
            best_count = count[ux + 1];
        }
        for (const auto& g : model.glyphs) {
            long mismatch = 0;
            for (int k = 0; k < g.width(); ++k) {
                mismatch += std::popcount(col_at(x + k) ^ g.columns[static_cast<std::size_t>(k)]);
            }
            const int end = std::min(width, x + g.width());
            const long total = mismatch + cost[static_cast<std::size_t>(end)];
            const int total_count = count[static_cast<std::size_t>(end)] + 1;
            if (total < best || (total == best && total_count < best_count)) {
                best = total;
                best_count = total_count;
                choice[ux] = &g;
                choice_mismatch[ux] = mismatch;
            }
        }
        if (cols[ux] == 0 && best == cost[ux + 1] && best_count == count[ux + 1]) choice[ux] = nullptr;
        cost[ux] = best;
        count[ux] = best_count;
    }

    std::vector<Placement> out;
    int x = 0;
    while (x < width) {
        const auto ux = static_cast<std::size_t>(x);
        if (choice[ux] == nullptr) {
            ++x;
            continue;
        }
        const GlyphTemplate* g = choice[ux];
        const double cells = static_cast<double>(model.height) * g->width();
        out.push_back({x, g, 1.0 - static_cast<double>(choice_mismatch[ux]) / cells});
        x += g->width();
    }
    return out;
}

Candidate assemble(std::size_t model_index, const FontModel& model, int offset, bool exact,
                   const std::vector<Placement>& placements, double tau) {
    Candidate c;
    c.model = model_index;
    c.offset = offset;
    c.exact = exact;
    if (placements.empty()) return c;

    // Letter spacing: the tightest gap once glyph side bearings are removed.
    int spacing = std::numeric_limits<int>::max();
    for (std::size_t k = 0; k + 1 < placements.size(); ++k) {
        const auto& a = placements[k];
        const auto& b = placements[k + 1];
        const int gap = b.x - (a.x + a.glyph->width());
        spacing = std::min(spacing, gap - a.glyph->trail - b.glyph->lead);
    }
    if (spacing == std::numeric_limits<int>::max() || spacing < 0) spacing = 0;
    const int space_step = model.space_width + spacing;

    for (std::size_t k = 0; k < placements.size(); ++k) {
        const auto& p = placements[k];
        if (k > 0 && space_step > 0) {
            const auto& prev = placements[k - 1];
            const int gap = p.x - (prev.x + prev.glyph->width());
            const int extra = gap - prev.glyph->trail - p.glyph->lead - spacing;
            const int spaces = std::max(0, static_cast<int>(std::lround(static_cast<double>(extra) / space_step)));
            for (int s = 0; s < spaces; ++s) {
                c.text.push_back(' ');
                c.scores.push_back(1.0);
            }
        }
        if (p.score < tau) {
            c.text.push_back('?');
            ++c.unknown;
        } else {
            c.text.push_back(p.glyph->letter);
        }
        c.scores.push_back(p.score);
    }
    double sum = 0.0;
    for (double s : c.scores) sum += s;
    c.confidence = sum / static_cast<double>(c.scores.size());
    return c;
}

struct Task {
    std::size_t model;
    int offset;
};

std::vector<Task> compatible_tasks(const GlyphIndex& index, const TrimmedMask& mask) {
    std::vector<Task> tasks;
    const auto& models = index.models();
    for (std::size_t m = 0; m < models.size(); ++m) {
        if (models[m].glyphs.empty()) continue;
        for (int o : models[m].offsets) {
            if (o + mask.height <= models[m].height) tasks.push_back({m, o});
        }
    }
    if (tasks.empty()) throw NoCompatibleFont("no font can hold a mask of height " + std::to_string(mask.height));
    return tasks;
}

std::vector<std::uint64_t> shifted(const TrimmedMask& mask, int offset) {
    std::vector<std::uint64_t> out(mask.columns.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask.columns[i] << offset;
    return out;
}

std::optional<Candidate> run_exact(const GlyphIndex& index, const TrimmedMask& mask, const Task& t, double tau) {
    const FontModel& model = index.models()[t.model];
    const auto cols = shifted(mask, t.offset);
    auto parse = exact_parse(model, cols);
    if (!parse) return std::nullopt;
    return assemble(t.model, model, t.offset, true, *parse, tau);
}

Candidate run_approximate(const GlyphIndex& index, const TrimmedMask& mask, const Task& t, double tau) {
    const FontModel& model = index.models()[t.model];
    const auto cols = shifted(mask, t.offset);
    return assemble(t.model, model, t.offset, false, approximate_parse(model, cols), tau);
}

// Total order, independent of evaluation order.
bool better(const Candidate& a, const Candidate& b) {
    if (a.exact != b.exact) return a.exact;
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.unknown != b.unknown) return a.unknown < b.unknown;
    if (a.model != b.model) return a.model < b.model;
    return a.offset < b.offset;
}

Decoded finish(const GlyphIndex& index, Candidate c) {
    Decoded d;
    d.text = std::move(c.text);
    d.font_id = index.models()[c.model].id;
    d.per_glyph_scores = std::move(c.scores);
    d.confidence = c.confidence;
    d.exact = c.exact;
    return d;
}

template <bool Parallel>
Decoded decode_impl(const Mask& mask, const GlyphIndex& index, double tau) {
    if (tau < 0.0 || tau > 1.0) throw InvalidArgument("tau must be within [0, 1]");
    if (index.empty()) throw NoCompatibleFont("no fonts to decode against");
    const TrimmedMask trimmed = trim(mask);
    const auto tasks = compatible_tasks(index, trimmed);
    const auto n = static_cast<long>(tasks.size());

    std::vector<std::optional<Candidate>> exact(tasks.size());
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) {
            exact[static_cast<std::size_t>(i)] = run_exact(index, trimmed, tasks[static_cast<std::size_t>(i)], tau);
        }
    } else {
        for (long i = 0; i < n; ++i) {
            exact[static_cast<std::size_t>(i)] = run_exact(index, trimmed, tasks[static_cast<std::size_t>(i)], tau);
        }
    }
    const Candidate* best = nullptr;
    for (const auto& c : exact) {
        if (c && (best == nullptr || better(*c, *best))) best = &*c;
    }
    if (best != nullptr) return finish(index, *best);

    std::vector<Candidate> approx(tasks.size());
    if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < n; ++i) {
            approx[static_cast<std::size_t>(i)] = run_approximate(index, trimmed, tasks[static_cast<std::size_t>(i)], tau);
        }
    } else {
        for (long i = 0; i < n; ++i) {
            approx[static_cast<std::size_t>(i)] = run_approximate(index, trimmed, tasks[static_cast<std::size_t>(i)], tau);
        }
    }
    best = &approx.front();
    for (const auto& c : approx) {
        if (better(c, *best)) best = &c;
    }
    return finish(index, *best);
}

std::vector<std::uint64_t> glyph_columns(const Glyph& glyph) {
    std::vector<std::uint64_t> cols(static_cast<std::size_t>(glyph.width()), 0);
    for (int r = 0; r < glyph.height(); ++r) {
        const auto& row = glyph.rows[static_cast<std::size_t>(r)];
        for (int c = 0; c < glyph.width(); ++c) {
            if (row[static_cast<std::size_t>(c)] != U' ') cols[static_cast<std::size_t>(c)] |= std::uint64_t{1} << r;
        }
    }
    return cols;
}

}  // namespace

FontModel build_font_model(const Font& font) {
    FontModel model;
    model.id = font.id;
    model.height = font.height;
    if (const Glyph* space = font.find(U' ')) model.space_width = space->width();
    if (font.height > kMaxDecodeHeight) return model;

    std::vector<char32_t> sources;
    for (char32_t c = U'A'; c <= U'Z'; ++c) sources.push_back(c);
    for (char32_t c = U'a'; c <= U'z'; ++c) sources.push_back(c);

    for (char32_t src : sources) {
        const Glyph* g = font.find(src);
        if (g == nullptr || g->height() != font.height || g->blank()) continue;
        const auto cols = glyph_columns(*g);
        int lead = 0;
        while (cols[static_cast<std::size_t>(lead)] == 0) ++lead;
        int trail = 0;
        while (cols[cols.size() - 1 - static_cast<std::size_t>(trail)] == 0) ++trail;

        GlyphTemplate t;
        t.source = src;
        t.letter = static_cast<char>(src >= U'a' ? src - 32 : src);
        t.lead = lead;
        t.trail = trail;
        t.columns.assign(cols.begin() + lead, cols.end() - trail);
        std::uint64_t any = 0;
        for (auto c : t.columns) any |= c;
        t.top = std::countr_zero(any);

        const bool duplicate = std::any_of(model.glyphs.begin(), model.glyphs.end(), [&](const GlyphTemplate& o) {
            return o.letter == t.letter && o.columns == t.columns && o.lead == t.lead && o.trail == t.trail;
        });
        if (!duplicate) model.glyphs.push_back(std::move(t));
    }
    std::stable_sort(model.glyphs.begin(), model.glyphs.end(), [](const GlyphTemplate& a, const GlyphTemplate& b) {
        if (a.width() != b.width()) return a.width() > b.width();
        if (a.letter != b.letter) return a.letter < b.letter;
        return a.source < b.source;
    });
    for (const auto& g : model.glyphs) model.offsets.push_back(g.top);
    std::sort(model.offsets.begin(), model.offsets.end());
    model.offsets.erase(std::unique(model.offsets.begin(), model.offsets.end()), model.offsets.end());
    return model;
}

GlyphIndex::GlyphIndex(std::span<const Font> fonts) {
    models_.reserve(fonts.size());
    for (const auto& f : fonts) {
        if (f.height <= kMaxDecodeHeight) models_.push_back(build_font_model(f));
    }
}

Decoded decode(const Mask& mask, const GlyphIndex& index, double tau) { return decode_impl<true>(mask, index, tau); }

Decoded decode(const Mask& mask, std::span<const Font> fonts, double tau) {
    if (fonts.empty()) throw NoCompatibleFont("no fonts to decode against");
    return decode(mask, GlyphIndex(fonts), tau);
}

Decoded decode_serial(const Mask& mask, const GlyphIndex& index, double tau) {
    return decode_impl<false>(mask, index, tau);
}

std::vector<GlyphCollision> collision_audit(const Font& font) {
    std::vector<GlyphCollision> out;
    if (font.height > kMaxDecodeHeight) return out;
    const FontModel model = build_font_model(font);
    for (std::size_t i = 0; i < model.glyphs.size(); ++i) {
        for (std::size_t j = i + 1; j < model.glyphs.size(); ++j) {
            const auto& a = model.glyphs[i];
            const auto& b = model.glyphs[j];
            if (a.letter != b.letter && a.columns == b.columns) {
                out.push_back({std::min(a.source, b.source), std::max(a.source, b.source)});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const GlyphCollision& a, const GlyphCollision& b) {
        return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    return out;
}

}  // namespace asciitox
