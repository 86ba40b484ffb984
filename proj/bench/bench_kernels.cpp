// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "asciitox/attack.hpp"
#include "asciitox/config.hpp"
#include "asciitox/decode.hpp"

using namespace asciitox;

namespace {

const FontLibrary& library() {
    static const FontLibrary lib = load_font_dir(std::filesystem::path(ASCIITOX_DATA) / "fonts");
    return lib;
}

const GlyphIndex& index() {
    static const GlyphIndex idx(library().fonts);
    return idx;
}

const ScreenContext& context() {
    static const ScreenContext ctx = [] {
        Config c;
        c.data_dir = ASCIITOX_DATA;
        return make_screen_context(c);
    }();
    return ctx;
}

Mask sample_mask() { return banner_mask(render("eat shit", *library().find("standard"), 1)); }

std::vector<std::string> sample_payloads(std::size_t n) {
    std::vector<std::string> out;
    const auto& fonts = library().fonts;
    for (std::size_t i = 0; i < n; ++i) {
        const Font& f = fonts[(i * 7) % fonts.size()];
        switch (i % 3) {
            case 0: out.push_back(to_text(render("moron", f, 1))); break;
            case 1: out.push_back(to_text(synth_filled("idiot", f, "Little Red Riding Hood", 1).lines)); break;
            default: out.push_back("have a nice day"); break;
        }
    }
    return out;
}

void BM_decode(benchmark::State& state) {
    const Mask m = sample_mask();
    for (auto _ : state) benchmark::DoNotOptimize(decode(m, index()));
}

void BM_decode_serial(benchmark::State& state) {
    const Mask m = sample_mask();
    for (auto _ : state) benchmark::DoNotOptimize(decode_serial(m, index()));
}

void BM_screen_batch(benchmark::State& state) {
    const auto texts = sample_payloads(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(screen_batch(texts, context()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_screen_batch_serial(benchmark::State& state) {
    const auto texts = sample_payloads(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(screen_batch_serial(texts, context()));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_decode)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_decode_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_screen_batch)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_screen_batch_serial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
