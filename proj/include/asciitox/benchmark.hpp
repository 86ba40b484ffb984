#pragma once

// Labelled payload generation, detector harness, and metrics.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asciitox/attack.hpp"
#include "asciitox/defense.hpp"
#include "asciitox/font.hpp"

namespace asciitox {

enum class Variant { regular, special, filled, charswap, benign };

const char* to_string(Variant v);
std::optional<Variant> parse_variant(std::string_view name);
bool is_art_variant(Variant v);

struct BenchmarkItem {
    std::string id;
    std::string phrase;
    std::string font_id;
    Variant variant = Variant::regular;
    std::string payload;
    bool label_toxic = false;
    bool label_art = false;

    friend bool operator==(const BenchmarkItem&, const BenchmarkItem&) = default;
};

struct GenConfig {
    std::vector<std::string> phrases;
    std::set<Variant> variants{Variant::regular, Variant::special, Variant::filled, Variant::charswap};
    std::string filler = "Little Red Riding Hood";
    std::string token = "<|end|>";
    std::vector<std::string> benign_texts;
    HomoglyphTable homoglyphs;
    std::uint64_t seed = 0;
    int letter_spacing = kDefaultLetterSpacing;
};

/// One item per (phrase, font, art variant), one charswap item per phrase,
/// then as many benign items as toxic ones; shuffled by seed. Fonts that
/// violate the anti-leak rule are skipped with a warning.
std::vector<BenchmarkItem> gen_dataset(const GenConfig& config, std::span<const Font> fonts,
                                       std::vector<std::string>* warnings = nullptr);

/// 16 hex digits of FNV-1a over the item's content fields.
std::string content_hash(const BenchmarkItem& item, std::size_t salt = 0);

/// Deterministic Fisher-Yates permutation of 0..n-1 driven by a 64-bit
/// Mersenne twister; identical across platforms for a given seed.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

struct Outcome {
    std::string item_id;
    bool flagged_toxic = false;
    bool flagged_art = false;
    std::string detector_id;
    double latency_ms = 0.0;
};

struct DetectorBinding {
    enum class Kind { builtin, external };
    Kind kind = Kind::builtin;
    const ScreenContext* context = nullptr;  // builtin
    std::string command;                     // external: argv, whitespace-split, quotes honoured
    int parallelism = 1;
    std::chrono::milliseconds timeout{10000};

    std::string id() const;

    /// "builtin" or "cmd:<command>".
    static DetectorBinding parse(std::string_view spec);
};

/// One Outcome per item, sorted by item id. Builtin items are screened in
/// parallel; external commands run once per item, at most `parallelism` at a
/// time. A timed-out item counts as not flagged and adds a warning. Running
/// an external detector sets SIGPIPE to ignored for the whole process.
std::vector<Outcome> run(std::span<const BenchmarkItem> items, const DetectorBinding& detector,
                         std::vector<std::string>* warnings = nullptr);
std::vector<Outcome> run_serial(std::span<const BenchmarkItem> items, const DetectorBinding& detector,
                                std::vector<std::string>* warnings = nullptr);

struct ExternalVerdict {
    bool toxic = false;
    bool art = false;
};

/// Parses the single stdout line `toxic=<0|1> art=<0|1>`.
std::optional<ExternalVerdict> parse_external_line(std::string_view stdout_text);

// ---------------------------------------------------------------------------
// Metrics

/// Exact non-negative fraction, always reduced, denominator > 0.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational of(std::int64_t num, std::int64_t den);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator/(Rational a, std::int64_t k);
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

enum class Task { toxicity, art_detection };
const char* to_string(Task t);
std::optional<Task> parse_task(std::string_view name);

struct Metrics {
    Rational asr;  // positives the detector missed
    Rational precision;
    Rational recall;
    Rational f1_macro;
    Confusion confusion;
    std::int64_t n_items = 0;
};

/// Metrics derived exactly from a confusion matrix. Undefined ratios and
/// classes without support evaluate to 0 with a warning.
Metrics metrics_from_confusion(const Confusion& c, std::vector<std::string>* warnings = nullptr);

/// Throws MissingOutcome / DuplicateOutcome unless outcomes cover items exactly once.
Metrics score(std::span<const BenchmarkItem> items, std::span<const Outcome> outcomes, Task task,
              std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Files

void write_dataset(std::span<const BenchmarkItem> items, const std::filesystem::path& path);
std::vector<BenchmarkItem> read_dataset(const std::filesystem::path& path);
std::string dataset_to_jsonl(std::span<const BenchmarkItem> items);
std::vector<BenchmarkItem> dataset_from_jsonl(std::string_view text);

void write_outcomes(std::span<const Outcome> outcomes, const std::filesystem::path& path);
std::vector<Outcome> read_outcomes(const std::filesystem::path& path);
std::string outcomes_to_jsonl(std::span<const Outcome> outcomes);
std::vector<Outcome> outcomes_from_jsonl(std::string_view text);

struct ScoredRun {
    std::string detector_id;
    Task task = Task::toxicity;
    Metrics metrics;
};

/// CSV columns: detector_id, task, n_items, tp, fp, fn, tn, asr, precision,
/// recall, f1_macro. Ratios are printed with 4 decimals.
std::string report_csv(std::span<const ScoredRun> runs);
std::string report_summary(std::span<const ScoredRun> runs);

/// Writes the CSV to `path` and the summary next to it as <stem>.summary.txt.
void write_report(std::span<const ScoredRun> runs, const std::filesystem::path& path);

}  // namespace asciitox
