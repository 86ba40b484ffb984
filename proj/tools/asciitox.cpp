// asciitox: render, attack, screen and benchmark ASCII-art payloads.
//
// Exit codes: 0 ok, 2 usage or input error, 3 toxic content found,
// 4 internal error. Data goes to stdout, diagnostics to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "asciitox/attack.hpp"
#include "asciitox/benchmark.hpp"
#include "asciitox/config.hpp"
#include "asciitox/defense.hpp"
#include "asciitox/errors.hpp"
#include "asciitox/font.hpp"
#include "asciitox/segmenter.hpp"

#ifndef ASCIITOX_VERSION
#define ASCIITOX_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace asciitox;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kToxic = 3;
constexpr int kInternal = 4;

struct UsageError : Error {
    using Error::Error;
};

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") return read_all(std::cin);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    return read_all(in);
}

std::vector<std::string> read_list(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() != '#') out.push_back(line);
    }
    return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

Font resolve_font(const Config& config, const std::string& name) {
    const fs::path as_path(name);
    if (as_path.extension() == ".flf" || as_path.has_parent_path()) return load_font_file(as_path);
    const fs::path file = config.fonts() / (name + ".flf");
    if (!fs::is_regular_file(file)) throw FontNotFound("no font '" + name + "' in " + config.fonts().string());
    return load_font_file(file);
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << data)) throw IoError("cannot write " + path);
}

std::string version_text(const Config& config) {
    std::ostringstream out;
    out << "asciitox " << ASCIITOX_VERSION << '\n';
    const auto show = [&](const char* what, const std::string& version) {
        out << "  " << what << ' ' << (version.empty() ? "unversioned" : version) << '\n';
    };
    try {
        show("lexicon", load_lexicon(config.lexicon()).version());
    } catch (const Error&) {
        out << "  lexicon missing\n";
    }
    try {
        show("homoglyphs", load_homoglyph_table(config.homoglyphs()).version());
    } catch (const Error&) {
        out << "  homoglyphs missing\n";
    }
    for (const auto& id : list_vocab_presets(config.vocab_dir())) {
        show(("vocab " + id).c_str(), load_vocab_preset(config.vocab_dir(), id).version());
    }
    return out.str();
}

nlohmann::json verdict_json(const Verdict& v, const ScreenReport& report) {
    nlohmann::json obj;
    obj["channel"] = to_string(v.channel);
    obj["toxic"] = v.toxic;
    obj["matched_terms"] = v.matched_terms;
    obj["art"] = report.art();
    if (v.channel == Channel::decoded && report.decoded) {
        obj["decoded"] = report.decoded->text;
        obj["font_id"] = report.decoded->font_id;
        obj["confidence"] = report.decoded->confidence;
    }
    return obj;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ASCII-art attack synthesis, screening and benchmarking"};
    app.require_subcommand(0, 1);

    Config config;
    std::string config_file;
    std::string data_dir;
    bool show_version = false;
    app.add_flag("--version", show_version, "Print tool and data-file versions");
    app.add_option("--config", config_file, "key=value config file; flags override it")->check(CLI::ExistingFile);
    app.add_option("--data-dir", data_dir, "Bundled data directory");

    // Flags shared by subcommands are applied after the config file is read,
    // so each is captured as optional.
    std::optional<std::string> font_dir;
    std::optional<int> spacing;
    std::optional<std::string> vocab_preset, lexicon_path, homoglyph_path;
    std::optional<int> min_len, run_len, window, parallelism;
    std::optional<double> density, tau;
    std::optional<std::uint64_t> seed;
    const auto add_font_dir = [&](CLI::App* sub) { sub->add_option("--font-dir", font_dir, "Directory of .flf fonts"); };
    const auto add_screen_flags = [&](CLI::App* sub) {
        add_font_dir(sub);
        sub->add_option("--vocab-preset", vocab_preset, "Special-token preset id, 'all' or 'none'");
        sub->add_option("--lexicon", lexicon_path, "Lexicon file");
        sub->add_option("--homoglyphs", homoglyph_path, "Homoglyph table");
        sub->add_option("--min-len", min_len, "Shortest line that can be arty");
        sub->add_option("--density", density, "Symbol share that marks a line arty");
        sub->add_option("--run-len", run_len, "Repeated-symbol run that marks a line arty");
        sub->add_option("--window", window, "Consecutive arty lines needed");
        sub->add_option("--tau", tau, "Per-glyph decode threshold");
    };

    auto* render_cmd = app.add_subcommand("render", "Render text with a font");
    std::string text, font_name;
    render_cmd->add_option("--text", text, "Text to render")->required();
    render_cmd->add_option("--font", font_name, "Font id or .flf path")->required();
    render_cmd->add_option("--spacing", spacing, "Blank columns between glyphs")->check(CLI::NonNegativeNumber);
    add_font_dir(render_cmd);

    auto* attack_cmd = app.add_subcommand("attack", "Build an attack payload");
    std::string mode;
    std::optional<std::string> token, filler;
    attack_cmd->add_option("--mode", mode, "regular|special|filled|charswap")
        ->required()
        ->check(CLI::IsMember({"regular", "special", "filled", "charswap"}));
    attack_cmd->add_option("--text", text, "Text to hide")->required();
    attack_cmd->add_option("--font", font_name, "Font id or .flf path");
    attack_cmd->add_option("--token", token, "Special token (special mode)");
    attack_cmd->add_option("--filler", filler, "Filler text (filled mode)");
    attack_cmd->add_option("--spacing", spacing, "Blank columns between glyphs")->check(CLI::NonNegativeNumber);
    attack_cmd->add_option("--homoglyphs", homoglyph_path, "Homoglyph table (charswap mode)");
    add_font_dir(attack_cmd);

    auto* screen_cmd = app.add_subcommand("screen", "Screen text for hidden toxic content");
    std::string input = "-";
    screen_cmd->add_option("--input", input, "File to screen, '-' for stdin");
    add_screen_flags(screen_cmd);

    auto* bench = app.add_subcommand("bench", "Benchmark datasets");
    bench->require_subcommand(1);

    auto* gen_cmd = bench->add_subcommand("gen", "Generate a labelled dataset");
    std::string out_path, phrases_path, benign_path;
    std::vector<std::string> variant_names;
    gen_cmd->add_option("--fonts", font_dir, "Directory of .flf fonts");
    gen_cmd->add_option("--out", out_path, "Dataset JSONL ('-' for stdout)");
    gen_cmd->add_option("--phrases", phrases_path, "Phrase list, one per line");
    gen_cmd->add_option("--benign", benign_path, "Benign text list, one per line");
    gen_cmd->add_option("--variants", variant_names, "Subset of regular,special,filled,charswap")->delimiter(',');
    gen_cmd->add_option("--token", token, "Special token for the special variant");
    gen_cmd->add_option("--filler", filler, "Filler for the filled variant");
    gen_cmd->add_option("--spacing", spacing, "Blank columns between glyphs")->check(CLI::NonNegativeNumber);
    gen_cmd->add_option("--homoglyphs", homoglyph_path, "Homoglyph table");
    gen_cmd->add_option("--seed", seed, "Shuffle seed");

    auto* run_cmd = bench->add_subcommand("run", "Run a detector over a dataset");
    std::string dataset_path, detector_spec = "builtin";
    int timeout_ms = 10000;
    run_cmd->add_option("--dataset", dataset_path, "Dataset JSONL")->required();
    run_cmd->add_option("--detector", detector_spec, "'builtin' or 'cmd:<command>'");
    run_cmd->add_option("--out", out_path, "Outcomes JSONL ('-' for stdout)");
    run_cmd->add_option("--parallelism", parallelism, "Concurrent external invocations");
    run_cmd->add_option("--timeout-ms", timeout_ms, "Per-item timeout for external detectors")->check(CLI::PositiveNumber);
    add_screen_flags(run_cmd);

    auto* score_cmd = bench->add_subcommand("score", "Score outcomes against labels");
    std::vector<std::string> outcome_paths;
    std::string task_name = "all";
    score_cmd->add_option("--dataset", dataset_path, "Dataset JSONL")->required();
    score_cmd->add_option("--outcomes", outcome_paths, "Outcome JSONL files, one per detector")->required();
    score_cmd->add_option("--task", task_name, "toxicity|art_detection|all")
        ->check(CLI::IsMember({"toxicity", "art_detection", "all"}));
    score_cmd->add_option("--out", out_path, "Report CSV; the summary goes next to it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (!config_file.empty()) apply_config_file(config, config_file);
        if (!data_dir.empty()) config.data_dir = data_dir;
        if (font_dir) config.font_dir = *font_dir;
        if (vocab_preset) config.vocab_preset = *vocab_preset;
        if (lexicon_path) config.lexicon_path = *lexicon_path;
        if (homoglyph_path) config.homoglyph_path = *homoglyph_path;
        if (min_len) config.params.min_len = *min_len;
        if (run_len) config.params.run_len = *run_len;
        if (window) config.params.window = *window;
        if (density) config.params.density = *density;
        if (tau) config.tau = *tau;
        if (parallelism) config.parallelism = *parallelism;
        if (seed) config.seed = *seed;
        const int letter_spacing = spacing.value_or(kDefaultLetterSpacing);

        if (show_version) {
            std::cout << version_text(config);
            return kOk;
        }
        if (app.get_subcommands().empty()) {
            std::cerr << app.help();
            return kUsage;
        }

        if (*render_cmd) {
            const Font font = resolve_font(config, font_name);
            std::cout << to_text(render(text, font, letter_spacing).lines);
            return kOk;
        }

        if (*attack_cmd) {
            if (mode == "charswap") {
                std::cout << char_swap(text, load_homoglyph_table(config.homoglyphs())) << '\n';
                return kOk;
            }
            if (font_name.empty()) throw UsageError("--font is required for --mode " + mode);
            const Font font = resolve_font(config, font_name);
            if (mode == "regular") {
                std::cout << to_text(render(text, font, letter_spacing).lines);
            } else if (mode == "special") {
                const std::string tok = token.value_or(load_vocab_preset(config.vocab_dir(), "phi-3.5").primary());
                std::cout << to_text(synth_special(render(text, font, letter_spacing), tok).lines);
            } else {
                if (!filler) throw UsageError("--filler is required for --mode filled");
                std::cout << to_text(synth_filled(text, font, *filler, letter_spacing).lines);
            }
            return kOk;
        }

        if (*screen_cmd) {
            config.validate();
            std::vector<std::string> warnings;
            const ScreenContext ctx = make_screen_context(config, &warnings);
            const ScreenReport report = screen(read_input(input), ctx);
            warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());
            print_warnings(warnings);
            for (const auto& v : report.verdicts) std::cout << verdict_json(v, report).dump() << '\n';
            return report.toxic() ? kToxic : kOk;
        }

        if (*gen_cmd) {
            GenConfig gen;
            gen.phrases = read_list(phrases_path.empty() ? config.data() / "phrases.txt" : fs::path(phrases_path));
            gen.benign_texts = read_list(benign_path.empty() ? config.data() / "benign.txt" : fs::path(benign_path));
            if (!variant_names.empty()) {
                gen.variants.clear();
                for (const auto& name : variant_names) {
                    const auto v = parse_variant(name);
                    if (!v || *v == Variant::benign) throw UsageError("unknown variant '" + name + "'");
                    gen.variants.insert(*v);
                }
            }
            if (token) gen.token = *token;
            if (filler) gen.filler = *filler;
            gen.letter_spacing = letter_spacing;
            gen.seed = config.seed;
            gen.homoglyphs = load_homoglyph_table(config.homoglyphs());
            std::vector<std::string> warnings;
            const FontLibrary lib = load_font_dir(config.fonts());
            for (const auto& e : lib.errors) warnings.push_back("font " + e.path.string() + ": " + e.message);
            const auto items = gen_dataset(gen, lib.fonts, &warnings);
            print_warnings(warnings);
            write_output(out_path, dataset_to_jsonl(items));
            std::cerr << items.size() << " items\n";
            return kOk;
        }

        if (*run_cmd) {
            const auto items = read_dataset(dataset_path);
            DetectorBinding detector = DetectorBinding::parse(detector_spec);
            detector.parallelism = config.parallelism;
            detector.timeout = std::chrono::milliseconds(timeout_ms);
            std::vector<std::string> warnings;
            ScreenContext ctx;
            if (detector.kind == DetectorBinding::Kind::builtin) {
                config.validate();
                ctx = make_screen_context(config, &warnings);
                detector.context = &ctx;
            }
            const auto outcomes = run(items, detector, &warnings);
            print_warnings(warnings);
            write_output(out_path, outcomes_to_jsonl(outcomes));
            return kOk;
        }

        if (*score_cmd) {
            const auto items = read_dataset(dataset_path);
            std::vector<Task> tasks;
            if (task_name == "all") tasks = {Task::toxicity, Task::art_detection};
            else tasks = {*parse_task(task_name)};
            std::vector<ScoredRun> runs;
            std::vector<std::string> warnings;
            for (const auto& path : outcome_paths) {
                const auto outcomes = read_outcomes(path);
                const std::string id = outcomes.empty() ? fs::path(path).stem().string() : outcomes.front().detector_id;
                for (Task t : tasks) runs.push_back({id, t, score(items, outcomes, t, &warnings)});
            }
            print_warnings(warnings);
            if (out_path.empty() || out_path == "-") {
                std::cout << report_csv(runs);
            } else {
                write_report(runs, out_path);
                std::cerr << report_summary(runs);
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kOk;
}
