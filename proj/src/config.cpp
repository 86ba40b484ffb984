#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asciitox/config.hpp"
#include "asciitox/errors.hpp"

namespace asciitox {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw InvalidArgument("config: bad value for " + std::string(key) + ": '" + std::string(value) + "'");
    return out;
}

double parse_double(std::string_view key, std::string_view value) {
    const std::string s(value);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw InvalidArgument("config: bad value for " + std::string(key) + ": '" + s + "'");
    return v;
}

std::filesystem::path or_default(const std::filesystem::path& p, const std::filesystem::path& fallback) {
    return p.empty() ? fallback : p;
}

}  // namespace

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("ASCIITOX_DATA_DIR"); env && *env) return env;
#ifdef ASCIITOX_DATA_DIR
    return ASCIITOX_DATA_DIR;
#else
    return "data";
#endif
}

std::filesystem::path Config::data() const { return or_default(data_dir, default_data_dir()); }
std::filesystem::path Config::fonts() const { return or_default(font_dir, data() / "fonts"); }
std::filesystem::path Config::vocab_dir() const { return data() / "vocab"; }
std::filesystem::path Config::lexicon() const {
    return or_default(lexicon_path, data() / "lexicon.txt");
}
std::filesystem::path Config::homoglyphs() const {
    return or_default(homoglyph_path, data() / "homoglyphs.tsv");
}

void Config::validate() const {
    params.validate();
    if (!(tau > 0.0 && tau <= 1.0)) throw InvalidArgument("tau must be in (0, 1]");
    if (parallelism < 1 || parallelism > 1024) throw InvalidArgument("parallelism must be in [1, 1024]");
    if (!std::filesystem::is_directory(fonts())) throw InvalidArgument("font directory not found: " + fonts().string());
    if (!std::filesystem::is_regular_file(lexicon())) throw InvalidArgument("lexicon not found: " + lexicon().string());
    if (!std::filesystem::is_regular_file(homoglyphs()))
        throw InvalidArgument("homoglyph table not found: " + homoglyphs().string());
    if (vocab_preset != "none" && !std::filesystem::is_directory(vocab_dir()))
        throw InvalidArgument("vocab directory not found: " + vocab_dir().string());
}

void apply_config_text(Config& config, std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InvalidArgument("config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "data_dir") config.data_dir = std::string(value);
        else if (key == "font_dir") config.font_dir = std::string(value);
        else if (key == "vocab_preset") config.vocab_preset = std::string(value);
        else if (key == "lexicon_path") config.lexicon_path = std::string(value);
        else if (key == "homoglyph_path") config.homoglyph_path = std::string(value);
        else if (key == "min_len") config.params.min_len = parse_number<int>(key, value);
        else if (key == "density") config.params.density = parse_double(key, value);
        else if (key == "run_len") config.params.run_len = parse_number<int>(key, value);
        else if (key == "window") config.params.window = parse_number<int>(key, value);
        else if (key == "tau") config.tau = parse_double(key, value);
        else if (key == "parallelism") config.parallelism = parse_number<int>(key, value);
        else if (key == "seed") config.seed = parse_number<std::uint64_t>(key, value);
        else throw InvalidArgument("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
}

void apply_config_file(Config& config, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str());
}

Vocab load_config_vocab(const Config& config) {
    if (config.vocab_preset == "none") return {};
    if (config.vocab_preset == "all") {
        std::vector<Vocab> all;
        for (const auto& id : list_vocab_presets(config.vocab_dir())) all.push_back(load_vocab_preset(config.vocab_dir(), id));
        return merge_vocabs(all);
    }
    return load_vocab_preset(config.vocab_dir(), config.vocab_preset);
}

ScreenContext make_screen_context(const Config& config, std::vector<std::string>* warnings) {
    const FontLibrary lib = load_font_dir(config.fonts());
    if (warnings) {
        for (const auto& e : lib.errors) warnings->push_back("font " + e.path.string() + ": " + e.message);
    }
    ScreenContext ctx;
    ctx.fonts = GlyphIndex(lib.fonts);
    ctx.vocab = load_config_vocab(config);
    ctx.lexicon = load_lexicon(config.lexicon());
    ctx.inverse_homoglyphs = load_homoglyph_table(config.homoglyphs()).inverse();
    ctx.params = config.params;
    ctx.tau = config.tau;
    return ctx;
}

}  // namespace asciitox
