#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "asciitox/benchmark.hpp"
#include "asciitox/errors.hpp"

namespace asciitox {

namespace {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << data;
    if (!out.flush()) throw IoError("write failed: " + path.string());
}

template <typename T>
T field(const json& obj, const char* key, std::size_t line) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw SchemaViolation(line, std::string("missing key '") + key + "'");
    try {
        return it->template get<T>();
    } catch (const json::exception&) {
        throw SchemaViolation(line, std::string("wrong type for '") + key + "'");
    }
}

template <typename F>
void for_each_line(std::string_view text, F&& fn) {
    std::size_t line = 0;
    while (!text.empty()) {
        ++line;
        const auto nl = text.find('\n');
        std::string_view row = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
        if (row.find_first_not_of(" \t") == std::string_view::npos) continue;
        json obj;
        try {
            obj = json::parse(row);
        } catch (const json::parse_error& e) {
            throw SchemaViolation(line, std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw SchemaViolation(line, "expected a JSON object");
        fn(obj, line);
    }
}

std::string fixed4(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", r.value());
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string dataset_to_jsonl(std::span<const BenchmarkItem> items) {
    std::string out;
    for (const auto& item : items) {
        json obj = json::object();
        obj["id"] = item.id;
        obj["phrase"] = item.phrase;
        obj["font_id"] = item.font_id;
        obj["variant"] = to_string(item.variant);
        obj["payload"] = item.payload;
        obj["label_toxic"] = item.label_toxic;
        obj["label_art"] = item.label_art;
        out += obj.dump(-1, ' ', false, json::error_handler_t::strict);
        out += '\n';
    }
    return out;
}

std::vector<BenchmarkItem> dataset_from_jsonl(std::string_view text) {
    std::vector<BenchmarkItem> items;
    for_each_line(text, [&](const json& obj, std::size_t line) {
        BenchmarkItem item;
        item.id = field<std::string>(obj, "id", line);
        item.phrase = field<std::string>(obj, "phrase", line);
        item.font_id = field<std::string>(obj, "font_id", line);
        const auto variant = field<std::string>(obj, "variant", line);
        const auto v = parse_variant(variant);
        if (!v) throw SchemaViolation(line, "unknown variant '" + variant + "'");
        item.variant = *v;
        item.payload = field<std::string>(obj, "payload", line);
        item.label_toxic = field<bool>(obj, "label_toxic", line);
        item.label_art = field<bool>(obj, "label_art", line);
        if (item.id.empty()) throw SchemaViolation(line, "empty id");
        items.push_back(std::move(item));
    });
    return items;
}

void write_dataset(std::span<const BenchmarkItem> items, const std::filesystem::path& path) {
    write_file(path, dataset_to_jsonl(items));
}

std::vector<BenchmarkItem> read_dataset(const std::filesystem::path& path) { return dataset_from_jsonl(read_file(path)); }

std::string outcomes_to_jsonl(std::span<const Outcome> outcomes) {
    std::string out;
    for (const auto& o : outcomes) {
        json obj = json::object();
        obj["item_id"] = o.item_id;
        obj["flagged_toxic"] = o.flagged_toxic;
        obj["flagged_art"] = o.flagged_art;
        obj["detector_id"] = o.detector_id;
        obj["latency_ms"] = o.latency_ms;
        out += obj.dump();
        out += '\n';
    }
    return out;
}

std::vector<Outcome> outcomes_from_jsonl(std::string_view text) {
    std::vector<Outcome> outcomes;
    for_each_line(text, [&](const json& obj, std::size_t line) {
        Outcome o;
        o.item_id = field<std::string>(obj, "item_id", line);
        o.flagged_toxic = field<bool>(obj, "flagged_toxic", line);
        o.flagged_art = field<bool>(obj, "flagged_art", line);
        o.detector_id = field<std::string>(obj, "detector_id", line);
        o.latency_ms = field<double>(obj, "latency_ms", line);
        if (o.latency_ms < 0) throw SchemaViolation(line, "negative latency_ms");
        outcomes.push_back(std::move(o));
    });
    return outcomes;
}

void write_outcomes(std::span<const Outcome> outcomes, const std::filesystem::path& path) {
    write_file(path, outcomes_to_jsonl(outcomes));
}

std::vector<Outcome> read_outcomes(const std::filesystem::path& path) { return outcomes_from_jsonl(read_file(path)); }

std::string report_csv(std::span<const ScoredRun> runs) {
    std::string out = "detector_id,task,n_items,tp,fp,fn,tn,asr,precision,recall,f1_macro\n";
    for (const auto& r : runs) {
        const auto& m = r.metrics;
        out += csv_field(r.detector_id) + ',' + to_string(r.task) + ',' + std::to_string(m.n_items) + ',' +
               std::to_string(m.confusion.tp) + ',' + std::to_string(m.confusion.fp) + ',' +
               std::to_string(m.confusion.fn) + ',' + std::to_string(m.confusion.tn) + ',' + fixed4(m.asr) + ',' +
               fixed4(m.precision) + ',' + fixed4(m.recall) + ',' + fixed4(m.f1_macro) + '\n';
    }
    return out;
}

std::string report_summary(std::span<const ScoredRun> runs) {
    std::ostringstream out;
    for (const auto& r : runs) {
        const auto& m = r.metrics;
        out << r.detector_id << " / " << to_string(r.task) << " (" << m.n_items << " items)\n"
            << "  confusion  tp=" << m.confusion.tp << " fp=" << m.confusion.fp << " fn=" << m.confusion.fn
            << " tn=" << m.confusion.tn << '\n'
            << "  asr        " << fixed4(m.asr) << "  (" << m.asr.num << '/' << m.asr.den << ")\n"
            << "  precision  " << fixed4(m.precision) << '\n'
            << "  recall     " << fixed4(m.recall) << '\n'
            << "  f1_macro   " << fixed4(m.f1_macro) << '\n';
    }
    return out.str();
}

void write_report(std::span<const ScoredRun> runs, const std::filesystem::path& path) {
    write_file(path, report_csv(runs));
    auto summary = path;
    summary.replace_filename(path.stem().string() + ".summary.txt");
    write_file(summary, report_summary(runs));
}

}  // namespace asciitox
