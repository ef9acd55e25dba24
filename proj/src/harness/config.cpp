#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "forge/harness.hpp"

namespace forge {

ExperimentKind experiment_kind_from_string(const std::string& name) {
    if (name == "threshold_scan") return ExperimentKind::ThresholdScan;
    if (name == "decay_survey") return ExperimentKind::DecaySurvey;
    if (name == "equidist_survey") return ExperimentKind::EquidistSurvey;
    if (name == "wrap_demo") return ExperimentKind::WrapDemo;
    if (name == "charsum_batch") return ExperimentKind::CharsumBatch;
    if (name == "extremal_gallery") return ExperimentKind::ExtremalGallery;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ThresholdScan: return "threshold_scan";
        case ExperimentKind::DecaySurvey: return "decay_survey";
        case ExperimentKind::EquidistSurvey: return "equidist_survey";
        case ExperimentKind::WrapDemo: return "wrap_demo";
        case ExperimentKind::CharsumBatch: return "charsum_batch";
        case ExperimentKind::ExtremalGallery: return "extremal_gallery";
    }
    return "?";
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

nlohmann::json toml_scalar(const std::string& tok) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return tok.substr(1, tok.size() - 2);
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.find_first_of(".eE") != std::string::npos &&
        tok.find_first_not_of("+-0123456789.eE") == std::string::npos)
        return std::stod(tok);
    if (tok.find_first_not_of("+-0123456789") == std::string::npos && !tok.empty())
        return std::stoll(tok);
    throw std::invalid_argument("toml: cannot parse value: " + tok);
}

}  // namespace

std::string toml_to_json(const std::string& toml_text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;
    std::istringstream in(toml_text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            const std::string table = strip(line.substr(1, line.size() - 2));
            current = &root[table];
            if (current->is_null()) *current = nlohmann::json::object();
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("toml: expected key = value: " + line);
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') throw std::invalid_argument("toml: unterminated array");
            nlohmann::json arr = nlohmann::json::array();
            std::string inner = val.substr(1, val.size() - 2);
            std::istringstream items(inner);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = strip(item);
                if (!item.empty()) arr.push_back(toml_scalar(item));
            }
            (*current)[key] = std::move(arr);
        } else {
            (*current)[key] = toml_scalar(val);
        }
    }
    return root.dump();
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml")
        text = toml_to_json(text);
    return from_json_text(text);
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ExperimentConfig cfg;
    cfg.kind = experiment_kind_from_string(j.at("kind").get<std::string>());
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.out_dir = j.value("out", std::string("."));
    cfg.raw_json = j.dump();  // nlohmann object keys are sorted: canonical
    return cfg;
}

std::uint64_t ExperimentConfig::config_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64
    for (const unsigned char c : raw_json) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {
const nlohmann::json parse_raw(const std::string& raw) {
    return raw.empty() ? nlohmann::json::object() : nlohmann::json::parse(raw);
}
}  // namespace

std::vector<std::int64_t> ExperimentConfig::int_list(const std::string& key,
                                                     std::vector<std::int64_t> def) const {
    const auto j = parse_raw(raw_json);
    if (!j.contains(key)) return def;
    return j.at(key).get<std::vector<std::int64_t>>();
}

std::vector<double> ExperimentConfig::double_list(const std::string& key,
                                                  std::vector<double> def) const {
    const auto j = parse_raw(raw_json);
    if (!j.contains(key)) return def;
    return j.at(key).get<std::vector<double>>();
}

double ExperimentConfig::number(const std::string& key, double def) const {
    const auto j = parse_raw(raw_json);
    return j.value(key, def);
}

std::int64_t ExperimentConfig::integer(const std::string& key, std::int64_t def) const {
    const auto j = parse_raw(raw_json);
    return j.value(key, def);
}

std::string ExperimentConfig::text(const std::string& key, const std::string& def) const {
    const auto j = parse_raw(raw_json);
    return j.value(key, def);
}

}  // namespace forge
