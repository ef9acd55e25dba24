#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "forge/harness.hpp"

namespace forge {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void Report::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("Report: row width mismatch");
    rows.push_back(std::move(cells));
}

std::string Report::csv() const {
    std::string out;
    out += "# config_hash=" + std::to_string(config_hash) + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += columns[i];
        out += (i + 1 < columns.size()) ? ',' : '\n';
    }
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            out += (i + 1 < row.size()) ? ',' : '\n';
        }
    }
    for (const auto& [k, v] : summary) {
        out += "# " + k + "=" + v + "\n";
    }
    return out;
}

void Report::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << csv();
}

void Report::write_jsonl(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& line : jsonl) out << line << "\n";
}

void Report::write_meta(const std::string& path) const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["rows"] = rows.size();
    j["hard_pass"] = hard_pass;
    char stamp[64];
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = stamp;  // only the meta file carries timestamps
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace forge
