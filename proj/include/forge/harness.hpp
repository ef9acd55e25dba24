#pragma once

// Experiment harness: seeded sweeps, CSV/JSONL reports, SVG plots.
// Randomness is SplitMix64, counter-based, so any row can be replayed in
// isolation from (seed, row index) alone; see docs/schemas.md.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/spectral.hpp"

namespace forge {

// --- deterministic randomness ------------------------------------------

struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}
    std::uint64_t next();
    // next() % n; n >= 1
    std::uint64_t below(std::uint64_t n);
    // 53-bit uniform in [0, 1)
    double unit();
};

std::uint64_t mix64(std::uint64_t x);
// Independent per-row stream: SplitMix64(mix64(seed ^ mix64(row + 1))).
SplitMix64 row_rng(std::uint64_t seed, std::uint64_t row);

// Random subset of G of expected density delta: x included iff
// (next() >> 11) < floor(delta * 2^53), one draw per element in order.
WeightedFunction random_subset(const GroupSpec& g, double delta, SplitMix64& rng);

// --- configuration -------------------------------------------------------

enum class ExperimentKind {
    ThresholdScan,
    DecaySurvey,
    EquidistSurvey,
    WrapDemo,
    CharsumBatch,
    ExtremalGallery,
};

ExperimentKind experiment_kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ThresholdScan;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::optional<std::int64_t> replay_row;
    std::string raw_json;  // canonical serialized config

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);

    std::uint64_t config_hash() const;  // FNV-1a over the canonical JSON

    // typed accessors with defaults into the raw json
    std::vector<std::int64_t> int_list(const std::string& key,
                                       std::vector<std::int64_t> def) const;
    std::vector<double> double_list(const std::string& key,
                                    std::vector<double> def) const;
    double number(const std::string& key, double def) const;
    std::int64_t integer(const std::string& key, std::int64_t def) const;
    std::string text(const std::string& key, const std::string& def) const;
};

// Minimal TOML-subset to JSON conversion (flat tables, scalars, arrays of
// scalars); enough for the shipped configs. JSON files pass through.
std::string toml_to_json(const std::string& toml_text);

// --- reports --------------------------------------------------------------

struct Report {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> summary;  // deterministic, ordered
    std::vector<std::string> jsonl;              // optional JSONL payloads
    std::uint64_t config_hash = 0;
    bool hard_pass = true;  // all certified-inequality columns passed

    void add_row(std::vector<std::string> cells);
    std::string csv() const;  // header + rows, deterministic
    void write_csv(const std::string& path) const;
    void write_jsonl(const std::string& path) const;
    void write_meta(const std::string& path) const;  // timestamps live here
};

std::string format_double(double v);  // fixed formatting used in all CSVs

// --- experiments ------------------------------------------------------------

// Group and input sets of a wrap_demo config (shared with the acceptance
// suite so demos are verified on exactly the shipped inputs).
GroupSpec wrap_demo_group(const ExperimentConfig& cfg);
std::vector<WeightedFunction> wrap_demo_sets(const ExperimentConfig& cfg,
                                             const GroupSpec& g);

Report run_threshold_scan(const ExperimentConfig& cfg);
Report run_decay_survey(const ExperimentConfig& cfg);
Report run_equidist_survey(const ExperimentConfig& cfg);
Report run_wrap_demo(const ExperimentConfig& cfg);
Report run_charsum_batch(const ExperimentConfig& cfg);
Report run_extremal_gallery(const ExperimentConfig& cfg);
Report run_experiment(const ExperimentConfig& cfg);

// --- plots -------------------------------------------------------------------

struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
// Self-contained scatter/line plot; vline draws an annotated vertical line.
std::string svg_scatter(const std::vector<SvgSeries>& series, const std::string& x_label,
                        const std::string& y_label, std::optional<double> vline);

}  // namespace forge
