#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypgrowth/ball.hpp"
#include "hypgrowth/boundary.hpp"
#include "hypgrowth/cache.hpp"
#include "hypgrowth/growth.hpp"
#include "hypgrowth/hyperbolicity.hpp"
#include "hypgrowth/record.hpp"

namespace hypgrowth {

// Everything a run needs; a run is reproducible from its config plus cache.
struct RunConfig {
    std::string spec_text = "free:2";
    int radius = 6;
    int depth = -1;   // -1: auto (largest sphere <= ray_cap)
    int buffer = -1;  // -1: auto (ceil(4*delta)+2, clamped to fit)
    double eta = -1;  // -1: model default
    int delta_radius = 2;
    std::uint64_t delta_samples = 40000;  // extra sampled quadruples on top of the exhaustive scan
    int stability_samples = 100;
    int stability_length = 0;  // 0: min(radius, 12)
    double c0_override = 0;    // 0: measured
    double stability_override = -1;  // <0: measured
    std::vector<double> lambda_grid{0.5};
    std::vector<int> epsilon_grid{2, 4};
    std::vector<int> m_grid{2, 3};
    std::vector<double> theta_grid;  // empty: three scales inside the certifiable range
    IntRange window{-1, -1};         // growth window; -1: auto [max(1, R-5), R]
    IntRange n_window{-1, -1};       // boundary window; -1: auto
    int ray_cap = 3000;
    Strategy strategy = Strategy::Greedy;
    std::uint64_t seed = 12345;
    double slack = 0.1;
    std::string cache_dir;
    EnumerationBudget budget;

    GroupSpec spec() const { return GroupSpec::parse(spec_text); }
};

struct GrowthReport {
    GrowthEstimate estimate;
    std::string csv;  // n, sphere, ball, ratio
    Record summary;
};

GrowthReport cmd_growth(const RunConfig& config);

struct ConstantsReport {
    HypConstants constants;
    Certificate certificate;
    Record record;
};

ConstantsReport cmd_constants(const RunConfig& config);

struct RelGrowthReport {
    StarTree tree;
    RelativeRate rate;
    std::string csv;  // level, count
    Record summary;
};

RelGrowthReport cmd_relgrowth(const RunConfig& config);

struct EntropyReport {
    EntropyEstimate estimate;
    std::string csv;  // n, theta, certified_separated, ambiguous, spanning, slope
    Record summary;
    bool delta_clamped = false;
};

EntropyReport cmd_boundary_entropy(const RunConfig& config);

struct TaggedValue {
    double value = 0;
    std::string tag;  // certified-lower | two-sided | heuristic
};

struct TheoremReport {
    TaggedValue rel_rate;  // lower quantity
    TaggedValue entropy;   // middle quantity
    TaggedValue growth;    // upper quantity (log-rate)
    double growth_ratio = 0;  // raw sphere ratio, reported alongside, never converted
    Certificate certificate;
    RelGrowthSup rel_detail;
    EntropyEstimate entropy_detail;
    GrowthEstimate growth_detail;
    double slack = 0.1;
    bool ordering_pass = false;
    bool free_values_pass = true;  // only meaningful for free models
    bool pass = false;
    Record record;
};

TheoremReport cmd_theorem_report(const RunConfig& config);

struct GensetRow {
    std::string label;
    std::vector<Word> generators;
    bool generates = true;  // within the radius-3 check
    std::string diagnostic;
    std::optional<GrowthEstimate> growth;
    std::optional<double> entropy;
};

struct GensetComparison {
    std::vector<GensetRow> rows;
    std::optional<double> min_growth_log;  // min over supplied sets, never claimed an infimum
    std::optional<double> min_entropy;
    std::string csv;
    Record summary;
};

// `gensets`: each entry a comma-separated list of generator words. Empty
// list compares just the standard generating set.
GensetComparison cmd_compare_gensets(const RunConfig& config, const std::vector<std::string>& gensets);

// Shared helpers.
Record certificate_record(const Certificate& cert);
Certificate certificate_from_record(const Record& record);
IntRange resolve_growth_window(const RunConfig& config, const BallIndex& index);

}  // namespace hypgrowth
