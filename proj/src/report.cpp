#include "hypgrowth/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

namespace {

std::string csv_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

HypConstants measure_constants(const RunConfig& config, const BallIndex& index) {
    HypConstants consts;
    const int r = std::min(config.delta_radius, index.radius() / 2);
    consts.delta = estimate_delta(index, DeltaScope::exhaustive_scope(r));
    consts.delta_exhaustive = true;
    consts.delta_radius = r;
    consts.delta_source = "exhaustive:r=" + std::to_string(r);
    if (config.delta_samples > 0) {
        const double sampled =
            estimate_delta(index, DeltaScope::sampled(config.delta_samples, config.seed));
        if (sampled > consts.delta) consts.delta = sampled;
        consts.delta_exhaustive = false;
        consts.delta_source += "+sampled:n=" + std::to_string(config.delta_samples) +
                               ",seed=" + std::to_string(config.seed);
    }

    const DeadEndEstimate dead = estimate_c0(index);
    consts.dead_end_step = dead.dead_end_step;
    if (config.c0_override > 0) {
        consts.c0 = config.c0_override;
        consts.c0_source = "override";
    } else {
        consts.c0 = dead.suggested_c0;
        consts.c0_source = "measured(step=" + std::to_string(dead.dead_end_step) + ")+1";
    }

    if (config.stability_override >= 0) {
        consts.stability = config.stability_override;
        consts.stability_source = "override";
    } else {
        const StabilityEstimate stab = estimate_stability(index, consts.c0, config.stability_samples,
                                                          config.seed, config.stability_length);
        consts.stability = stab.max_hausdorff;
        consts.stability_source = "sampled:c=" + format_double(consts.c0) +
                                  ",segments=" + std::to_string(stab.segments) +
                                  ",rejections=" + std::to_string(stab.rejections) +
                                  ",seed=" + std::to_string(config.seed);
    }
    return consts;
}

struct BoundarySetup {
    double eta = 0.5;
    double boundary_delta = 0;  // possibly clamped so prefix queries fit the radius
    bool delta_clamped = false;
    int depth = 0;
    int buffer = 0;
    IntRange n_window{0, 1};
    std::vector<double> theta_grid;
};

BoundarySetup resolve_boundary(const RunConfig& config, const BallIndex& index,
                               const HypConstants& consts) {
    BoundarySetup setup;
    const int radius = index.radius();

    setup.boundary_delta = consts.delta;
    if (static_cast<int>(std::floor(4.0 * consts.delta)) + 1 > radius) {
        setup.boundary_delta = (radius - 1) / 4.0;
        setup.delta_clamped = true;
    }

    setup.eta = config.eta > 0 ? config.eta
                               : BoundaryMetricParams::default_eta(index.spec(), setup.boundary_delta);

    if (config.depth >= 0) {
        setup.depth = config.depth;
    } else {
        int d = 1;
        for (int candidate = 1; candidate <= radius - 1; ++candidate) {
            if (index.sphere_count(candidate) <= static_cast<std::uint64_t>(config.ray_cap))
                d = candidate;
            else
                break;
        }
        setup.depth = d;
    }
    if (setup.depth > radius) throw CapabilityError("ray depth exceeds enumerated radius");

    if (config.buffer >= 0)
        setup.buffer = config.buffer;
    else
        setup.buffer = std::max(0, std::min(static_cast<int>(std::ceil(4.0 * setup.boundary_delta)) + 2,
                                            radius - setup.depth));

    if (config.n_window.lo >= 0)
        setup.n_window = config.n_window;
    else
        setup.n_window = IntRange{0, std::max(1, std::min(3, radius - setup.depth))};

    if (!config.theta_grid.empty()) {
        setup.theta_grid = config.theta_grid;
    } else {
        // keep the grid inside the certifiable range: no pair can ever have a
        // lower bound above (1 - 2 eta') exp(-eta * 2 delta)
        const double eta_prime = std::exp(setup.eta * setup.boundary_delta) - 1.0;
        const double ceiling =
            (1.0 - 2.0 * eta_prime) * std::exp(-setup.eta * 2.0 * setup.boundary_delta);
        for (int j = 0; j < 3; ++j)
            setup.theta_grid.push_back(0.9 * ceiling * std::exp(-setup.eta * j));
    }
    return setup;
}

void append_constants(Record& record, const HypConstants& consts) {
    record.set("delta", consts.delta);
    record.set("delta_source", consts.delta_source);
    record.set("delta_exhaustive", consts.delta_exhaustive);
    record.set("delta_radius", consts.delta_radius);
    record.set("c0", consts.c0);
    record.set("c0_source", consts.c0_source);
    record.set("dead_end_step", consts.dead_end_step);
    record.set("stability", consts.stability);
    record.set("stability_source", consts.stability_source);
}

HypConstants constants_from_record(const Record& record) {
    HypConstants consts;
    consts.delta = record.get_double("delta");
    consts.delta_source = record.get("delta_source");
    consts.delta_exhaustive = record.get_bool("delta_exhaustive");
    consts.delta_radius = static_cast<int>(record.get_int("delta_radius"));
    consts.c0 = record.get_double("c0");
    consts.c0_source = record.get("c0_source");
    consts.dead_end_step = static_cast<int>(record.get_int("dead_end_step"));
    consts.stability = record.get_double("stability");
    consts.stability_source = record.get("stability_source");
    return consts;
}

}  // namespace

Record certificate_record(const Certificate& cert) {
    Record record;
    record.set("record", "certificate");
    append_constants(record, cert.constants);
    record.set("lambda", cert.lambda);
    record.set("epsilon", cert.epsilon);
    record.set("m", cert.m);
    record.set("eta", cert.eta);
    record.set("T", cert.T);
    record.set("tau", cert.tau);
    record.set("mu", cert.mu);
    record.set("eta_prime", cert.eta_prime);
    record.set("theta", cert.theta);
    record.set("epsilon_admissible", cert.epsilon_admissible);
    record.set("m_admissible", cert.m_admissible);
    record.set("eta_admissible", cert.eta_admissible);
    return record;
}

Certificate certificate_from_record(const Record& record) {
    const HypConstants consts = constants_from_record(record);
    return compute_certificate(consts, record.get_double("lambda"),
                               static_cast<int>(record.get_int("epsilon")),
                               static_cast<int>(record.get_int("m")), record.get_double("eta"));
}

IntRange resolve_growth_window(const RunConfig& config, const BallIndex& index) {
    if (config.window.lo >= 0) return config.window;
    return IntRange{std::max(1, index.radius() - 5), index.radius()};
}

GrowthReport cmd_growth(const RunConfig& config) {
    const GroupSpec spec = config.spec();
    BallIndex index = load_or_enumerate(spec, config.radius, config.cache_dir, config.budget);
    GrowthReport report;
    report.estimate = growth_rate_estimate(index, resolve_growth_window(config, index));

    std::ostringstream csv;
    csv << "n,sphere,ball,ratio\n";
    for (int n = 0; n <= index.radius(); ++n) {
        csv << n << ',' << index.sphere_count(n) << ',' << index.ball_count(n) << ',';
        if (n > 0 && index.sphere_count(n - 1) > 0)
            csv << csv_double(static_cast<double>(index.sphere_count(n)) /
                              static_cast<double>(index.sphere_count(n - 1)));
        csv << '\n';
    }
    report.csv = csv.str();

    report.summary.set("record", "growth");
    report.summary.set("spec", spec.text());
    report.summary.set("radius", index.radius());
    report.summary.set("window_lo", report.estimate.window.lo);
    report.summary.set("window_hi", report.estimate.window.hi);
    report.summary.set("log_rate", report.estimate.log_rate);
    report.summary.set("log_rate_balls", report.estimate.log_rate_balls);
    report.summary.set("last_ratio", report.estimate.last_ratio);
    report.summary.set("ratios_monotone", report.estimate.ratios_monotone);
    report.summary.set("estimator", "two-sided");
    return report;
}

ConstantsReport cmd_constants(const RunConfig& config) {
    const GroupSpec spec = config.spec();
    BallIndex index = load_or_enumerate(spec, config.radius, config.cache_dir, config.budget);
    ConstantsReport report;
    report.constants = measure_constants(config, index);
    const double eta = config.eta > 0
                           ? config.eta
                           : BoundaryMetricParams::default_eta(spec, report.constants.delta);
    report.certificate =
        compute_certificate(report.constants, config.lambda_grid.at(0), config.epsilon_grid.at(0),
                            config.m_grid.at(0), eta);
    report.record = certificate_record(report.certificate);
    report.record.set("spec", spec.text());
    report.record.set("radius", index.radius());
    return report;
}

RelGrowthReport cmd_relgrowth(const RunConfig& config) {
    const GroupSpec spec = config.spec();
    BallIndex index = load_or_enumerate(spec, config.radius, config.cache_dir, config.budget);
    const int m = config.m_grid.at(0);
    const int epsilon = config.epsilon_grid.at(0);
    const double lambda = config.lambda_grid.at(0);
    const int n_max = index.radius() / m;

    RelGrowthReport report;
    report.tree = relative_growth_tree(index, m, epsilon, lambda, n_max, config.strategy);
    report.rate = relative_growth_rate(report.tree);

    std::ostringstream csv;
    csv << "level,sphere,count\n";
    const auto counts = report.tree.level_counts();
    for (std::size_t k = 0; k < counts.size(); ++k)
        csv << k << ',' << k * m << ',' << counts[k] << '\n';
    report.csv = csv.str();

    report.summary.set("record", "relgrowth");
    report.summary.set("spec", spec.text());
    report.summary.set("radius", index.radius());
    report.summary.set("m", m);
    report.summary.set("epsilon", epsilon);
    report.summary.set("lambda", lambda);
    report.summary.set("T", report.tree.T);
    report.summary.set("strategy", strategy_name(config.strategy));
    report.summary.set("rate", report.rate.rate);
    report.summary.set("estimator",
                       report.rate.lower_bound_only ? "certified-lower" : "two-sided");
    return report;
}

EntropyReport cmd_boundary_entropy(const RunConfig& config) {
    const GroupSpec spec = config.spec();
    if (!spec.hyperbolic())
        throw InputError("boundary undefined for non-hyperbolic control " + spec.text());
    BallIndex index = load_or_enumerate(spec, config.radius, config.cache_dir, config.budget);
    const HypConstants consts = measure_constants(config, index);
    const BoundarySetup setup = resolve_boundary(config, index, consts);

    HypConstants boundary_consts = consts;
    boundary_consts.delta = setup.boundary_delta;
    BoundaryMetricParams params(setup.eta, setup.boundary_delta);

    EntropyReport report;
    report.delta_clamped = setup.delta_clamped;
    report.estimate = boundary_entropy_estimate(index, params, boundary_consts, setup.depth,
                                                setup.buffer, setup.theta_grid, setup.n_window);

    std::ostringstream csv;
    csv << "n,theta,certified_separated,ambiguous,spanning,slope\n";
    for (const auto& row : report.estimate.rows) {
        double slope = 0;
        for (const auto& [theta, s] : report.estimate.slope_by_theta)
            if (theta == row.theta) slope = s;
        csv << row.n << ',' << csv_double(row.theta) << ',' << row.separated << ',' << row.ambiguous
            << ',' << row.spanning << ',' << csv_double(slope) << '\n';
    }
    report.csv = csv.str();

    report.summary.set("record", "boundary-entropy");
    report.summary.set("spec", spec.text());
    report.summary.set("radius", index.radius());
    report.summary.set("eta", setup.eta);
    report.summary.set("depth", setup.depth);
    report.summary.set("buffer", setup.buffer);
    report.summary.set("rays", report.estimate.ray_count);
    report.summary.set("estimate", report.estimate.estimate);
    report.summary.set("max_ambiguous_fraction", report.estimate.max_ambiguous_fraction);
    report.summary.set("delta_clamped", setup.delta_clamped);
    report.summary.set("estimator",
                       (setup.delta_clamped || report.estimate.max_ambiguous_fraction > 0)
                           ? "heuristic"
                           : "two-sided");
    return report;
}

TheoremReport cmd_theorem_report(const RunConfig& config) {
    const GroupSpec spec = config.spec();
    if (!spec.hyperbolic())
        throw InputError("boundary undefined for non-hyperbolic control " + spec.text());
    BallIndex index = load_or_enumerate(spec, config.radius, config.cache_dir, config.budget);

    TheoremReport report;
    report.slack = config.slack;

    const HypConstants consts = measure_constants(config, index);

    // upper quantity: growth
    report.growth_detail = growth_rate_estimate(index, resolve_growth_window(config, index));
    report.growth.value = report.growth_detail.log_rate;
    report.growth.tag = "two-sided";
    report.growth_ratio = report.growth_detail.last_ratio;

    // lower quantity: relative growth over the admissible grid
    ParameterGrid grid{config.lambda_grid, config.epsilon_grid, config.m_grid};
    report.rel_detail = relative_growth_sup(index, consts, grid, config.strategy);
    if (!report.rel_detail.best_rate) throw CapabilityError("no feasible relative-growth triple at this radius");
    report.rel_rate.value = *report.rel_detail.best_rate;
    report.rel_rate.tag = report.rel_detail.heuristic ? "heuristic" : "certified-lower";

    // middle quantity: boundary entropy
    const BoundarySetup setup = resolve_boundary(config, index, consts);
    HypConstants boundary_consts = consts;
    boundary_consts.delta = setup.boundary_delta;
    BoundaryMetricParams params(setup.eta, setup.boundary_delta);
    report.entropy_detail = boundary_entropy_estimate(index, params, boundary_consts, setup.depth,
                                                      setup.buffer, setup.theta_grid, setup.n_window);
    report.entropy.value = report.entropy_detail.estimate;
    report.entropy.tag = (setup.delta_clamped || report.entropy_detail.max_ambiguous_fraction > 0)
                             ? "heuristic"
                             : "two-sided";

    RelGrowthGridPoint chosen;
    if (report.rel_detail.best) {
        chosen = *report.rel_detail.best;
    } else {
        chosen.lambda = config.lambda_grid[0];
        chosen.epsilon = config.epsilon_grid[0];
        chosen.m = config.m_grid[0];
    }
    report.certificate =
        compute_certificate(consts, chosen.lambda, chosen.epsilon, chosen.m, setup.eta);

    report.ordering_pass = report.rel_rate.value <= report.entropy.value + config.slack &&
                           report.entropy.value <= report.growth.value + config.slack;
    if (spec.model() == GroupModel::Free) {
        const double target = std::log(2.0 * spec.rank() - 1.0);
        auto close = [&](double v) { return std::abs(v - target) <= 0.05 * std::abs(target); };
        report.free_values_pass =
            close(report.rel_rate.value) && close(report.entropy.value) && close(report.growth.value);
    }
    report.pass = report.ordering_pass && report.free_values_pass;

    Record& record = report.record;
    record.set("record", "theorem-report");
    record.set("spec", spec.text());
    record.set("radius", index.radius());
    record.set("rel_rate", report.rel_rate.value);
    record.set("rel_rate_tag", report.rel_rate.tag);
    record.set("rel_lambda", chosen.lambda);
    record.set("rel_epsilon", chosen.epsilon);
    record.set("rel_m", chosen.m);
    record.set("entropy", report.entropy.value);
    record.set("entropy_tag", report.entropy.tag);
    record.set("entropy_eta", setup.eta);
    record.set("entropy_depth", setup.depth);
    record.set("entropy_ambiguous_fraction", report.entropy_detail.max_ambiguous_fraction);
    record.set("growth_log_rate", report.growth.value);
    record.set("growth_tag", report.growth.tag);
    record.set("growth_ratio", report.growth_ratio);
    record.set("slack", config.slack);
    record.set("ordering_pass", report.ordering_pass);
    record.set("free_values_pass", report.free_values_pass);
    record.set("pass", report.pass);
    append_constants(record, consts);
    record.set("delta_clamped_for_boundary", setup.delta_clamped);
    record.set("certificate_tau", report.certificate.tau);
    record.set("certificate_mu", report.certificate.mu);
    record.set("certificate_theta", report.certificate.theta);
    record.set("certificate_T", report.certificate.T);
    record.set("certificate_eta_prime", report.certificate.eta_prime);
    record.set("certificate_epsilon_admissible", report.certificate.epsilon_admissible);
    record.set("certificate_m_admissible", report.certificate.m_admissible);
    record.set("certificate_eta_admissible", report.certificate.eta_admissible);
    return report;
}

GensetComparison cmd_compare_gensets(const RunConfig& config, const std::vector<std::string>& gensets) {
    const GroupSpec spec = config.spec();
    GensetComparison comparison;

    std::vector<std::pair<std::string, std::vector<Word>>> sets;
    if (gensets.empty()) {
        std::vector<Word> standard;
        for (int c = 0; c < spec.alphabet_size(); ++c)
            standard.push_back(Word{Letter{static_cast<std::uint8_t>(c)}});
        std::string label;
        for (std::size_t i = 0; i < standard.size(); ++i)
            label += (i ? "," : "") + to_text(standard[i]);
        sets.emplace_back(label, standard);
    } else {
        for (const std::string& text : gensets) {
            std::vector<Word> words;
            std::istringstream in(text);
            std::string token;
            while (std::getline(in, token, ','))
                if (!token.empty()) words.push_back(word_from_text(token, spec));
            if (words.empty()) throw InputError("empty generating set: " + text);
            sets.emplace_back(text, std::move(words));
        }
    }

    for (auto& [label, words] : sets) {
        // symmetry: the set must be closed under inversion (up to equality in the group)
        for (const Word& w : words) {
            if (canonicalize(w, spec).empty())
                throw InputError("generating set contains the identity: " + label);
            const Word winv = canonicalize(invert(w), spec);
            const bool found = std::any_of(words.begin(), words.end(), [&](const Word& u) {
                return canonicalize(u, spec) == winv;
            });
            if (!found)
                throw InputError("generating set not symmetric: missing inverse of " + to_text(w));
        }

        GensetRow row;
        row.label = label;
        row.generators = words;
        BallIndex alt = BallIndex::enumerate(spec, words, config.radius, config.budget);

        // generation check: every base generator reachable within radius 3
        const int check_radius = std::min(3, alt.radius());
        for (int c = 0; c < spec.alphabet_size() && row.generates; ++c) {
            Word letter{Letter{static_cast<std::uint8_t>(c)}};
            auto id = alt.find(letter);
            if (!id || alt.length(*id) > check_radius) {
                row.generates = false;
                row.diagnostic = "does not generate within radius 3 (missing " + to_text(letter) + ")";
            }
        }

        if (row.generates) {
            row.growth = growth_rate_estimate(alt, resolve_growth_window(config, alt));
            if (spec.hyperbolic()) {
                try {
                    RunConfig sub = config;
                    sub.eta = config.eta;
                    const int r = std::min(2, alt.radius() / 2);
                    HypConstants consts;
                    consts.delta = estimate_delta(alt, DeltaScope::exhaustive_scope(r));
                    consts.delta_exhaustive = true;
                    consts.delta_radius = r;
                    consts.delta_source = "exhaustive:r=" + std::to_string(r);
                    const BoundarySetup setup = resolve_boundary(sub, alt, consts);
                    HypConstants boundary_consts = consts;
                    boundary_consts.delta = setup.boundary_delta;
                    BoundaryMetricParams params(setup.eta, setup.boundary_delta);
                    row.entropy = boundary_entropy_estimate(alt, params, boundary_consts, setup.depth,
                                                            setup.buffer, setup.theta_grid,
                                                            setup.n_window)
                                      .estimate;
                } catch (const CapabilityError& e) {
                    row.diagnostic = std::string("entropy skipped: ") + e.what();
                }
            }
        }
        comparison.rows.push_back(std::move(row));
    }

    for (const auto& row : comparison.rows) {
        if (row.growth) {
            if (!comparison.min_growth_log || row.growth->log_rate < *comparison.min_growth_log)
                comparison.min_growth_log = row.growth->log_rate;
        }
        if (row.entropy) {
            if (!comparison.min_entropy || *row.entropy < *comparison.min_entropy)
                comparison.min_entropy = *row.entropy;
        }
    }

    std::ostringstream csv;
    csv << "set,generates,log_rate,last_ratio,entropy,diagnostic\n";
    for (const auto& row : comparison.rows) {
        csv << '"' << row.label << "\"," << (row.generates ? "yes" : "no") << ',';
        if (row.growth) csv << csv_double(row.growth->log_rate);
        csv << ',';
        if (row.growth) csv << csv_double(row.growth->last_ratio);
        csv << ',';
        if (row.entropy) csv << csv_double(*row.entropy);
        csv << ",\"" << row.diagnostic << "\"\n";
    }
    comparison.csv = csv.str();

    comparison.summary.set("record", "compare-gensets");
    comparison.summary.set("spec", spec.text());
    comparison.summary.set("radius", config.radius);
    comparison.summary.set("sets", static_cast<std::int64_t>(comparison.rows.size()));
    comparison.summary.set("scope", "min over supplied sets");
    if (comparison.min_growth_log) comparison.summary.set("min_log_rate", *comparison.min_growth_log);
    if (comparison.min_entropy) comparison.summary.set("min_entropy", *comparison.min_entropy);
    return comparison;
}

}  // namespace hypgrowth
