#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hypgrowth/errors.hpp"
#include "hypgrowth/report.hpp"

namespace {

using namespace hypgrowth;

struct CommonFlags {
    RunConfig config;
    std::string out_path;
    std::string format = "csv";
    std::string strategy = "greedy";
    std::string window_text;
    std::string n_window_text;
};

IntRange parse_range(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw InputError("range must look like lo:hi");
    try {
        return IntRange{std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InputError("bad range: " + text);
    }
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--spec", flags.config.spec_text, "group model: free:K | surface:G | abelian:K");
    cmd->add_option("--radius", flags.config.radius, "ball radius to enumerate");
    cmd->add_option("--depth", flags.config.depth, "ray depth (-1 = auto)");
    cmd->add_option("--buffer", flags.config.buffer, "ray extension buffer (-1 = auto)");
    cmd->add_option("--eta", flags.config.eta, "visual metric parameter (-1 = model default)");
    cmd->add_option("--lambda", flags.config.lambda_grid, "lambda grid values")->delimiter(',');
    cmd->add_option("--epsilon", flags.config.epsilon_grid, "epsilon grid values")->delimiter(',');
    cmd->add_option("--m", flags.config.m_grid, "m grid values")->delimiter(',');
    cmd->add_option("--theta-grid", flags.config.theta_grid, "theta grid values")->delimiter(',');
    cmd->add_option("--window", flags.window_text, "growth window lo:hi");
    cmd->add_option("--n-window", flags.n_window_text, "boundary window lo:hi");
    cmd->add_option("--strategy", flags.strategy, "greedy | exact");
    cmd->add_option("--seed", flags.config.seed, "seed for sampled estimators");
    cmd->add_option("--slack", flags.config.slack, "ordering slack in log-rate units");
    cmd->add_option("--delta-radius", flags.config.delta_radius, "exhaustive four-point scan radius");
    cmd->add_option("--delta-samples", flags.config.delta_samples, "extra sampled quadruples");
    cmd->add_option("--stability-samples", flags.config.stability_samples,
                    "quasigeodesic segments to sample");
    cmd->add_option("--c0", flags.config.c0_override, "override the measured c0 (0 = measured)");
    cmd->add_option("--stability", flags.config.stability_override,
                    "override the measured stability constant (-1 = measured)");
    cmd->add_option("--ray-cap", flags.config.ray_cap, "auto depth keeps the sphere at most this big");
    cmd->add_option("--max-elements", flags.config.budget.max_elements, "enumeration element budget");
    cmd->add_option("--max-seconds", flags.config.budget.max_seconds, "enumeration time budget");
    cmd->add_option("--cache-dir", flags.config.cache_dir, "ball cache directory");
    cmd->add_option("--out", flags.out_path, "write output to this file instead of stdout");
    cmd->add_option("--format", flags.format, "csv | record")->check(CLI::IsMember({"csv", "record"}));
}

void finalize(CommonFlags& flags) {
    if (!flags.window_text.empty()) flags.config.window = parse_range(flags.window_text);
    if (!flags.n_window_text.empty()) flags.config.n_window = parse_range(flags.n_window_text);
    if (flags.strategy == "greedy")
        flags.config.strategy = Strategy::Greedy;
    else if (flags.strategy == "exact")
        flags.config.strategy = Strategy::Exact;
    else
        throw InputError("unknown strategy: " + flags.strategy);
}

void emit(const CommonFlags& flags, const std::string& csv, const Record& record) {
    const std::string& body = flags.format == "csv" ? csv : record.to_text();
    if (flags.out_path.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(flags.out_path, std::ios::binary);
    if (!out) throw InputError("cannot write " + flags.out_path);
    out << body;
}

int run(int argc, char** argv) {
    CLI::App app{"growth, hyperbolicity and boundary-entropy estimates on Cayley graphs"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::vector<std::string> gensets;
    std::string cache_action, cache_file;

    CLI::App* growth = app.add_subcommand("growth", "sphere counts and growth-rate estimates");
    add_common(growth, flags);
    CLI::App* constants = app.add_subcommand("constants", "delta, c0, stability and the certificate");
    add_common(constants, flags);
    CLI::App* relgrowth = app.add_subcommand("relgrowth", "branching-family relative growth rate");
    add_common(relgrowth, flags);
    CLI::App* entropy = app.add_subcommand("boundary-entropy", "separated/spanning entropy sweep");
    add_common(entropy, flags);
    CLI::App* theorem = app.add_subcommand("theorem-report", "the three quantities and their ordering");
    add_common(theorem, flags);
    CLI::App* compare = app.add_subcommand("compare-gensets", "growth/entropy per supplied generating set");
    add_common(compare, flags);
    compare->add_option("--genset", gensets, "comma-separated generator words; repeatable");
    CLI::App* cache = app.add_subcommand("cache", "store / info / verify ball caches");
    add_common(cache, flags);
    cache->add_option("action", cache_action, "store | info | verify")->required();
    cache->add_option("--file", cache_file, "cache file path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    finalize(flags);

    if (growth->parsed()) {
        GrowthReport report = cmd_growth(flags.config);
        emit(flags, report.csv, report.summary);
    } else if (constants->parsed()) {
        ConstantsReport report = cmd_constants(flags.config);
        emit(flags, report.record.to_text(), report.record);
    } else if (relgrowth->parsed()) {
        RelGrowthReport report = cmd_relgrowth(flags.config);
        emit(flags, report.csv, report.summary);
    } else if (entropy->parsed()) {
        EntropyReport report = cmd_boundary_entropy(flags.config);
        emit(flags, report.csv, report.summary);
    } else if (theorem->parsed()) {
        TheoremReport report = cmd_theorem_report(flags.config);
        emit(flags, report.record.to_text(), report.record);
        if (!report.pass) {
            std::cerr << "theorem-report: ordering check FAILED\n";
            return 4;
        }
    } else if (compare->parsed()) {
        GensetComparison report = cmd_compare_gensets(flags.config, gensets);
        emit(flags, report.csv, report.summary);
    } else if (cache->parsed()) {
        if (cache_action == "store") {
            if (cache_file.empty()) throw InputError("cache store needs --file");
            BallIndex index = BallIndex::enumerate(flags.config.spec(), flags.config.radius,
                                                   flags.config.budget);
            cache_store(index, cache_file);
            std::cout << "stored " << index.size() << " elements to " << cache_file << "\n";
        } else if (cache_action == "info") {
            if (cache_file.empty()) throw InputError("cache info needs --file");
            BallIndex index = cache_load(cache_file);
            Record info;
            info.set("record", "cache-info");
            info.set("spec", index.spec().text());
            info.set("radius", index.radius());
            info.set("elements", static_cast<std::uint64_t>(index.size()));
            std::string spheres;
            for (auto c : index.sphere_counts()) spheres += (spheres.empty() ? "" : ",") + std::to_string(c);
            info.set("spheres", spheres);
            std::cout << info.to_text();
        } else if (cache_action == "verify") {
            if (cache_file.empty()) throw InputError("cache verify needs --file");
            std::ifstream in(cache_file, std::ios::binary);
            if (!in) throw InputError("cannot read " + cache_file);
            std::ostringstream buffer;
            buffer << in.rdbuf();
            BallIndex index = ball_cache_from_bytes(buffer.str());
            if (ball_cache_bytes(index) != buffer.str())
                throw InputError("cache round-trip mismatch for " + cache_file);
            std::cout << "ok: " << index.size() << " elements, radius " << index.radius() << "\n";
        } else {
            throw InputError("unknown cache action: " + cache_action);
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hypgrowth::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const hypgrowth::BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const hypgrowth::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
