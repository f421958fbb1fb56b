#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypgrowth/ball.hpp"
#include "hypgrowth/hyperbolicity.hpp"

namespace hypgrowth {

struct IntRange {
    int lo = 0;
    int hi = 0;
};

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);

// Independent sets in a conflict graph (adjacency matrix of "too close"
// pairs): first-fit greedy, and exact branch-and-bound for small instances.
std::vector<std::size_t> greedy_independent_set(const std::vector<std::vector<bool>>& conflict);
std::vector<std::size_t> max_independent_set(const std::vector<std::vector<bool>>& conflict);

// Growth-rate extraction from sphere counts. Two estimators are reported:
// the least-squares slope of log N0(n) over the window (headline log-rate)
// and the last sphere ratio N0(hi)/N0(hi-1). The slope of log N(n) over the
// same window is kept as a diagnostic; the raw ratio is never silently
// converted to a log-rate or vice versa.
struct GrowthEstimate {
    std::vector<std::uint64_t> sphere_counts;
    IntRange window;
    double log_rate = 0.0;        // slope of log sphere counts
    double log_rate_balls = 0.0;  // slope of log ball counts
    double last_ratio = 0.0;      // N0(hi) / N0(hi-1)
    bool ratios_monotone = true;  // consecutive sphere ratios nonincreasing-or-flat within the window
};

GrowthEstimate growth_rate_estimate(const BallIndex& index, IntRange window);

enum class Strategy { Greedy, Exact };

std::string strategy_name(Strategy s);

struct SeparatedSubset {
    int n = 0;
    int epsilon = 0;
    Strategy strategy = Strategy::Greedy;
    std::vector<std::uint32_t> ids;  // pairwise >= epsilon apart, subset of S(n)
};

// Maximal (greedy, certified lower bound) or maximum (exact, small spheres
// only) epsilon-separated subset of the sphere S(n).
SeparatedSubset separated_subset_sphere(const BallIndex& index, int n, int epsilon, Strategy strategy);

// Level-by-level branching family: level k sits inside S(km), steps between
// consecutive levels have d <= T = m + floor(lambda*epsilon), and children of
// a common node are pairwise >= epsilon apart. Each group element appears at
// most once per level, so the first-divergence separation holds for every
// leaf pair and the leaf count is a certified lower bound.
struct StarTree {
    struct Node {
        std::uint32_t element;  // BallIndex id
        std::int32_t parent;    // node position in the previous level, -1 for the root
    };
    int m = 1;
    int epsilon = 1;
    double lambda = 0.5;
    int T = 1;
    Strategy strategy = Strategy::Greedy;
    std::vector<std::vector<Node>> levels;

    std::vector<std::uint64_t> level_counts() const;
};

StarTree relative_growth_tree(const BallIndex& index, int m, int epsilon, double lambda, int n_max,
                              Strategy strategy);

// Re-verifies the branching condition on every leaf pair straight from the
// definition. Intended for small trees (<= 500 leaves).
bool verify_star_tree(const StarTree& tree, const BallIndex& index, std::string* why = nullptr);

struct RelativeRate {
    double rate = 0.0;
    bool lower_bound_only = true;  // greedy construction
    IntRange levels_used;
};

RelativeRate relative_growth_rate(const StarTree& tree);

struct RelGrowthGridPoint {
    double lambda = 0.0;
    int epsilon = 0;
    int m = 0;
    bool admissible = false;  // epsilon > tau(lambda) and m > mu(lambda, epsilon)
    bool feasible = false;    // enough radius for >= 3 levels
    bool rate_valid = false;
    double rate = 0.0;
    std::vector<std::uint64_t> level_counts;
};

struct ParameterGrid {
    std::vector<double> lambdas;
    std::vector<int> epsilons;
    std::vector<int> ms;
};

struct RelGrowthSup {
    std::vector<RelGrowthGridPoint> points;
    std::optional<double> best_rate;
    std::optional<RelGrowthGridPoint> best;
    bool heuristic = false;  // no admissible & feasible triple; best is over the unrestricted grid
};

RelGrowthSup relative_growth_sup(const BallIndex& index, const HypConstants& consts,
                                 const ParameterGrid& grid, Strategy strategy = Strategy::Greedy);

}  // namespace hypgrowth
