#include "hypgrowth/growth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw InputError("need at least two points for a slope");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw InputError("degenerate abscissae for slope");
    return (n * sxy - sx * sy) / denom;
}

std::string strategy_name(Strategy s) { return s == Strategy::Greedy ? "greedy" : "exact"; }

GrowthEstimate growth_rate_estimate(const BallIndex& index, IntRange window) {
    if (window.lo < 0 || window.hi > index.radius() || window.hi - window.lo + 1 < 3)
        throw InputError("degenerate window: need at least 3 radii inside the enumerated ball");
    GrowthEstimate estimate;
    estimate.sphere_counts = index.sphere_counts();
    estimate.window = window;

    std::vector<double> ns, log_spheres, log_balls;
    for (int n = window.lo; n <= window.hi; ++n) {
        const std::uint64_t s = estimate.sphere_counts[n];
        if (s == 0) throw InputError("degenerate window: empty sphere at n=" + std::to_string(n));
        ns.push_back(static_cast<double>(n));
        log_spheres.push_back(std::log(static_cast<double>(s)));
        log_balls.push_back(std::log(static_cast<double>(index.ball_count(n))));
    }
    estimate.log_rate = least_squares_slope(ns, log_spheres);
    estimate.log_rate_balls = least_squares_slope(ns, log_balls);
    estimate.last_ratio = static_cast<double>(estimate.sphere_counts[window.hi]) /
                          static_cast<double>(estimate.sphere_counts[window.hi - 1]);

    estimate.ratios_monotone = true;
    double prev = 0.0;
    bool have_prev = false;
    for (int n = window.lo; n < window.hi; ++n) {
        const double r = static_cast<double>(estimate.sphere_counts[n + 1]) /
                         static_cast<double>(estimate.sphere_counts[n]);
        if (have_prev && r > prev + 1e-12) estimate.ratios_monotone = false;
        prev = r;
        have_prev = true;
    }
    return estimate;
}

namespace {

// Branch and bound for a maximum independent set in the conflict graph
// (edges join pairs closer than epsilon).
class MaxIndependentSet {
public:
    explicit MaxIndependentSet(std::vector<std::vector<bool>> conflict)
        : conflict_(std::move(conflict)), n_(conflict_.size()) {}

    std::vector<std::size_t> solve(const std::vector<std::size_t>& greedy_seed) {
        best_ = greedy_seed;
        std::vector<std::size_t> chosen;
        std::vector<bool> banned(n_, false);
        descend(0, chosen, banned);
        return best_;
    }

private:
    void descend(std::size_t next, std::vector<std::size_t>& chosen, std::vector<bool>& banned) {
        std::size_t remaining = 0;
        for (std::size_t i = next; i < n_; ++i)
            if (!banned[i]) ++remaining;
        if (chosen.size() + remaining <= best_.size()) return;
        if (next == n_) {
            if (chosen.size() > best_.size()) best_ = chosen;
            return;
        }
        if (!banned[next]) {
            std::vector<std::size_t> newly;
            for (std::size_t j = next + 1; j < n_; ++j) {
                if (!banned[j] && conflict_[next][j]) {
                    banned[j] = true;
                    newly.push_back(j);
                }
            }
            chosen.push_back(next);
            descend(next + 1, chosen, banned);
            chosen.pop_back();
            for (std::size_t j : newly) banned[j] = false;
        }
        // skip branch
        const bool was = banned[next];
        banned[next] = true;
        descend(next + 1, chosen, banned);
        banned[next] = was;
    }

    std::vector<std::vector<bool>> conflict_;
    std::size_t n_;
    std::vector<std::size_t> best_;
};

}  // namespace

std::vector<std::size_t> greedy_independent_set(const std::vector<std::vector<bool>>& conflict) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < conflict.size(); ++i) {
        bool ok = true;
        for (std::size_t j : kept)
            if (conflict[i][j]) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(i);
    }
    return kept;
}

std::vector<std::size_t> max_independent_set(const std::vector<std::vector<bool>>& conflict) {
    MaxIndependentSet solver(conflict);
    auto best = solver.solve(greedy_independent_set(conflict));
    std::sort(best.begin(), best.end());
    return best;
}

SeparatedSubset separated_subset_sphere(const BallIndex& index, int n, int epsilon, Strategy strategy) {
    if (epsilon < 1) throw InputError("epsilon must be >= 1");
    if (n < 0 || n > index.radius()) throw CapabilityError("sphere not enumerated");
    if (epsilon > index.radius())
        throw CapabilityError("separation threshold exceeds enumerated radius");

    SeparatedSubset result;
    result.n = n;
    result.epsilon = epsilon;
    result.strategy = strategy;

    const std::uint32_t begin = index.sphere_begin(n);
    const std::uint32_t end = index.sphere_end(n);
    const std::size_t count = end - begin;
    std::vector<Word> words;
    words.reserve(count);
    for (std::uint32_t id = begin; id < end; ++id) words.push_back(index.word(id));

    if (strategy == Strategy::Greedy) {
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < count; ++i) {
            bool ok = true;
            for (std::size_t j : kept)
                if (index.distance_leq(words[i], words[j], epsilon - 1)) {
                    ok = false;
                    break;
                }
            if (ok) kept.push_back(i);
        }
        for (std::size_t i : kept) result.ids.push_back(begin + static_cast<std::uint32_t>(i));
        return result;
    }

    if (count > 2000) throw InputError("exact strategy limited to spheres with <= 2000 elements");
    std::vector<std::vector<bool>> conflict(count, std::vector<bool>(count, false));
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i + 1; j < count; ++j)
            if (index.distance_leq(words[i], words[j], epsilon - 1))
                conflict[i][j] = conflict[j][i] = true;
    auto best = max_independent_set(conflict);
    for (std::size_t i : best) result.ids.push_back(begin + static_cast<std::uint32_t>(i));
    return result;
}

std::vector<std::uint64_t> StarTree::level_counts() const {
    std::vector<std::uint64_t> counts;
    counts.reserve(levels.size());
    for (const auto& level : levels) counts.push_back(level.size());
    return counts;
}

StarTree relative_growth_tree(const BallIndex& index, int m, int epsilon, double lambda, int n_max,
                              Strategy strategy) {
    if (m < 1) throw InputError("m must be >= 1");
    if (epsilon < 1) throw InputError("epsilon must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0,1)");
    if (n_max < 0) throw InputError("n_max must be >= 0");
    if (static_cast<std::int64_t>(m) * n_max > index.radius())
        throw CapabilityError("m*n_max exceeds enumerated radius");

    StarTree tree;
    tree.m = m;
    tree.epsilon = epsilon;
    tree.lambda = lambda;
    // Rounded down so the step constraint is never weakened.
    tree.T = m + static_cast<int>(std::floor(lambda * epsilon));
    tree.strategy = strategy;
    if (tree.T > index.radius() || epsilon - 1 > index.radius())
        throw CapabilityError("threshold queries exceed enumerated radius");

    tree.levels.push_back({StarTree::Node{0, -1}});
    // candidates within T of a parent are exactly parent * u with u in B(T)
    std::vector<Word> ball_words;
    for (std::uint32_t u = 0; u < index.sphere_end(tree.T); ++u) ball_words.push_back(index.word(u));

    std::vector<bool> used;  // per-level marker over candidate sphere ids
    for (int k = 0; k < n_max; ++k) {
        const int sphere = (k + 1) * m;
        const std::uint32_t begin = index.sphere_begin(sphere);
        const std::uint32_t end = index.sphere_end(sphere);
        used.assign(end - begin, false);
        std::vector<StarTree::Node> next;

        std::vector<Word> parent_words;
        parent_words.reserve(tree.levels[k].size());
        for (const auto& node : tree.levels[k]) parent_words.push_back(index.word(node.element));

        for (std::size_t p = 0; p < tree.levels[k].size(); ++p) {
            // candidates within T of the parent, not claimed by an earlier node
            std::vector<std::uint32_t> candidate_ids;
            for (const Word& u : ball_words) {
                auto id = index.find(multiply(parent_words[p], u, index.spec()));
                if (!id || *id < begin || *id >= end) continue;
                if (used[*id - begin]) continue;
                candidate_ids.push_back(*id);
            }
            std::sort(candidate_ids.begin(), candidate_ids.end());
            candidate_ids.erase(std::unique(candidate_ids.begin(), candidate_ids.end()),
                                candidate_ids.end());
            std::vector<std::uint32_t> candidates;
            std::vector<Word> candidate_words;
            for (std::uint32_t id : candidate_ids) {
                candidates.push_back(id);
                candidate_words.push_back(index.word(id));
            }
            std::vector<std::size_t> picked;
            if (strategy == Strategy::Greedy) {
                for (std::size_t i = 0; i < candidates.size(); ++i) {
                    bool ok = true;
                    for (std::size_t j : picked)
                        if (index.distance_leq(candidate_words[i], candidate_words[j], epsilon - 1)) {
                            ok = false;
                            break;
                        }
                    if (ok) picked.push_back(i);
                }
            } else {
                if (candidates.size() > 2000)
                    throw InputError("exact strategy limited to <= 2000 candidates per node");
                std::vector<std::vector<bool>> conflict(candidates.size(),
                                                        std::vector<bool>(candidates.size(), false));
                for (std::size_t i = 0; i < candidates.size(); ++i)
                    for (std::size_t j = i + 1; j < candidates.size(); ++j)
                        if (index.distance_leq(candidate_words[i], candidate_words[j], epsilon - 1))
                            conflict[i][j] = conflict[j][i] = true;
                picked = max_independent_set(conflict);
            }
            for (std::size_t i : picked) {
                used[candidates[i] - begin] = true;
                next.push_back(StarTree::Node{candidates[i], static_cast<std::int32_t>(p)});
            }
        }
        tree.levels.push_back(std::move(next));
    }
    return tree;
}

bool verify_star_tree(const StarTree& tree, const BallIndex& index, std::string* why) {
    auto fail = [&](const std::string& message) {
        if (why) *why = message;
        return false;
    };
    if (tree.levels.empty() || tree.levels[0].size() != 1 || tree.levels[0][0].element != 0)
        return fail("level 0 must be the single identity node");

    for (std::size_t k = 0; k < tree.levels.size(); ++k) {
        for (const auto& node : tree.levels[k]) {
            if (index.length(node.element) != static_cast<int>(k) * tree.m)
                return fail("node outside its sphere at level " + std::to_string(k));
            if (k > 0) {
                const auto& parent = tree.levels[k - 1][node.parent];
                if (!index.distance_leq(index.word(parent.element), index.word(node.element), tree.T))
                    return fail("step longer than T at level " + std::to_string(k));
            }
        }
    }

    // Elements must be distinct within each level; otherwise the
    // first-divergence argument breaks down.
    for (const auto& level : tree.levels) {
        std::vector<std::uint32_t> ids;
        for (const auto& node : level) ids.push_back(node.element);
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
            return fail("repeated element within a level");
    }

    // Condition check on every leaf pair: walk to the first common ancestor
    // and require the children right below it to be >= epsilon apart.
    const std::size_t leaf_level = tree.levels.size() - 1;
    const auto& leaves = tree.levels[leaf_level];
    auto ancestors = [&](std::size_t leaf_pos) {
        // positions indexed by level: path[k] is the node position at level k
        std::vector<std::size_t> path(tree.levels.size());
        path[leaf_level] = leaf_pos;
        for (std::size_t k = leaf_level; k > 0; --k)
            path[k - 1] = static_cast<std::size_t>(tree.levels[k][path[k]].parent);
        return path;
    };
    for (std::size_t a = 0; a < leaves.size(); ++a) {
        const auto pa = ancestors(a);
        for (std::size_t b = a + 1; b < leaves.size(); ++b) {
            const auto pb = ancestors(b);
            std::size_t branch = 0;
            while (branch + 1 <= leaf_level && pa[branch + 1] == pb[branch + 1]) ++branch;
            if (branch == leaf_level) return fail("duplicate leaf");
            const Word wa = index.word(tree.levels[branch + 1][pa[branch + 1]].element);
            const Word wb = index.word(tree.levels[branch + 1][pb[branch + 1]].element);
            if (index.distance_leq(wa, wb, tree.epsilon - 1))
                return fail("divergent children closer than epsilon");
        }
    }
    if (why) why->clear();
    return true;
}

RelativeRate relative_growth_rate(const StarTree& tree) {
    std::vector<double> xs, ys;
    int hi = 0;
    for (std::size_t k = 1; k < tree.levels.size(); ++k) {
        if (tree.levels[k].empty()) break;
        xs.push_back(static_cast<double>(k) * tree.m);
        ys.push_back(std::log(static_cast<double>(tree.levels[k].size())));
        hi = static_cast<int>(k);
    }
    if (static_cast<int>(xs.size()) + 1 < 3) throw InputError("too few nonempty levels for a rate");
    RelativeRate rate;
    rate.rate = least_squares_slope(xs, ys);
    rate.lower_bound_only = tree.strategy == Strategy::Greedy;
    rate.levels_used = IntRange{1, hi};
    return rate;
}

RelGrowthSup relative_growth_sup(const BallIndex& index, const HypConstants& consts,
                                 const ParameterGrid& grid, Strategy strategy) {
    if (grid.lambdas.empty() || grid.epsilons.empty() || grid.ms.empty())
        throw InputError("empty parameter grid");
    RelGrowthSup sup;
    for (double lambda : grid.lambdas) {
        for (int epsilon : grid.epsilons) {
            for (int m : grid.ms) {
                RelGrowthGridPoint point;
                point.lambda = lambda;
                point.epsilon = epsilon;
                point.m = m;
                point.admissible = epsilon > tau_threshold(consts, lambda) &&
                                   m > mu_threshold(consts, lambda, epsilon);
                const int T = m + static_cast<int>(std::floor(lambda * epsilon));
                const int n_max = m > 0 ? index.radius() / m : 0;
                point.feasible = n_max >= 3 && T <= index.radius() && epsilon <= index.radius();
                if (point.feasible) {
                    StarTree tree = relative_growth_tree(index, m, epsilon, lambda, n_max, strategy);
                    point.level_counts = tree.level_counts();
                    int nonempty = 0;
                    for (std::size_t k = 1; k < tree.levels.size() && !tree.levels[k].empty(); ++k)
                        ++nonempty;
                    if (nonempty + 1 >= 3) {
                        point.rate = relative_growth_rate(tree).rate;
                        point.rate_valid = true;
                    }
                }
                sup.points.push_back(std::move(point));
            }
        }
    }

    auto better = [](const RelGrowthGridPoint& candidate, const std::optional<RelGrowthGridPoint>& best) {
        return !best || candidate.rate > best->rate;
    };
    for (const auto& point : sup.points)
        if (point.admissible && point.feasible && point.rate_valid && better(point, sup.best)) {
            sup.best = point;
            sup.best_rate = point.rate;
        }
    if (!sup.best) {
        sup.heuristic = true;
        for (const auto& point : sup.points)
            if (point.feasible && point.rate_valid && better(point, sup.best)) {
                sup.best = point;
                sup.best_rate = point.rate;
            }
    }
    return sup;
}

}  // namespace hypgrowth
