#include "hypgrowth/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

namespace {

void require_hyperbolic(const BallIndex& index) {
    if (!index.spec().hyperbolic())
        throw InputError("boundary undefined for non-hyperbolic control " + index.spec().text());
}

int fellow_threshold(const HypConstants& consts) {
    return static_cast<int>(std::floor(4.0 * consts.delta));
}

void require_fellow_capability(const BallIndex& index, const HypConstants& consts) {
    if (fellow_threshold(consts) + 1 > index.radius())
        throw CapabilityError("fellow-traveling threshold 4*delta+1 exceeds enumerated radius");
}

// Does some geodesic extension of the element by `buffer` more steps exist?
bool extension_exists(const BallIndex& index, std::uint32_t id, int buffer) {
    if (buffer == 0) return true;
    const Word base = index.word(id);
    const int target = index.length(id) + buffer;
    for (std::uint32_t u = index.sphere_begin(buffer); u < index.sphere_end(buffer); ++u) {
        auto z = index.find(concat(base, index.word(u)));
        if (z && index.length(*z) == target) return true;
    }
    return false;
}

}  // namespace

BoundaryMetricParams::BoundaryMetricParams(double eta_in, double delta_in)
    : eta(eta_in), delta(delta_in) {
    if (eta <= 0.0) throw InputError("eta must be positive");
    if (delta < 0.0) throw InputError("delta must be nonnegative");
    eta_prime = std::exp(eta * delta) - 1.0;
    if (1.0 - 2.0 * eta_prime <= 0.0)
        throw InputError("eta too large: the metric sandwich 1 - 2*eta' > 0 fails");
}

double BoundaryMetricParams::default_eta(const GroupSpec& spec, double delta) {
    if (spec.model() == GroupModel::Free || delta <= 0.0) return 0.5;
    // largest eta keeping the sandwich factor 1 - 2*eta' at least 1/2
    return std::log(1.25) / delta;
}

std::vector<RayApprox> enumerate_rays(const BallIndex& index, int depth, int buffer) {
    require_hyperbolic(index);
    if (depth < 0 || buffer < 0) throw InputError("depth and buffer must be nonnegative");
    if (depth + buffer > index.radius())
        throw CapabilityError("depth + buffer exceeds enumerated radius");
    std::vector<RayApprox> rays;
    for (std::uint32_t id = index.sphere_begin(depth); id < index.sphere_end(depth); ++id) {
        if (!extension_exists(index, id, buffer)) continue;
        rays.push_back(RayApprox{index.word(id), id, depth, buffer});
    }
    return rays;
}

RayProduct ray_gromov_product(const RayApprox& u, const RayApprox& v, const BallIndex& index,
                              const HypConstants& consts) {
    require_hyperbolic(index);
    require_fellow_capability(index, consts);
    const int threshold = fellow_threshold(consts);
    const int top = std::min(u.depth, v.depth);
    RayProduct product;
    product.error_bar = 2.0 * consts.delta;
    product.same_point = u.word == v.word;
    for (int t = top; t >= 1; --t) {
        const Word wu = index.word(index.ancestor(u.id, t));
        const Word wv = index.word(index.ancestor(v.id, t));
        if (index.distance_leq(wu, wv, threshold)) {
            product.value = t;
            return product;
        }
    }
    product.value = 0;
    return product;
}

MetricBounds d_eta_bounds(const RayApprox& u, const RayApprox& v, const BoundaryMetricParams& params,
                          const BallIndex& index, const HypConstants& consts) {
    MetricBounds bounds;
    bounds.product = ray_gromov_product(u, v, index, consts);
    const double g = static_cast<double>(bounds.product.value);
    const double err = bounds.product.error_bar;
    bounds.upper = std::min(1.0, std::exp(-params.eta * (g - err)));
    bounds.lower = (1.0 - 2.0 * params.eta_prime) * std::exp(-params.eta * (g + err));
    return bounds;
}

RayApprox act_on_ray(const Word& g, const RayApprox& u, const BallIndex& index) {
    require_hyperbolic(index);
    const Word reduced_g = canonicalize(g, index.spec());
    auto glen = index.distance(Word{}, reduced_g);
    if (!glen || *glen + u.depth > index.radius())
        throw CapabilityError("|g| + depth exceeds enumerated radius");
    const Word product = multiply(reduced_g, u.word, index.spec());
    auto id = index.find(product);
    if (!id) throw CapabilityError("translated ray leaves the enumerated ball");
    RayApprox out;
    out.id = *id;
    out.word = index.word(*id);
    out.depth = index.length(*id);
    for (int b = index.radius() - out.depth; b >= 0; --b) {
        if (extension_exists(index, *id, b)) {
            out.buffer = b;
            break;
        }
    }
    return out;
}

namespace {

// A ray translated by one g, stored as its ancestor chain: chain[t] is the
// index id of the prefix element at level t.
struct TransformedRay {
    std::vector<std::uint32_t> chain;
    int depth = 0;
};

enum class PairClass { Separated, Covered, Ambiguous };

// Transformed-ray table for one group ball B(n), shared across theta values.
class ActionContext {
public:
    ActionContext(const std::vector<RayApprox>& rays, int n, const BallIndex& index,
                  const BoundaryMetricParams& params, const HypConstants& consts)
        : index_(index), params_(params), consts_(consts), threshold_(fellow_threshold(consts)) {
        require_hyperbolic(index);
        require_fellow_capability(index, consts);
        if (n < 0) throw InputError("n must be nonnegative");
        int max_depth = 0;
        for (const auto& ray : rays) max_depth = std::max(max_depth, ray.depth);
        if (n + max_depth > index.radius())
            throw CapabilityError("n + ray depth exceeds enumerated radius");

        group_count_ = index.sphere_end(n);
        ray_count_ = rays.size();
        transformed_.reserve(static_cast<std::size_t>(group_count_) * ray_count_);
        for (std::uint32_t g = 0; g < group_count_; ++g) {
            const Word wg = index.word(g);
            for (const auto& ray : rays) {
                auto id = index.find(multiply(wg, ray.word, index.spec()));
                if (!id) throw CapabilityError("translated ray leaves the enumerated ball");
                TransformedRay tr;
                tr.depth = index.length(*id);
                tr.chain.assign(tr.depth + 1, 0);
                std::uint32_t cursor = *id;
                for (int t = tr.depth; t >= 0; --t) {
                    tr.chain[t] = cursor;
                    if (t > 0) cursor = index.parent(cursor);
                }
                transformed_.push_back(std::move(tr));
            }
        }
    }

    // Gromov product estimate of the translated pair under one g.
    int product(std::uint32_t g, std::size_t i, std::size_t j) const {
        const TransformedRay& u = transformed_[static_cast<std::size_t>(g) * ray_count_ + i];
        const TransformedRay& v = transformed_[static_cast<std::size_t>(g) * ray_count_ + j];
        const int top = std::min(u.depth, v.depth);
        for (int t = top; t >= 1; --t) {
            if (u.chain[t] == v.chain[t]) return t;  // same element, distance 0
            if (threshold_ >= 1 && close_elements(u.chain[t], v.chain[t])) return t;
        }
        return 0;
    }

    PairClass classify(std::size_t i, std::size_t j, double theta) const {
        const double err = 2.0 * consts_.delta;
        // largest lower bound any g could yield (at ghat = 0)
        const double best_lower = (1.0 - 2.0 * params_.eta_prime) * std::exp(-params_.eta * err);
        double max_upper = 0.0;
        for (std::uint32_t g = 0; g < group_count_; ++g) {
            const double ghat = static_cast<double>(product(g, i, j));
            const double lower =
                (1.0 - 2.0 * params_.eta_prime) * std::exp(-params_.eta * (ghat + err));
            if (lower >= theta) return PairClass::Separated;
            max_upper = std::max(max_upper, std::min(1.0, std::exp(-params_.eta * (ghat - err))));
            // once neither certificate can materialize, stop scanning
            if (max_upper >= theta && best_lower < theta) return PairClass::Ambiguous;
        }
        return max_upper < theta ? PairClass::Covered : PairClass::Ambiguous;
    }

    SeparationReport separated(int n, double theta, Strategy strategy) const {
        SeparationReport report;
        report.mode = SeparationMode::Separated;
        report.n = n;
        report.theta = theta;
        report.strategy = strategy;
        if (ray_count_ == 0) return report;

        if (strategy == Strategy::Exact) {
            if (ray_count_ > 200) throw InputError("exact strategy limited to <= 200 rays");
            std::vector<std::vector<bool>> conflict(ray_count_,
                                                    std::vector<bool>(ray_count_, false));
            for (std::size_t i = 0; i < ray_count_; ++i)
                for (std::size_t j = i + 1; j < ray_count_; ++j) {
                    const PairClass pc = classify(i, j, theta);
                    ++report.tested_pairs;
                    if (pc == PairClass::Ambiguous) ++report.ambiguous_pairs;
                    if (pc != PairClass::Separated) conflict[i][j] = conflict[j][i] = true;
                }
            for (std::size_t i : max_independent_set(conflict))
                report.chosen.push_back(static_cast<std::uint32_t>(i));
            report.certified_count = report.chosen.size();
            return report;
        }

        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < ray_count_; ++i) {
            bool ok = true;
            for (std::size_t j : kept) {
                const PairClass pc = classify(j, i, theta);
                ++report.tested_pairs;
                if (pc == PairClass::Ambiguous) ++report.ambiguous_pairs;
                if (pc != PairClass::Separated) {
                    ok = false;
                    break;
                }
            }
            if (ok) kept.push_back(i);
        }
        for (std::size_t i : kept) report.chosen.push_back(static_cast<std::uint32_t>(i));
        report.certified_count = kept.size();
        return report;
    }

    SeparationReport spanning(int n, double theta) const {
        SeparationReport report;
        report.mode = SeparationMode::Spanning;
        report.n = n;
        report.theta = theta;

        int k = 0;
        while (std::exp(-params_.eta * k) >= theta && k <= index_.radius() + 1) ++k;
        report.bound_k = k;
        if (n + k <= index_.radius()) report.structural_bound = index_.sphere_count(n + k);

        if (ray_count_ == 0) return report;
        std::vector<bool> covered(ray_count_, false);
        for (std::size_t i = 0; i < ray_count_; ++i) {
            if (covered[i]) continue;
            report.chosen.push_back(static_cast<std::uint32_t>(i));
            covered[i] = true;  // a point covers itself
            for (std::size_t j = i + 1; j < ray_count_; ++j) {
                if (covered[j]) continue;
                const PairClass pc = classify(i, j, theta);
                ++report.tested_pairs;
                if (pc == PairClass::Ambiguous) ++report.ambiguous_pairs;
                if (pc == PairClass::Covered) covered[j] = true;
            }
        }
        report.certified_count = report.chosen.size();
        return report;
    }

private:
    bool close_elements(std::uint32_t a, std::uint32_t b) const {
        if (a > b) std::swap(a, b);
        const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        const bool close = index_.distance_leq(index_.word(a), index_.word(b), threshold_);
        memo_.emplace(key, close);
        return close;
    }

    const BallIndex& index_;
    const BoundaryMetricParams& params_;
    const HypConstants& consts_;
    int threshold_;
    std::uint32_t group_count_ = 0;
    std::size_t ray_count_ = 0;
    std::vector<TransformedRay> transformed_;
    mutable std::unordered_map<std::uint64_t, bool> memo_;
};

}  // namespace

SeparationReport boundary_separated_count(const std::vector<RayApprox>& rays, int n, double theta,
                                          const BallIndex& index, const BoundaryMetricParams& params,
                                          const HypConstants& consts, Strategy strategy) {
    if (theta <= 0.0) throw InputError("theta must be positive");
    return ActionContext(rays, n, index, params, consts).separated(n, theta, strategy);
}

SeparationReport boundary_spanning_count(const std::vector<RayApprox>& rays, int n, double theta,
                                         const BallIndex& index, const BoundaryMetricParams& params,
                                         const HypConstants& consts) {
    if (theta <= 0.0) throw InputError("theta must be positive");
    return ActionContext(rays, n, index, params, consts).spanning(n, theta);
}

EntropyEstimate boundary_entropy_estimate(const BallIndex& index, const BoundaryMetricParams& params,
                                          const HypConstants& consts, int depth, int buffer,
                                          const std::vector<double>& theta_grid, IntRange n_window) {
    if (theta_grid.empty()) throw InputError("theta grid must be nonempty");
    if (n_window.hi < n_window.lo || n_window.hi - n_window.lo + 1 < 2)
        throw InputError("degenerate window: need at least two n values");
    if (n_window.lo < 0) throw InputError("window must start at n >= 0");
    if (n_window.hi + depth > index.radius())
        throw CapabilityError("window end + depth exceeds enumerated radius");

    EntropyEstimate estimate;
    estimate.eta = params.eta;
    estimate.depth = depth;
    estimate.buffer = buffer;
    estimate.window = n_window;

    const std::vector<RayApprox> rays = enumerate_rays(index, depth, buffer);
    estimate.ray_count = rays.size();
    if (rays.empty()) throw InputError("no rays at this depth/buffer");

    std::vector<std::vector<std::uint64_t>> sep_counts(theta_grid.size());
    std::vector<std::vector<std::uint64_t>> span_counts(theta_grid.size());
    for (int n = n_window.lo; n <= n_window.hi; ++n) {
        const ActionContext context(rays, n, index, params, consts);
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
            const double theta = theta_grid[ti];
            if (theta <= 0.0) throw InputError("theta must be positive");
            SeparationReport sep = context.separated(n, theta, Strategy::Greedy);
            SeparationReport span = context.spanning(n, theta);
            sep_counts[ti].push_back(sep.certified_count);
            span_counts[ti].push_back(span.certified_count);
            estimate.rows.push_back(EntropySweepRow{n, theta, sep.certified_count,
                                                    sep.ambiguous_pairs, span.certified_count});
            if (sep.tested_pairs > 0)
                estimate.max_ambiguous_fraction =
                    std::max(estimate.max_ambiguous_fraction,
                             static_cast<double>(sep.ambiguous_pairs) /
                                 static_cast<double>(sep.tested_pairs));
        }
    }

    std::vector<double> ns;
    for (int n = n_window.lo; n <= n_window.hi; ++n) ns.push_back(static_cast<double>(n));
    estimate.estimate = 0.0;
    for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
        std::vector<double> logs, span_logs;
        for (std::uint64_t c : sep_counts[ti]) logs.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(c, 1))));
        for (std::uint64_t c : span_counts[ti]) span_logs.push_back(std::log(static_cast<double>(std::max<std::uint64_t>(c, 1))));
        const double slope = least_squares_slope(ns, logs);
        const double span_slope = least_squares_slope(ns, span_logs);
        estimate.slope_by_theta.emplace_back(theta_grid[ti], slope);
        estimate.spanning_slope_by_theta.emplace_back(theta_grid[ti], span_slope);
        estimate.estimate = std::max(estimate.estimate, slope);
    }
    return estimate;
}

}  // namespace hypgrowth
