#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hypgrowth/ball.hpp"
#include "hypgrowth/growth.hpp"
#include "hypgrowth/hyperbolicity.hpp"

namespace hypgrowth {

// Finite-depth stand-in for a boundary point: a geodesic word together with
// a certified extension headroom (some geodesic continuation of length
// depth+buffer exists in the index).
struct RayApprox {
    Word word;
    std::uint32_t id = 0;  // element of the index the ray passes through at `depth`
    int depth = 0;
    int buffer = 0;
};

// Visual-metric parameters. The constructor rejects eta too large for the
// metric sandwich to stay nondegenerate (needs 1 - 2*eta' > 0).
struct BoundaryMetricParams {
    double eta;
    double delta;
    double eta_prime;  // exp(eta*delta) - 1

    BoundaryMetricParams(double eta, double delta);
    static double default_eta(const GroupSpec& spec, double delta);
};

// All rays of the given depth: one per element of S(depth) that admits a
// geodesic extension to depth+buffer, in index (shortlex) order.
std::vector<RayApprox> enumerate_rays(const BallIndex& index, int depth, int buffer);

struct RayProduct {
    int value = 0;         // fellow-traveling estimate of the Gromov product
    double error_bar = 0;  // 2*delta; exact (0) on trees
    bool same_point = false;
};

RayProduct ray_gromov_product(const RayApprox& u, const RayApprox& v, const BallIndex& index,
                              const HypConstants& consts);

struct MetricBounds {
    double lower = 0;
    double upper = 0;
    RayProduct product;
};

// Two-sided bounds for the boundary distance of two truncated rays:
// upper = exp(-eta (g - err)) capped at 1, lower = (1-2eta') exp(-eta (g + err)).
MetricBounds d_eta_bounds(const RayApprox& u, const RayApprox& v, const BoundaryMetricParams& params,
                          const BallIndex& index, const HypConstants& consts);

// Left translation by g at finite depth: the ray through g * u(depth), with
// freshly certified buffer.
RayApprox act_on_ray(const Word& g, const RayApprox& u, const BallIndex& index);

enum class SeparationMode { Separated, Spanning };

struct SeparationReport {
    SeparationMode mode = SeparationMode::Separated;
    int n = 0;
    double theta = 0;
    Strategy strategy = Strategy::Greedy;
    std::uint64_t certified_count = 0;   // kept set (separated) or cover size (spanning)
    std::uint64_t ambiguous_pairs = 0;   // pairs whose bounds straddle theta, over tested pairs
    std::uint64_t tested_pairs = 0;
    std::vector<std::uint32_t> chosen;   // positions into the ray list
    // Spanning only: minimal k with exp(-eta k) < theta and the sphere bound
    // #S(n+k), when that sphere is enumerated.
    std::optional<int> bound_k;
    std::optional<std::uint64_t> structural_bound;
};

SeparationReport boundary_separated_count(const std::vector<RayApprox>& rays, int n, double theta,
                                          const BallIndex& index, const BoundaryMetricParams& params,
                                          const HypConstants& consts,
                                          Strategy strategy = Strategy::Greedy);

SeparationReport boundary_spanning_count(const std::vector<RayApprox>& rays, int n, double theta,
                                         const BallIndex& index, const BoundaryMetricParams& params,
                                         const HypConstants& consts);

struct EntropySweepRow {
    int n = 0;
    double theta = 0;
    std::uint64_t separated = 0;
    std::uint64_t ambiguous = 0;
    std::uint64_t spanning = 0;
};

struct EntropyEstimate {
    double estimate = 0;  // max over theta of the separated-count slope
    std::vector<EntropySweepRow> rows;
    std::vector<std::pair<double, double>> slope_by_theta;           // (theta, slope)
    std::vector<std::pair<double, double>> spanning_slope_by_theta;  // diagnostics
    double eta = 0;
    int depth = 0;
    int buffer = 0;
    IntRange window;
    double max_ambiguous_fraction = 0;
    std::uint64_t ray_count = 0;
};

EntropyEstimate boundary_entropy_estimate(const BallIndex& index, const BoundaryMetricParams& params,
                                          const HypConstants& consts, int depth, int buffer,
                                          const std::vector<double>& theta_grid, IntRange n_window);

}  // namespace hypgrowth
