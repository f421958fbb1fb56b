#pragma once

#include <cstdint>
#include <string>

#include "hypgrowth/ball.hpp"

namespace hypgrowth {

// Geometric constants of the group, with provenance. All estimates obtained
// by scanning are certified lower bounds only; they grow monotonically with
// coverage.
struct HypConstants {
    double delta = 0.0;          // four-point hyperbolicity estimate
    double c0 = 2.0;             // length-increasing detour constant, > 1
    int dead_end_step = 1;       // raw measurement behind c0
    double stability = 0.0;      // D: quasigeodesic-to-geodesic Hausdorff bound
    std::string delta_source;    // "exhaustive:r=..." or "sampled:..."
    bool delta_exhaustive = false;
    int delta_radius = 0;
    std::string c0_source;       // "measured" or "override"
    std::string stability_source;  // "sampled:c=...,segments=...,seed=..." or "override"
};

struct DeltaScope {
    bool exhaustive = true;
    int radius = 2;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;

    static DeltaScope exhaustive_scope(int r) { return DeltaScope{true, r, 0, 0}; }
    static DeltaScope sampled(std::uint64_t count, std::uint64_t seed) {
        return DeltaScope{false, 0, count, seed};
    }
};

// (x|y)_base = (d(base,x) + d(base,y) - d(x,y)) / 2, a half-integer.
double gromov_product(std::uint32_t x, std::uint32_t y, std::uint32_t base, const BallIndex& index);

// Max over scanned quadruples (base, x, y, z) of min{(x|y),(y|z)} - (x|z),
// floored at 0. Exhaustive scope scans all of B(r)^4 and requires
// index.radius >= 2r; sampled scope is deterministic under its seed.
double estimate_delta(const BallIndex& index, const DeltaScope& scope);

// Points along the stored geodesic from one element to another, inclusive.
std::vector<Word> geodesic_path(const BallIndex& index, const Word& from, const Word& to);

// Empirical thinness of one geodesic triangle against its comparison tripod:
// max over side-point pairs of d(x,y) - d(f(x), f(y)), floored at 0. Point
// pairs whose distance is not resolvable at this radius are skipped.
double tripod_thinness(const BallIndex& index, std::uint32_t x1, std::uint32_t x2, std::uint32_t x3);

struct DeadEndEstimate {
    int dead_end_step = 1;    // max over g in B(R-1) of min d(g, g') with |g'| = |g|+1
    double suggested_c0 = 2;  // max(step, 1) + 1, keeps c0 > 1
};

DeadEndEstimate estimate_c0(const BallIndex& index);

struct StabilityEstimate {
    double max_hausdorff = 0.0;
    std::uint64_t segments = 0;
    std::uint64_t rejections = 0;  // discarded walk attempts
};

// Hausdorff distance between random c-quasigeodesic segments and the
// geodesic joining their endpoints; a lower bound for the true stability
// constant. Deterministic under the seed. segment_length 0 picks the radius.
StabilityEstimate estimate_stability(const BallIndex& index, double c, int samples,
                                     std::uint64_t seed, int segment_length = 0);

// All derived threshold values for one parameter choice. Pure function of
// its inputs; recomputing from the stored inputs reproduces every field.
struct Certificate {
    HypConstants constants;
    double lambda = 0.5;
    int epsilon = 1;
    int m = 1;
    double eta = 0.5;

    int T = 0;                // m + floor(lambda * epsilon)
    double tau = 0.0;         // 4(D + delta) / (1 - lambda)
    double mu = 0.0;          // lambda * epsilon / (c0 - 1)
    double eta_prime = 0.0;   // exp(eta * delta) - 1
    double theta = 0.0;       // (1 - 2 eta') exp(-eta (m + D + lambda eps + 2 delta))
    bool epsilon_admissible = false;  // epsilon > tau
    bool m_admissible = false;        // m > mu
    bool eta_admissible = false;      // 1 - 2 eta' > 0
};

Certificate compute_certificate(const HypConstants& consts, double lambda, int epsilon, int m,
                                double eta);

double tau_threshold(const HypConstants& consts, double lambda);
double mu_threshold(const HypConstants& consts, double lambda, int epsilon);

}  // namespace hypgrowth
