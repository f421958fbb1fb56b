#include "hypgrowth/hyperbolicity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "hypgrowth/errors.hpp"

namespace hypgrowth {

namespace {

int resolved_distance(const BallIndex& index, WordView x, WordView y) {
    auto d = index.distance(x, y);
    if (!d) throw CapabilityError("distance not resolvable at radius " + std::to_string(index.radius()));
    return *d;
}

}  // namespace

double gromov_product(std::uint32_t x, std::uint32_t y, std::uint32_t base, const BallIndex& index) {
    const Word wx = index.word(x);
    const Word wy = index.word(y);
    const Word wb = index.word(base);
    const int dbx = resolved_distance(index, wb, wx);
    const int dby = resolved_distance(index, wb, wy);
    const int dxy = resolved_distance(index, wx, wy);
    return (dbx + dby - dxy) / 2.0;
}

double estimate_delta(const BallIndex& index, const DeltaScope& scope) {
    if (scope.exhaustive) {
        const int r = scope.radius;
        if (r < 0) throw InputError("scan radius must be >= 0");
        if (2 * r > index.radius())
            throw CapabilityError("exhaustive four-point scan over B(r) needs radius >= 2r");
        const std::uint32_t n = index.sphere_end(r);
        std::vector<Word> words(n);
        for (std::uint32_t i = 0; i < n; ++i) words[i] = index.word(i);
        std::vector<int> dist(static_cast<std::size_t>(n) * n);
        for (std::uint32_t i = 0; i < n; ++i) {
            dist[static_cast<std::size_t>(i) * n + i] = 0;
            for (std::uint32_t j = i + 1; j < n; ++j) {
                const int d = resolved_distance(index, words[i], words[j]);
                dist[static_cast<std::size_t>(i) * n + j] = d;
                dist[static_cast<std::size_t>(j) * n + i] = d;
            }
        }
        int delta2 = 0;
        std::vector<int> prod2(static_cast<std::size_t>(n) * n);
        for (std::uint32_t b = 0; b < n; ++b) {
            const int* db = &dist[static_cast<std::size_t>(b) * n];
            for (std::uint32_t x = 0; x < n; ++x)
                for (std::uint32_t y = 0; y < n; ++y)
                    prod2[static_cast<std::size_t>(x) * n + y] =
                        db[x] + db[y] - dist[static_cast<std::size_t>(x) * n + y];
            for (std::uint32_t x = 0; x < n; ++x) {
                const int* px = &prod2[static_cast<std::size_t>(x) * n];
                for (std::uint32_t y = 0; y < n; ++y) {
                    const int pxy = px[y];
                    const int* py = &prod2[static_cast<std::size_t>(y) * n];
                    for (std::uint32_t z = 0; z < n; ++z) {
                        const int defect = std::min(pxy, py[z]) - px[z];
                        if (defect > delta2) delta2 = defect;
                    }
                }
            }
        }
        return delta2 / 2.0;
    }

    if (scope.samples == 0) throw InputError("sampled scan needs a positive sample count");
    const int r = index.radius() / 2;
    const std::uint32_t n = index.sphere_end(r);
    std::mt19937_64 rng(scope.seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, n - 1);
    int delta2 = 0;
    for (std::uint64_t s = 0; s < scope.samples; ++s) {
        const Word wb = index.word(pick(rng));
        const Word wx = index.word(pick(rng));
        const Word wy = index.word(pick(rng));
        const Word wz = index.word(pick(rng));
        const int bx = resolved_distance(index, wb, wx);
        const int by = resolved_distance(index, wb, wy);
        const int bz = resolved_distance(index, wb, wz);
        const int xy = resolved_distance(index, wx, wy);
        const int yz = resolved_distance(index, wy, wz);
        const int xz = resolved_distance(index, wx, wz);
        const int defect = std::min(bx + by - xy, by + bz - yz) - (bx + bz - xz);
        if (defect > delta2) delta2 = defect;
    }
    return delta2 / 2.0;
}

namespace {

struct TripodPoint {
    int leg;   // 0, 1, 2: which vertex's leg
    int pos2;  // twice the distance from the centre
};

int tripod_distance2(const TripodPoint& a, const TripodPoint& b) {
    if (a.leg == b.leg) return std::abs(a.pos2 - b.pos2);
    return a.pos2 + b.pos2;
}

}  // namespace

std::vector<Word> geodesic_path(const BallIndex& index, const Word& from, const Word& to) {
    const Word quotient = multiply(invert(from), to, index.spec());
    auto qid = index.find(quotient);
    if (!qid) throw CapabilityError("geodesic segment not resolvable at this radius");
    std::vector<Word> points;
    for (int t = 0; t <= index.length(*qid); ++t)
        points.push_back(multiply(from, index.word(index.ancestor(*qid, t)), index.spec()));
    return points;
}

double tripod_thinness(const BallIndex& index, std::uint32_t x1, std::uint32_t x2, std::uint32_t x3) {
    const std::array<Word, 3> vertex = {index.word(x1), index.word(x2), index.word(x3)};
    const int d01 = resolved_distance(index, vertex[0], vertex[1]);
    const int d02 = resolved_distance(index, vertex[0], vertex[2]);
    const int d12 = resolved_distance(index, vertex[1], vertex[2]);
    // twice the Gromov products = twice the tripod leg lengths
    const std::array<int, 3> leg2 = {d01 + d02 - d12, d01 + d12 - d02, d02 + d12 - d01};

    // Points along one geodesic side with their tripod images.
    struct SidePoint {
        Word word;
        TripodPoint image;
    };
    std::vector<SidePoint> points;
    auto add_side = [&](int a, int b, int dab) {
        const auto side = geodesic_path(index, vertex[a], vertex[b]);
        for (int t = 0; t <= dab; ++t) {
            SidePoint p;
            p.word = side[t];
            if (2 * t <= leg2[a])
                p.image = TripodPoint{a, leg2[a] - 2 * t};
            else
                p.image = TripodPoint{b, leg2[b] - 2 * (dab - t)};
            points.push_back(std::move(p));
        }
    };
    add_side(0, 1, d01);
    add_side(0, 2, d02);
    add_side(1, 2, d12);

    int worst2 = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            auto d = index.distance(points[i].word, points[j].word);
            if (!d) continue;  // beyond the enumerated radius; skip this pair
            const int defect2 = 2 * *d - tripod_distance2(points[i].image, points[j].image);
            if (defect2 > worst2) worst2 = defect2;
        }
    }
    return worst2 / 2.0;
}

DeadEndEstimate estimate_c0(const BallIndex& index) {
    if (index.radius() < 2) throw CapabilityError("dead-end scan needs radius >= 2");
    int worst = 0;
    for (std::uint32_t g = 0; g < index.sphere_end(index.radius() - 1); ++g) {
        const Word wg = index.word(g);
        const int target = index.length(g) + 1;
        int step = 0;
        for (int L = 1; L <= index.radius() && step == 0; ++L) {
            for (std::uint32_t u = index.sphere_begin(L); u < index.sphere_end(L); ++u) {
                const Word candidate = concat(wg, index.word(u));
                auto id = index.find(candidate);
                if (id && index.length(*id) == target) {
                    step = L;
                    break;
                }
            }
        }
        if (step == 0)
            throw CapabilityError("no length-increasing neighbour found within the radius");
        worst = std::max(worst, step);
    }
    DeadEndEstimate estimate;
    estimate.dead_end_step = worst;
    estimate.suggested_c0 = static_cast<double>(std::max(worst, 1) + 1);
    return estimate;
}

StabilityEstimate estimate_stability(const BallIndex& index, double c, int samples,
                                     std::uint64_t seed, int segment_length) {
    if (c < 1.0) throw InputError("quasigeodesic constant must be >= 1");
    if (samples < 1) throw InputError("need at least one sample");
    const int L = segment_length > 0 ? segment_length : std::min(index.radius(), 12);
    if (L > index.radius()) throw CapabilityError("segment length exceeds enumerated radius");

    std::mt19937_64 rng(seed);
    StabilityEstimate result;
    result.segments = 0;

    const int steps = index.standard_generators() ? index.spec().alphabet_size()
                                                  : static_cast<int>(index.generators().size());

    auto hausdorff = [&](const std::vector<Word>& walk, const std::vector<Word>& geo) {
        double worst = 0.0;
        auto one_sided = [&](const std::vector<Word>& from, const std::vector<Word>& to) {
            for (const Word& p : from) {
                int best = -1;
                for (const Word& q : to) {
                    auto d = index.distance(p, q);
                    if (d && (best < 0 || *d < best)) best = *d;
                }
                if (best < 0) throw CapabilityError("Hausdorff distance not resolvable at this radius");
                worst = std::max(worst, static_cast<double>(best));
            }
        };
        one_sided(walk, geo);
        one_sided(geo, walk);
        return worst;
    };

    for (int s = 0; s < samples; ++s) {
        if (c == 1.0) {
            // True geodesics: take a random sphere element's prefix path; the
            // geodesic between its endpoints is the path itself.
            std::uniform_int_distribution<std::uint32_t> pick(index.sphere_begin(L),
                                                              index.sphere_end(L) - 1);
            pick(rng);
            ++result.segments;
            continue;  // Hausdorff distance from itself is 0
        }
        bool built = false;
        for (int attempt = 0; attempt < 200 && !built; ++attempt) {
            std::vector<Word> walk{Word{}};
            bool dead = false;
            for (int t = 1; t <= L && !dead; ++t) {
                std::vector<int> order(steps);
                for (int i = 0; i < steps; ++i) order[i] = i;
                std::shuffle(order.begin(), order.end(), rng);
                bool placed = false;
                for (int choice : order) {
                    Word next = index.standard_generators()
                                    ? concat(walk.back(), Word{Letter{static_cast<std::uint8_t>(choice)}})
                                    : concat(walk.back(), index.generators()[choice]);
                    bool ok = true;
                    for (int prev = 0; prev < t && ok; ++prev) {
                        const int need = static_cast<int>(std::ceil((t - prev) / c - c));
                        if (need >= 1 && index.distance_leq(walk[prev], next, need - 1)) ok = false;
                    }
                    if (ok) {
                        walk.push_back(std::move(next));
                        placed = true;
                        break;
                    }
                }
                if (!placed) dead = true;
            }
            if (dead) {
                ++result.rejections;
                continue;
            }
            auto endpoint = index.find(walk.back());
            if (!endpoint) {
                ++result.rejections;  // wandered outside the ball
                continue;
            }
            std::vector<Word> geodesic;
            for (int t = 0; t <= index.length(*endpoint); ++t)
                geodesic.push_back(index.word(index.ancestor(*endpoint, t)));
            result.max_hausdorff = std::max(result.max_hausdorff, hausdorff(walk, geodesic));
            ++result.segments;
            built = true;
        }
    }
    return result;
}

double tau_threshold(const HypConstants& consts, double lambda) {
    return 4.0 * (consts.stability + consts.delta) / (1.0 - lambda);
}

double mu_threshold(const HypConstants& consts, double lambda, int epsilon) {
    return lambda * epsilon / (consts.c0 - 1.0);
}

Certificate compute_certificate(const HypConstants& consts, double lambda, int epsilon, int m,
                                double eta) {
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0,1)");
    if (epsilon <= 0) throw InputError("epsilon must be positive");
    if (m <= 0) throw InputError("m must be positive");
    if (eta <= 0.0) throw InputError("eta must be positive");
    if (!(consts.c0 > 1.0)) throw InputError("c0 must exceed 1");

    Certificate cert;
    cert.constants = consts;
    cert.lambda = lambda;
    cert.epsilon = epsilon;
    cert.m = m;
    cert.eta = eta;
    cert.T = m + static_cast<int>(std::floor(lambda * epsilon));
    cert.tau = tau_threshold(consts, lambda);
    cert.mu = mu_threshold(consts, lambda, epsilon);
    cert.eta_prime = std::exp(eta * consts.delta) - 1.0;
    cert.theta = (1.0 - 2.0 * cert.eta_prime) *
                 std::exp(-eta * (m + consts.stability + lambda * epsilon + 2.0 * consts.delta));
    cert.epsilon_admissible = epsilon > cert.tau;
    cert.m_admissible = m > cert.mu;
    cert.eta_admissible = 1.0 - 2.0 * cert.eta_prime > 0.0;
    return cert;
}

}  // namespace hypgrowth
