#include <cmath>
#include <random>

#include "doctest.h"
#include "hypgrowth/boundary.hpp"
#include "hypgrowth/errors.hpp"
#include "oracles.hpp"

using namespace hypgrowth;

namespace {
const GroupSpec F2 = GroupSpec::free_group(2);
const GroupSpec S2 = GroupSpec::surface_group(2);

HypConstants tree_constants() {
    HypConstants consts;
    consts.delta = 0;
    consts.c0 = 2;
    consts.stability = 0;
    return consts;
}

std::vector<std::string> ray_texts(const std::vector<RayApprox>& rays) {
    std::vector<std::string> out;
    for (const auto& r : rays) out.push_back(to_text(r.word));
    return out;
}
}  // namespace

TEST_CASE("ray enumeration on trees keeps every reduced word") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    CHECK(enumerate_rays(index, 2, 3).size() == 12);
    const auto single = enumerate_rays(index, 0, 4);
    REQUIRE(single.size() == 1);
    CHECK(single[0].word.empty());
    CHECK_THROWS_AS(enumerate_rays(index, 4, 4), CapabilityError);
}

TEST_CASE("ray enumeration rejects the abelian control") {
    const BallIndex index = BallIndex::enumerate(GroupSpec::free_abelian(2), 4);
    CHECK_THROWS_AS(enumerate_rays(index, 2, 1), InputError);
}

TEST_CASE("surface rays match an oracle extension check") {
    const BallIndex index = BallIndex::enumerate(S2, 4);
    const auto rays = enumerate_rays(index, 2, 2);
    const auto oracle = oracle::BallOracle::build(S2, 4);
    std::size_t expected = 0;
    for (std::uint32_t id = index.sphere_begin(2); id < index.sphere_end(2); ++id) {
        const std::string x = to_text(index.word(id));
        bool extends = false;
        for (const auto& u : oracle::reduced_words(4, 2)) {
            const std::string z = oracle::reduce(x + u);
            auto it = oracle.length_of.find(z);
            if (it != oracle.length_of.end() && it->second == 4) {
                extends = true;
                break;
            }
        }
        if (extends) ++expected;
    }
    CHECK(rays.size() == expected);
    CHECK(rays.size() > 0);
    CHECK(rays.size() <= index.sphere_count(2));
}

TEST_CASE("ray gromov products on trees are longest common prefixes") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const auto rays = enumerate_rays(index, 4, 2);
    auto by_text = [&](const std::string& text) {
        for (const auto& r : rays)
            if (to_text(r.word) == text) return r;
        FAIL("ray not found");
        return rays[0];
    };
    const RayApprox u = by_text("abab");
    const RayApprox v = by_text("abba");
    const RayProduct p = ray_gromov_product(u, v, index, consts);
    CHECK(p.value == 2);
    CHECK(p.error_bar == 0.0);
    CHECK_FALSE(p.same_point);

    const RayProduct self = ray_gromov_product(u, u, index, consts);
    CHECK(self.value == 4);
    CHECK(self.same_point);

    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const auto& a = rays[pick(rng)];
        const auto& b = rays[pick(rng)];
        const RayProduct ab = ray_gromov_product(a, b, index, consts);
        CHECK(ab.value == ray_gromov_product(b, a, index, consts).value);
        CHECK(ab.value <= std::min(a.depth, b.depth));
        CHECK(ab.value == oracle::lcp(to_text(a.word), to_text(b.word)));
    }
}

TEST_CASE("metric bounds collapse on trees") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(0.5, 0.0);
    const auto rays = enumerate_rays(index, 4, 2);
    const RayApprox* u = nullptr;
    const RayApprox* v = nullptr;
    for (const auto& r : rays) {
        if (to_text(r.word) == "abab") u = &r;
        if (to_text(r.word) == "abba") v = &r;
    }
    REQUIRE(u);
    REQUIRE(v);
    const MetricBounds bounds = d_eta_bounds(*u, *v, params, index, consts);
    CHECK(bounds.lower == doctest::Approx(std::exp(-1.0)));
    CHECK(bounds.upper == doctest::Approx(std::exp(-1.0)));
    const MetricBounds self = d_eta_bounds(*u, *u, params, index, consts);
    CHECK(self.product.same_point);
    CHECK(self.upper == doctest::Approx(std::exp(-0.5 * 4)));
}

TEST_CASE("metric bounds widen with positive delta") {
    const BallIndex index = BallIndex::enumerate(S2, 4);
    HypConstants consts;
    consts.delta = 0.5;
    const double eta = BoundaryMetricParams::default_eta(S2, consts.delta);
    const BoundaryMetricParams params(eta, consts.delta);
    const auto rays = enumerate_rays(index, 2, 1);
    REQUIRE(rays.size() >= 2);
    const MetricBounds bounds = d_eta_bounds(rays[0], rays[1], params, index, consts);
    CHECK(bounds.lower <= bounds.upper);
    CHECK(bounds.lower > 0.0);
    CHECK(bounds.upper <= 1.0);
}

TEST_CASE("metric params validation") {
    CHECK_THROWS_AS(BoundaryMetricParams(-0.1, 0.0), InputError);
    CHECK_THROWS_AS(BoundaryMetricParams(2.0, 1.0), InputError);  // 1 - 2 eta' < 0
    CHECK(BoundaryMetricParams::default_eta(F2, 0.0) == 0.5);
    const double eta = BoundaryMetricParams::default_eta(S2, 2.0);
    const BoundaryMetricParams params(eta, 2.0);
    CHECK(1.0 - 2.0 * params.eta_prime == doctest::Approx(0.5));
}

TEST_CASE("the action translates rays") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const auto rays = enumerate_rays(index, 4, 2);
    const RayApprox* u = nullptr;
    for (const auto& r : rays)
        if (to_text(r.word) == "abab") u = &r;
    REQUIRE(u);

    const RayApprox shrunk = act_on_ray(word_from_text("A", F2), *u, index);
    CHECK(to_text(shrunk.word) == "bab");
    CHECK(shrunk.depth == 3);
    const RayApprox same = act_on_ray(Word{}, *u, index);
    CHECK(to_text(same.word) == "abab");
    CHECK(same.depth == 4);
    const RayApprox grown = act_on_ray(word_from_text("b", F2), *u, index);
    CHECK(to_text(grown.word) == "babab");
    CHECK(grown.depth == 5);
    CHECK(grown.buffer == index.radius() - 5);
    CHECK_THROWS_AS(act_on_ray(word_from_text("aba", F2), *u, index), CapabilityError);
}

TEST_CASE("action is compatible with multiplication") {
    const BallIndex index = BallIndex::enumerate(F2, 8);
    const auto rays = enumerate_rays(index, 3, 2);
    std::mt19937 rng(41);
    std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
    const std::vector<std::string> gs = {"a", "b", "A", "ab", "Ba"};
    for (int i = 0; i < 40; ++i) {
        const Word g = word_from_text(gs[i % gs.size()], F2);
        const Word h = word_from_text(gs[(i + 2) % gs.size()], F2);
        const RayApprox& u = rays[pick(rng)];
        const RayApprox lhs = act_on_ray(g, act_on_ray(h, u, index), index);
        const RayApprox rhs = act_on_ray(multiply(g, h, F2), u, index);
        CHECK(to_text(lhs.word) == to_text(rhs.word));
        CHECK(lhs.depth == rhs.depth);
    }
}

TEST_CASE("separated counts on trees") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    const auto rays = enumerate_rays(index, 4, 2);
    REQUIRE(rays.size() == 108);

    SUBCASE("n=0 splits by first letter") {
        const SeparationReport report =
            boundary_separated_count(rays, 0, 1.0, index, params, consts);
        CHECK(report.certified_count == 4);
        CHECK(report.ambiguous_pairs == 0);
    }
    SUBCASE("n=1 strips one common letter") {
        const SeparationReport report =
            boundary_separated_count(rays, 1, 1.0, index, params, consts);
        CHECK(report.certified_count == 12);
        CHECK(report.ambiguous_pairs == 0);
    }
    SUBCASE("theta above the diameter keeps a single point") {
        const SeparationReport report =
            boundary_separated_count(rays, 1, 1.5, index, params, consts);
        CHECK(report.certified_count == 1);
    }
}

TEST_CASE("separated and spanning counts match the exact-metric oracle") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    for (double eta : {1.0, 0.5}) {
        const BoundaryMetricParams params(eta, 0.0);
        for (int depth : {2, 3, 4}) {
            const auto rays = enumerate_rays(index, depth, 1);
            const auto texts = ray_texts(rays);
            for (int n : {0, 1}) {
                const oracle::FreeBoundaryOracle oracle(2, eta, n);
                for (double theta : {1.0, 0.7, 0.4, 0.2}) {
                    const SeparationReport sep =
                        boundary_separated_count(rays, n, theta, index, params, consts);
                    const SeparationReport span =
                        boundary_spanning_count(rays, n, theta, index, params, consts);
                    CHECK(sep.ambiguous_pairs == 0);
                    CHECK(span.ambiguous_pairs == 0);
                    CHECK(sep.certified_count ==
                          static_cast<std::uint64_t>(oracle.greedy_separated_count(texts, theta)));
                    CHECK(span.certified_count ==
                          static_cast<std::uint64_t>(oracle.spanning_count(texts, theta)));
                }
            }
        }
    }
}

TEST_CASE("exact separated sets match brute force on few rays") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    const auto rays = enumerate_rays(index, 2, 1);
    REQUIRE(rays.size() == 12);
    const auto texts = ray_texts(rays);
    for (double theta : {1.0, 0.5, 0.3}) {
        for (int n : {0, 1}) {
            const oracle::FreeBoundaryOracle oracle(2, 1.0, n);
            const int best = oracle::max_separated_subset(
                static_cast<int>(rays.size()),
                [&](int i, int j) { return oracle.separated(texts[i], texts[j], theta); });
            const SeparationReport exact =
                boundary_separated_count(rays, n, theta, index, params, consts, Strategy::Exact);
            CHECK(exact.certified_count == static_cast<std::uint64_t>(best));
            const SeparationReport greedy =
                boundary_separated_count(rays, n, theta, index, params, consts);
            CHECK(greedy.certified_count <= exact.certified_count);
        }
    }
}

TEST_CASE("spanning structural bound on trees") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    const auto rays = enumerate_rays(index, 4, 1);

    const SeparationReport report = boundary_spanning_count(rays, 2, 0.4, index, params, consts);
    REQUIRE(report.bound_k.has_value());
    CHECK(*report.bound_k == 1);  // exp(-1) < 0.4
    REQUIRE(report.structural_bound.has_value());
    CHECK(*report.structural_bound == 36);
    CHECK(report.certified_count <= 36);
    CHECK(report.certified_count == 36);  // one cover point per length-3 prefix

    const SeparationReport trivial = boundary_spanning_count(rays, 2, 1.5, index, params, consts);
    CHECK(trivial.certified_count == 1);

    const auto one = std::vector<RayApprox>{rays[0]};
    CHECK(boundary_spanning_count(one, 2, 0.4, index, params, consts).certified_count == 1);
}

TEST_CASE("packing and covering chain on trees") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    const auto rays = enumerate_rays(index, 3, 1);
    for (int n : {0, 1, 2}) {
        for (double theta : {1.0, 0.6, 0.3}) {
            const auto sep = boundary_separated_count(rays, n, theta, index, params, consts);
            const auto span = boundary_spanning_count(rays, n, theta, index, params, consts);
            const auto span_half =
                boundary_spanning_count(rays, n, theta / 2, index, params, consts);
            CHECK(span.certified_count <= sep.certified_count + sep.ambiguous_pairs);
            CHECK(sep.certified_count <= span_half.certified_count);
        }
    }
}

TEST_CASE("monotonicity of certified counts on trees") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    const auto rays = enumerate_rays(index, 3, 1);
    const std::vector<double> thetas{1.0, 0.6, 0.3};
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        std::uint64_t prev_sep = 0, prev_span = 0;
        for (int n : {0, 1, 2}) {
            const auto sep = boundary_separated_count(rays, n, thetas[t], index, params, consts);
            const auto span = boundary_spanning_count(rays, n, thetas[t], index, params, consts);
            CHECK(sep.certified_count >= prev_sep);
            CHECK(span.certified_count >= prev_span);
            prev_sep = sep.certified_count;
            prev_span = span.certified_count;
        }
        if (t > 0) {
            // smaller theta never decreases either count
            for (int n : {0, 1}) {
                const auto larger =
                    boundary_separated_count(rays, n, thetas[t - 1], index, params, consts);
                const auto smaller =
                    boundary_separated_count(rays, n, thetas[t], index, params, consts);
                CHECK(smaller.certified_count >= larger.certified_count);
            }
        }
    }
}

TEST_CASE("boundary entropy of the free group") {
    const BallIndex index = BallIndex::enumerate(F2, 9);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(0.5, 0.0);
    const EntropyEstimate estimate = boundary_entropy_estimate(
        index, params, consts, 5, 1, {0.9, 0.9 * std::exp(-0.5)}, IntRange{0, 3});
    CHECK(estimate.estimate == doctest::Approx(std::log(3.0)).epsilon(0.01));
    CHECK(estimate.max_ambiguous_fraction == 0.0);
}

TEST_CASE("constant counts give slope zero") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(1.0, 0.0);
    // theta above the diameter: every count is 1
    const EntropyEstimate estimate =
        boundary_entropy_estimate(index, params, consts, 3, 1, {1.5}, IntRange{0, 2});
    CHECK(estimate.estimate == doctest::Approx(0.0));
}

TEST_CASE("entropy estimate parameter validation") {
    const BallIndex index = BallIndex::enumerate(F2, 6);
    const HypConstants consts = tree_constants();
    const BoundaryMetricParams params(0.5, 0.0);
    CHECK_THROWS_AS(
        boundary_entropy_estimate(index, params, consts, 3, 1, {}, IntRange{0, 2}), InputError);
    CHECK_THROWS_AS(
        boundary_entropy_estimate(index, params, consts, 3, 1, {0.9}, IntRange{0, 0}), InputError);
    CHECK_THROWS_AS(
        boundary_entropy_estimate(index, params, consts, 5, 1, {0.9}, IntRange{0, 2}),
        CapabilityError);
}
