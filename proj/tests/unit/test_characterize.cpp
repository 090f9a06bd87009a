#include <doctest.h>

#include <cmath>

#include "../oracles.hpp"
#include "bphi/characterize.hpp"

using namespace bphi;

namespace {

double exp_sum(const Vector& l) { return std::exp(l[0] + l[1]); }
double exp_diff(const Vector& l) { return std::exp(l[0] - l[1]); }

SignVector signs(int a, int b)
{
    for (const auto& e : enumerate_sign_vectors(2)) {
        if (e[0] == a && e[1] == b) return e;
    }
    throw std::logic_error("no such sign vector");
}

}  // namespace

TEST_CASE("stencil order enumeration")
{
    const auto o = stencil_orders(2, 2);
    const std::vector<std::vector<int>> expected{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(o == expected);
    CHECK(stencil_orders(3, 4).size() == 35);
}

TEST_CASE("mixed forward differences approximate derivatives")
{
    const Vector h = Vector::Constant(2, 1e-3);
    const Vector l = (Vector(2) << 0.2, 0.3).finished();
    CHECK(mixed_forward_difference(exp_sum, l, {1, 1}, h) == doctest::Approx(std::exp(0.5)).epsilon(3e-3));
    CHECK(mixed_forward_difference(exp_diff, l, {0, 1}, h) == doctest::Approx(-std::exp(-0.1)).epsilon(3e-3));
    CHECK(mixed_forward_difference(exp_sum, l, {0, 0}, h) == doctest::Approx(std::exp(0.5)));
}

TEST_CASE("absolute monotonicity examples")
{
    StencilSettings s;
    s.k_max = 3;
    const auto box = Box::cube(2, 0.0, 1.0);
    CHECK(check_absolutely_monotonic(exp_sum, box, s).verdict == Verdict::consistent);
    const auto v = check_absolutely_monotonic(exp_diff, box, s);
    CHECK(v.verdict == Verdict::violated);
    CHECK(v.order == std::vector<int>{0, 1});
    CHECK(v.difference < -s.error_factor * v.error_estimate);
    CHECK(check_absolutely_monotonic([](const Vector&) { return 1.0; }, box, s).verdict == Verdict::consistent);
    const auto nan = check_absolutely_monotonic([](const Vector&) { return std::nan(""); }, box, s);
    CHECK(nan.verdict == Verdict::inconclusive);
}

TEST_CASE("octant monotonicity examples")
{
    const auto box = Box::cube(2, 0.0, 1.0);
    CHECK(check_octant_monotonic(exp_diff, signs(1, -1), box).verdict == Verdict::consistent);
    CHECK(check_octant_monotonic(exp_sum, signs(1, 1), box).verdict == Verdict::consistent);
    const auto v = check_octant_monotonic(exp_sum, signs(-1, -1), box);
    CHECK(v.verdict == Verdict::violated);
    CHECK(v.order == std::vector<int>{1, 0});
}

TEST_CASE("K(1) consistency equals absolute monotonicity and flips are exact")
{
    const auto box = Box::cube(2, -0.5, 0.7);
    auto f = [](const Vector& l) { return std::exp(0.3 * l[0] - 0.8 * l[1]) + std::cosh(l[0]); };
    const auto a = check_absolutely_monotonic(f, box);
    const auto k = check_octant_monotonic(f, signs(1, 1), box);
    CHECK(a.verdict == k.verdict);
    CHECK(a.order == k.order);
    CHECK(a.difference == k.difference);
    const auto eps = signs(1, -1);
    auto g = [&](const Vector& l) { return f(coordinatewise_product(eps, l)); };
    const Box flipped{(Vector(2) << -0.5, -0.7).finished(), (Vector(2) << 0.7, 0.5).finished()};
    const auto viaf = check_octant_monotonic(f, eps, box);
    const auto viag = check_absolutely_monotonic(g, flipped);
    CHECK(viaf.verdict == viag.verdict);
    CHECK(viaf.difference == viag.difference);
    CHECK(check_absolutely_monotonic(f, box).stencils_checked == check_absolutely_monotonic(f, box).stencils_checked);
}

TEST_CASE("decomposition of cosh")
{
    const auto plus = enumerate_sign_vectors(1)[0];
    const auto minus = enumerate_sign_vectors(1)[1];
    REQUIRE(plus[0] == 1);
    std::vector<DecompositionPart> parts{{plus, [](const Vector& l) { return 0.5 * std::exp(l[0]); }},
                                         {minus, [](const Vector& l) { return 0.5 * std::exp(-l[0]); }}};
    auto target = [](const Vector& l) { return std::cosh(l[0]); };
    const auto box = Box::cube(1, -1.0, 1.0);
    const auto r = decomposition_check(parts, target, box);
    CHECK(r.verdict == Verdict::consistent);
    CHECK(r.origin_sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.max_sum_error <= 1e-12);

    const auto missing = decomposition_check({parts[0]}, target, box);
    CHECK(missing.verdict == Verdict::violated);
    CHECK(missing.max_sum_error > 1e-8);
    CHECK_THROWS_AS(decomposition_check({parts[0], parts[0]}, target, box), ParameterError);
    // swapping the sign labels breaks the octant structure
    const auto swapped = decomposition_check({{minus, parts[0].f}, {plus, parts[1].f}}, target, box);
    CHECK(swapped.verdict == Verdict::violated);
}

TEST_CASE("decomposition of the gaussian exp-MGF into half-line integrals")
{
    const auto plus = enumerate_sign_vectors(1)[0];
    const auto minus = enumerate_sign_vectors(1)[1];
    std::vector<DecompositionPart> parts{
        {plus, [](const Vector& l) { return oracle::gaussian_half_line_mgf(l[0], true); }},
        {minus, [](const Vector& l) { return oracle::gaussian_half_line_mgf(l[0], false); }}};
    auto target = [](const Vector& l) { return std::exp(0.5 * l[0] * l[0]); };
    const auto r = decomposition_check(parts, target, Box::cube(1, -1.0, 1.0));
    CHECK(r.verdict == Verdict::consistent);
    CHECK(r.max_sum_error <= 1e-8);
}

TEST_CASE("characterize validation")
{
    CHECK_THROWS_AS(check_absolutely_monotonic(exp_sum, Box{Vector::Ones(2), Vector::Zero(2)}), DomainError);
    StencilSettings s;
    s.grid_points = 0;
    CHECK_THROWS_AS(check_absolutely_monotonic(exp_sum, Box::cube(2, 0.0, 1.0), s), ParameterError);
    CHECK(to_string(Verdict::inconclusive) == "inconclusive");
}
