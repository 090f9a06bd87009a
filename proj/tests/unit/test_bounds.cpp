#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "../oracles.hpp"
#include "bphi/bounds.hpp"

using namespace bphi;

namespace {

YoungFunction quadratic(int d)
{
    return make_quadratic(MatrixParameter(Matrix::Identity(d, d)));
}

ProbePlan fine_plan()
{
    ProbePlan plan;
    plan.tolerance = 1e-7;
    return plan;
}

}  // namespace

TEST_CASE("Chernov bound examples")
{
    const auto b = chernov_bound(quadratic(1), 1.0, Vector::Constant(1, 2.0));
    CHECK(b.bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    CHECK(oracle::normal_upper_tail(2.0) <= b.bound);
    CHECK_FALSE(b.diverged);
    CHECK(chernov_bound(quadratic(2), 1.0, Vector::Zero(2)).bound == 1.0);

    std::mt19937_64 rng(3);
    for (int i = 0; i < 3; ++i) {
        const Matrix bm = oracle::random_spd(2, rng);
        const auto phi = make_quadratic(MatrixParameter(bm));
        const Vector x = (Vector(2) << 0.8, 1.7).finished();
        const auto t = chernov_bound(phi, 1.0, x);
        CHECK(t.bound == doctest::Approx(std::exp(-oracle::quadratic_conjugate(bm, x))).epsilon(1e-6));
        CHECK(t.bound > 0.0);
        CHECK(t.bound <= 1.0);
        CHECK(t.tight_bound <= t.bound);
    }
    // norm scaling: exp(-phi*(x / tau))
    CHECK(chernov_bound(quadratic(1), 2.0, Vector::Constant(1, 2.0)).bound ==
          doctest::Approx(std::exp(-0.5)).epsilon(1e-9));
    CHECK_THROWS_AS(chernov_bound(quadratic(1), 0.0, Vector::Constant(1, 1.0)), DomainError);
    CHECK_THROWS_AS(chernov_bound(quadratic(1), 1.0, Vector::Constant(1, -1.0)), DomainError);
}

TEST_CASE("Chernov bound reports divergence as underflow")
{
    const auto lc = YoungFunction::custom(
        1, [](const Vector& x) { return std::abs(x[0]) + std::log1p(std::exp(-2.0 * std::abs(x[0]))) - std::log(2.0); },
        "logcosh", SupportRegion::full_space(1));
    const auto b = chernov_bound(lc, 1.0, Vector::Constant(1, 2.0));
    CHECK(b.diverged);
    CHECK(b.bound > 0.0);
    CHECK(b.bound < 1e-300);
    CHECK(b.escaping_ray.size() == 1);
}

TEST_CASE("min-coordinate bound")
{
    const auto phi = quadratic(2);
    const auto b1 = min_coordinate_bound(phi, 1.0, 1.0);
    CHECK(b1.bound == 1.0);
    CHECK(b1.clamped);
    CHECK(b1.unclamped == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-9));
    const auto b3 = min_coordinate_bound(phi, 1.0, 3.0);
    CHECK(b3.bound == doctest::Approx(4.0 * std::exp(-9.0)).epsilon(1e-8));
    CHECK(std::pow(2.0 * oracle::normal_upper_tail(3.0), 2) <= b3.bound);
    CHECK(min_coordinate_bound(phi, 1.0, 1e-9).bound == 1.0);
    CHECK_THROWS_AS(min_coordinate_bound(phi, 1.0, 0.0), DomainError);
}

TEST_CASE("transform norms")
{
    const auto phi = quadratic(2);
    const auto g = VectorDistribution::gaussian(Matrix::Identity(2, 2));
    auto mgf = [&](const Vector& l) { return g.log_mgf(l); };
    const auto id = transform_norm(phi, Matrix::Identity(2, 2), 1.0, mgf, true, fine_plan());
    CHECK(std::abs(id.measured.value - 1.0) <= 1e-6);
    CHECK(id.within_bound);
    const double c = std::cos(0.7), s = std::sin(0.7);
    const Matrix rot = (Matrix(2, 2) << c, -s, s, c).finished();
    const auto r = transform_norm(phi, rot, 1.0, mgf, true, fine_plan());
    CHECK(std::abs(r.measured.value - 1.0) <= 1e-6);
    CHECK(r.warning.empty());
    const Matrix sing = (Matrix(2, 2) << 1.0, 1.0, 1.0, 1.0).finished();
    CHECK_FALSE(transform_norm(phi, sing, 1.0, mgf).warning.empty());
}

TEST_CASE("transform norms stay below the seminorm product bound")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    const auto phi = quadratic(2);
    for (int i = 0; i < 4; ++i) {
        Matrix a(2, 2);
        for (int j = 0; j < 4; ++j) a(j / 2, j % 2) = n(rng);
        const Matrix q = oracle::random_spd(2, rng);
        const auto g = VectorDistribution::gaussian(q);
        const double xi_norm = bphi_norm(exact_natural(g), phi).value;
        const auto t = transform_norm(phi, a, xi_norm, [&](const Vector& l) { return g.log_mgf(l); });
        CHECK(t.within_bound);
        CHECK(t.measured.value <= t.product_bound * (1.0 + 1e-3));
    }
}

TEST_CASE("subgaussian transform rule with the plain MGF")
{
    // ||A xi||_Sub(A R A^T) = ||xi||_Sub(R) for invertible A
    std::mt19937_64 rng(17);
    std::normal_distribution<double> n;
    for (int i = 0; i < 3; ++i) {
        Matrix a(2, 2);
        for (int j = 0; j < 4; ++j) a(j / 2, j % 2) = n(rng);
        const Matrix q = oracle::random_spd(2, rng);
        const Matrix rr = oracle::random_spd(2, rng);
        const auto g = VectorDistribution::gaussian(q);
        auto mgf = [&](const Vector& l) { return g.log_mgf(l); };
        const double xi = bphi_norm(exact_natural(mgf), make_quadratic(MatrixParameter(rr)), fine_plan()).value;
        // the oracle: sqrt of the largest generalized eigenvalue of (Q, R)
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(q, rr);
        const double exact = std::sqrt(es.eigenvalues().maxCoeff());
        // finite direction sets give lower bounds within the angular resolution
        CHECK(xi == doctest::Approx(exact).epsilon(1e-3));
        CHECK(xi <= exact * (1.0 + 1e-7));
        const Matrix arat = a * rr * a.transpose();
        const auto t = transform_norm(make_quadratic(MatrixParameter(arat)), a, xi, mgf, false, fine_plan());
        CHECK(t.measured.value == doctest::Approx(exact).epsilon(1e-3));
        CHECK(t.measured.value <= exact * (1.0 + 1e-7));
    }
}

TEST_CASE("Pythagoras sum rule")
{
    const auto phi = quadratic(1);
    const auto cert = check_lambda2(phi, 1000, 1e-9, 1);
    CHECK(sum_norm_pythagoras(SumSpec{{3.0, 4.0}, 2}, phi, cert) == doctest::Approx(5.0 / std::sqrt(2.0)));
    for (int n : {1, 7, 100}) CHECK(sum_norm_pythagoras(SumSpec::iid(1.0, n), phi, cert) == doctest::Approx(1.0));
    const auto bad = check_lambda2(make_power(1.5, 1.0, 1), 1000, 1e-9, 1);
    CHECK_THROWS_AS(sum_norm_pythagoras(SumSpec::iid(1.0, 2), make_power(1.5, 1.0, 1), bad), PreconditionError);
    CHECK_THROWS_AS(sum_norm_pythagoras(SumSpec::iid(1.0, 2), quadratic(2), cert), PreconditionError);
    CHECK_THROWS_AS(SumSpec::iid(1.0, 0), ParameterError);

    // gaussian sums are gaussian: the exact normalized-sum MGF has norm sigma(n) = 1
    const auto g = VectorDistribution::gaussian(Matrix::Identity(1, 1));
    for (int n : {2, 8}) {
        auto sum_mgf = [&, n](const Vector& l) { return n * g.log_mgf(l / std::sqrt(static_cast<double>(n))); };
        CHECK(bphi_norm(exact_natural(sum_mgf), phi, fine_plan()).value == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("sum bounds")
{
    const auto phi = quadratic(1);
    const auto cert = check_lambda2(phi, 1000, 1e-9, 1);
    const auto b = sum_bound(SumSpec::iid(1.0, 16), phi, cert, Vector::Constant(1, 2.0));
    CHECK(b.bound == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
    CHECK(sum_bound(SumSpec::iid(1.0, 16), phi, cert, Vector::Zero(1)).bound == 1.0);
    const auto s = sample_normalized_sums(VectorDistribution::gaussian(Matrix::Identity(1, 1)), 8, 100000, 3);
    const auto emp = tail_function(s, Vector::Constant(1, 2.0));
    CHECK(emp.value - 3.0 * emp.half_width <= b.bound);
    CHECK(std::abs(emp.value - oracle::normal_upper_tail(2.0)) <= 3.0 * emp.half_width);
    const auto u = uniform_sum_bound({SumSpec{{1.0, 3.0}, 2}, SumSpec::iid(1.0, 4)}, phi, cert, Vector::Constant(1, 2.0));
    CHECK(u.norm == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("phi_n and phi_bar")
{
    const auto q = quadratic(2);
    const Vector l = (Vector(2) << 0.7, -1.3).finished();
    for (int n : {1, 3, 64}) CHECK(phi_n(q, n, l) == doctest::Approx(q(l)).epsilon(1e-14));
    CHECK(phi_bar(q, l, 64) == doctest::Approx(q(l)).epsilon(1e-14));
    const auto p4 = make_power(4.0, 1.0, 1);
    const Vector one = Vector::Constant(1, 1.5);
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 64; n *= 2) {
        const double v = phi_n(p4, n, one);
        CHECK(v == doctest::Approx(std::pow(1.5, 4) / n));
        CHECK(v < prev);
        prev = v;
    }
    CHECK(phi_bar(p4, one, 64) == doctest::Approx(std::pow(1.5, 4)));
    CHECK(doubling_n_set(20) == std::vector<int>{1, 2, 4, 8, 16, 20});
    CHECK(doubling_n_set(1) == std::vector<int>{1});
    // bounded support: lambda / sqrt(n) must stay inside V
    CHECK_THROWS_AS(phi_n(make_bounded_support(1.0, 1.0), 1, Vector::Constant(1, 2.0)), DomainError);
    CHECK(phi_n(make_bounded_support(1.0, 1.0), 16, Vector::Constant(1, 2.0)) > 0.0);
    CHECK(make_phi_bar(q, 8).spec().find("heuristic") != std::string::npos);
}

TEST_CASE("phi_n is nonincreasing in n for super-quadratic radial functions")
{
    const auto r = make_radial(named_profile("pow3"), MatrixParameter(Matrix::Identity(2, 2)));
    const Vector l = (Vector(2) << 1.2, 0.9).finished();
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 128; n *= 2) {
        const double v = phi_n(r, n, l);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("sum bounds via phi_n")
{
    const auto q = quadratic(1);
    const Vector x = Vector::Constant(1, 1.7);
    CHECK(sum_bound_via_phi_n(q, 8, x).bound == doctest::Approx(std::exp(-0.5 * 1.7 * 1.7)).epsilon(1e-8));
    CHECK(sum_bound_via_phi_n(q, 8, Vector::Zero(1)).bound == 1.0);
    const auto lc = YoungFunction::custom(
        1, [](const Vector& v) { return std::abs(v[0]) + std::log1p(std::exp(-2.0 * std::abs(v[0]))) - std::log(2.0); },
        "logcosh", SupportRegion::full_space(1));
    const auto b = sum_bound_via_phi_n(lc, 16, Vector::Constant(1, 2.0));
    const auto s = sample_normalized_sums(VectorDistribution::rademacher(1.0, 1), 16, 100000, 5);
    const auto emp = tail_function(s, Vector::Constant(1, 2.0));
    CHECK(emp.value - 3.0 * emp.half_width <= b.bound);
    CHECK(uniform_sum_bound_via_phi_bar(q, 16, x).ingredients.find("heuristic") != std::string::npos);
}

TEST_CASE("lower bounds")
{
    const auto g = VectorDistribution::gaussian(Matrix::Identity(2, 2));
    const Vector x = Vector::Constant(2, 0.8);
    const auto lb = lower_bound(g, x, 8, 100000, 4);
    const double exact = std::pow(oracle::normal_upper_tail(0.8), 2);
    for (const auto& e : {lb.component, lb.gaussian_limit, lb.sum}) {
        CHECK(std::abs(e.value - exact) <= 3.0 * e.half_width);
    }
    CHECK(lb.value >= lb.component.value);
    const auto z = lower_bound(g, Vector::Zero(2), 4, 100000, 4);
    CHECK(z.value >= 0.25 * (1.0 - z.half_width) - z.half_width);

    // sandwich for weibull p = 4 components
    const auto w = VectorDistribution::symmetric_weibull(4.0, 1.0, 2);
    const auto phi = tail_matched_function(4.0, 2);
    const double norm = bphi_norm(exact_natural(w), phi).value;
    const auto cert = check_lambda2(phi, 1000, 1e-9, 1);
    const Vector x12 = Vector::Constant(2, 1.2);
    const auto upper = sum_bound(SumSpec::iid(norm, 16), phi, cert, x12);
    const auto low = lower_bound(w, x12, 16, 100000, 8);
    const auto emp = tail_function(sample_normalized_sums(w, 16, 100000, 99), x12);
    CHECK(low.value - 3.0 * low.half_width <= emp.value + 3.0 * emp.half_width);
    CHECK(emp.value - 3.0 * emp.half_width <= upper.bound);
}

TEST_CASE("tail-matched functions")
{
    CHECK(tail_matched_function(4.0, 2).spec() == quadratic(2).spec());
    const auto h = tail_matched_function(1.5, 1);
    CHECK(h(Vector::Constant(1, 0.1)) > 0.0);
    CHECK_THROWS_AS(tail_matched_function(1.0, 1), ParameterError);
}
