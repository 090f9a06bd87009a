#include "bphi/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <sstream>

namespace bphi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SupportRegion scaled_support(const SupportRegion& s, double factor)
{
    switch (s.kind()) {
    case SupportRegion::Kind::full_space: return s;
    case SupportRegion::Kind::euclidean_ball: return SupportRegion::ball(s.dimension(), s.radius() * factor);
    case SupportRegion::Kind::box: return SupportRegion::box(s.half_widths() * factor);
    }
    return s;
}

TailBound bound_from_conjugate(const ConjugateValue& c, const Vector& x, double norm, std::string ingredients)
{
    TailBound out;
    out.x = x;
    out.norm = norm;
    out.ingredients = std::move(ingredients);
    if (c.diverged) {
        out.diverged = true;
        out.escaping_ray = c.escaping_ray;
        out.conjugate_value = kInf;
        out.slack = 0.0;
        out.bound = std::numeric_limits<double>::min();
        out.tight_bound = out.bound;
        out.ingredients += ";conjugate diverged, bound underflows";
        return out;
    }
    out.conjugate_value = c.value;
    out.slack = c.slack;
    const double v = std::max(0.0, c.value);
    out.clamped = c.value < 0.0;
    out.bound = std::exp(-v);
    out.tight_bound = std::exp(-(v + c.slack));
    return out;
}

}  // namespace

TailBound chernov_bound(const YoungFunction& phi, double norm, const Vector& x,
                        const ConjugateEvaluator::Settings& settings)
{
    check_same_size(x.size(), phi.dimension(), "chernov_bound");
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("chernov_bound: norm must be positive");
    if (!(x.array() >= 0.0).all()) throw DomainError("chernov_bound: x must be nonnegative");
    std::ostringstream ing;
    ing << "phi=" << phi.spec() << ";norm=" << std::setprecision(17) << norm;
    if ((x.array() == 0.0).all()) {
        TailBound out;
        out.x = x;
        out.norm = norm;
        out.ingredients = ing.str();
        return out;
    }
    const ConjugateEvaluator star(phi, settings);
    return bound_from_conjugate(star(x / norm), x, norm, ing.str());
}

MinCoordinateBound min_coordinate_bound(const YoungFunction& phi, double norm, double y)
{
    if (!(y > 0.0)) throw DomainError("min_coordinate_bound: y must be positive");
    const int d = phi.dimension();
    const auto tb = chernov_bound(phi, norm, Vector::Constant(d, y));
    MinCoordinateBound out;
    out.unclamped = std::ldexp(tb.bound, d);
    out.clamped = out.unclamped > 1.0;
    out.bound = std::min(1.0, out.unclamped);
    return out;
}

TransformNormResult transform_norm(const YoungFunction& phi, const Matrix& a, double xi_norm,
                                   const std::function<double(const Vector&)>& plain_log_mgf, bool natural,
                                   const ProbePlan& plan)
{
    const int d = phi.dimension();
    if (a.rows() != d || a.cols() != d) throw ShapeError("transform_norm: A must be d x d");
    if (!(xi_norm >= 0.0)) throw DomainError("transform_norm: norm must be nonnegative");
    TransformNormResult out;
    Eigen::JacobiSVD<Matrix> svd(a);
    const auto sv = svd.singularValues();
    if (sv.minCoeff() <= 1e-12 * std::max(1.0, sv.maxCoeff())) {
        out.warning = "A is singular: A xi is supported on a proper subspace";
    }
    const Matrix at = a.transpose();
    const auto signs = enumerate_sign_vectors(d);
    NaturalSource source = [&](const Vector& l) {
        if (!natural) return MgfValue{plain_log_mgf(at * l), true, 0.0};
        double best = -kInf;
        for (const auto& eps : signs) best = std::max(best, plain_log_mgf(at * coordinatewise_product(eps, l)));
        return MgfValue{best, true, 0.0};
    };
    out.measured = bphi_norm(source, phi, plan);
    const auto semi = check_delta2_seminorm(phi, a);
    out.seminorm = semi.value;
    out.product_bound = semi.unbounded ? kInf : semi.value * semi.value * xi_norm;
    out.within_bound = out.measured.value <= out.product_bound * (1.0 + 2.0 * plan.tolerance) + plan.tolerance;
    return out;
}

SumSpec SumSpec::iid(double norm, int n)
{
    if (n < 1) throw ParameterError("SumSpec: n must be >= 1");
    return SumSpec{std::vector<double>(static_cast<std::size_t>(n), norm), n};
}

double SumSpec::sigma() const
{
    if (n < 1 || component_norms.size() != static_cast<std::size_t>(n)) {
        throw ParameterError("SumSpec: need exactly n component norms");
    }
    double s = 0.0;
    for (double v : component_norms) {
        if (!(v >= 0.0)) throw DomainError("SumSpec: component norms must be nonnegative");
        s += v * v;
    }
    return std::sqrt(s / n);
}

double sum_norm_pythagoras(const SumSpec& spec, const YoungFunction& phi, const Lambda2Result& certificate)
{
    if (!certificate.holds) throw PreconditionError("sum rule needs the Lambda2 condition, which was violated");
    if (certificate.function_spec != phi.spec()) {
        throw PreconditionError("Lambda2 certificate was issued for '" + certificate.function_spec + "', not '" +
                                phi.spec() + "'");
    }
    return spec.sigma();
}

TailBound sum_bound(const SumSpec& spec, const YoungFunction& phi, const Lambda2Result& certificate, const Vector& x)
{
    const double sigma = sum_norm_pythagoras(spec, phi, certificate);
    auto b = chernov_bound(phi, sigma, x);
    b.ingredients += ";sigma(n) n=" + std::to_string(spec.n);
    return b;
}

TailBound uniform_sum_bound(const std::vector<SumSpec>& specs, const YoungFunction& phi,
                            const Lambda2Result& certificate, const Vector& x)
{
    if (specs.empty()) throw ParameterError("uniform_sum_bound: empty n-set");
    double sigma = 0.0;
    for (const auto& s : specs) sigma = std::max(sigma, sum_norm_pythagoras(s, phi, certificate));
    auto b = chernov_bound(phi, sigma, x);
    b.ingredients += ";sup_n sigma(n) over " + std::to_string(specs.size()) + " sizes";
    return b;
}

double phi_n(const YoungFunction& phi, int n, const Vector& lambda)
{
    if (n < 1) throw DomainError("phi_n: n must be >= 1");
    const double rn = std::sqrt(static_cast<double>(n));
    const Vector scaled = lambda / rn;
    if (!phi.support().contains(scaled)) throw DomainError("phi_n: lambda / sqrt(n) is outside the support");
    return n * phi(scaled);
}

std::vector<int> doubling_n_set(int n_max)
{
    if (n_max < 1) throw DomainError("n_max must be >= 1");
    std::vector<int> out;
    for (int n = 1; n < n_max; n *= 2) out.push_back(n);
    out.push_back(n_max);
    return out;
}

double phi_bar(const YoungFunction& phi, const Vector& lambda, int n_max)
{
    double best = 0.5 * lambda.dot(phi.hessian_at_origin() * lambda);
    if (std::isnan(best)) best = kInf;
    for (int n : doubling_n_set(n_max)) best = std::max(best, phi_n(phi, n, lambda));
    return best;
}

YoungFunction make_phi_n(const YoungFunction& phi, int n)
{
    if (n < 1) throw DomainError("phi_n: n must be >= 1");
    const double rn = std::sqrt(static_cast<double>(n));
    YoungFunction::Parts p;
    p.dimension = phi.dimension();
    p.support = scaled_support(phi.support(), rn);
    p.evaluate = [phi, n, rn](const Vector& l) { return n * phi(l / rn); };
    if (phi.has_gradient()) p.gradient = [phi, rn](const Vector& l) -> Vector { return rn * phi.gradient(l / rn); };
    if (phi.has_closed_conjugate()) {
        p.closed_conjugate = [phi, n, rn](const Vector& y) { return n * phi.closed_conjugate(y / rn); };
    }
    p.hessian_at_origin = phi.hessian_at_origin();
    p.family = FamilyTag::custom;
    p.membership = phi.membership();
    p.spec = "phi_n{n=" + std::to_string(n) + "," + phi.spec() + "}";
    return YoungFunction(std::move(p));
}

YoungFunction make_phi_bar(const YoungFunction& phi, int n_max)
{
    const auto ns = doubling_n_set(n_max);
    YoungFunction::Parts p;
    p.dimension = phi.dimension();
    p.support = phi.support();
    const Matrix h = phi.hessian_at_origin();
    p.evaluate = [phi, n_max](const Vector& l) {
        if (!phi.support().contains(l)) return kInf;
        return phi_bar(phi, l, n_max);
    };
    p.gradient = [phi, ns, h](const Vector& l) -> Vector {
        double best = 0.5 * l.dot(h * l);
        Vector g = h * l;
        for (int n : ns) {
            const double rn = std::sqrt(static_cast<double>(n));
            const double v = n * phi(l / rn);
            if (v > best) {
                best = v;
                g = rn * phi.gradient_or_estimate(l / rn);
            }
        }
        return g;
    };
    p.hessian_at_origin = h;
    p.family = FamilyTag::custom;
    p.membership = phi.membership();
    p.spec = "phi_bar{n_max=" + std::to_string(n_max) + ",heuristic_limit," + phi.spec() + "}";
    return YoungFunction(std::move(p));
}

TailBound sum_bound_via_phi_n(const YoungFunction& phi, int n, const Vector& x)
{
    auto b = chernov_bound(make_phi_n(phi, n), 1.0, x);
    b.ingredients += ";phi_n n=" + std::to_string(n);
    return b;
}

TailBound uniform_sum_bound_via_phi_bar(const YoungFunction& phi, int n_max, const Vector& x)
{
    auto b = chernov_bound(make_phi_bar(phi, n_max), 1.0, x);
    b.ingredients += ";phi_bar heuristic: finite n-set plus gaussian limit";
    return b;
}

YoungFunction tail_matched_function(double p, int d)
{
    check_dimension(d);
    if (!(p > 1.0)) throw ParameterError("tail_matched_function: p must exceed 1");
    if (p >= 2.0) return make_quadratic(MatrixParameter(Matrix::Identity(d, d)));
    const double q = p / (p - 1.0);
    std::ostringstream name;
    name << "hybrid" << std::setprecision(17) << q;
    return make_radial(named_profile(name.str()), MatrixParameter(Matrix::Identity(d, d)));
}

LowerBound lower_bound(const VectorDistribution& dist, const Vector& x, int n_probe, std::size_t reps,
                       std::uint64_t seed)
{
    check_same_size(x.size(), dist.dimension(), "lower_bound");
    if (n_probe < 1) throw ParameterError("lower_bound: n_probe must be >= 1");
    const auto component = sample(dist, reps, seed);
    const auto u = tail_function(component, x);
    const Matrix q = empirical_variance(component);
    const auto limit = sample(VectorDistribution::gaussian(q), reps, seed + 1);
    const auto g = tail_function(limit, x);
    const auto sums = sample_normalized_sums(dist, n_probe, reps, seed + 2);
    const auto s = tail_function(sums, x);

    LowerBound out;
    out.component = {u.value, u.half_width};
    out.gaussian_limit = {g.value, g.half_width};
    out.sum = {s.value, s.half_width};
    out.value = u.value;
    out.half_width = u.half_width;
    out.source = "component";
    if (g.value > out.value) {
        out.value = g.value;
        out.half_width = g.half_width;
        out.source = "gaussian_limit";
    }
    if (s.value > out.value) {
        out.value = s.value;
        out.half_width = s.half_width;
        out.source = "sum";
    }
    return out;
}

}  // namespace bphi
