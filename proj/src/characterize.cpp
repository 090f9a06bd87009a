#include "bphi/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace bphi {

namespace {

double binomial(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Difference {
    double value = 0.0;
    double abs_terms = 0.0;  // sum of |coefficient * f| before scaling
};

Difference forward_difference(const ScalarField& f, const Vector& lambda, const std::vector<int>& k, const Vector& h)
{
    const int d = static_cast<int>(k.size());
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    int total = 0;
    for (int v : k) total += v;
    Difference out;
    for (;;) {
        double coef = 1.0;
        int used = 0;
        Vector point = lambda;
        for (int j = 0; j < d; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            coef *= binomial(k[jj], idx[jj]);
            used += idx[jj];
            point[j] += idx[jj] * h[j];
        }
        if ((total - used) % 2 != 0) coef = -coef;
        const double term = coef * f(point);
        out.value += term;
        out.abs_terms += std::abs(term);
        int j = 0;
        for (; j < d; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            if (++idx[jj] <= k[jj]) break;
            idx[jj] = 0;
        }
        if (j == d) break;
    }
    double scale = 1.0;
    for (int j = 0; j < d; ++j) scale *= std::pow(h[j], k[static_cast<std::size_t>(j)]);
    out.value /= scale;
    out.abs_terms /= scale;
    return out;
}

std::vector<Vector> grid_points(const Box& box, int points)
{
    const int d = box.dimension();
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(points);
    std::vector<Vector> out;
    out.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vector x(d);
        std::size_t rem = flat;
        for (int j = 0; j < d; ++j) {
            const auto i = static_cast<double>(rem % static_cast<std::size_t>(points));
            x[j] = points == 1 ? box.lo[j] : box.lo[j] + (box.hi[j] - box.lo[j]) * i / (points - 1);
            rem /= static_cast<std::size_t>(points);
        }
        out.push_back(std::move(x));
    }
    return out;
}

void validate(const Box& box, const StencilSettings& s)
{
    check_dimension(box.dimension());
    check_same_size(box.lo.size(), box.hi.size(), "box");
    if (!(box.hi.array() >= box.lo.array()).all()) throw DomainError("box: hi must be >= lo");
    if (s.k_max < 0 || s.grid_points < 1) throw ParameterError("stencil settings: k_max >= 0 and grid_points >= 1");
    if (!(s.step_fraction > 0.0)) throw ParameterError("stencil settings: step fraction must be positive");
}

}  // namespace

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Box Box::cube(int d, double lo, double hi)
{
    return {Vector::Constant(d, lo), Vector::Constant(d, hi)};
}

double mixed_forward_difference(const ScalarField& f, const Vector& lambda, const std::vector<int>& k,
                                const Vector& h)
{
    check_same_size(static_cast<Eigen::Index>(k.size()), lambda.size(), "mixed_forward_difference");
    return forward_difference(f, lambda, k, h).value;
}

std::vector<std::vector<int>> stencil_orders(int d, int k_max)
{
    check_dimension(d);
    std::vector<std::vector<int>> out;
    for (int degree = 0; degree <= k_max; ++degree) {
        std::vector<std::vector<int>> level;
        std::vector<int> k(static_cast<std::size_t>(d), 0);
        // enumerate compositions of `degree` into d parts
        std::function<void(int, int)> rec = [&](int j, int left) {
            if (j == d - 1) {
                k[static_cast<std::size_t>(j)] = left;
                level.push_back(k);
                return;
            }
            for (int v = left; v >= 0; --v) {
                k[static_cast<std::size_t>(j)] = v;
                rec(j + 1, left - v);
            }
        };
        rec(0, degree);
        std::sort(level.begin(), level.end(), std::greater<>());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

MonotonicityResult check_absolutely_monotonic(const ScalarField& f, const Box& box, const StencilSettings& s)
{
    validate(box, s);
    const int d = box.dimension();
    Vector h(d);
    for (int j = 0; j < d; ++j) {
        const double width = box.hi[j] - box.lo[j];
        h[j] = (width > 0.0 ? width : 1.0) * s.step_fraction;
    }
    const Vector h2 = 0.5 * h;
    const auto points = grid_points(box, s.grid_points);
    constexpr double kEps = std::numeric_limits<double>::epsilon();

    MonotonicityResult out;
    bool have_inconclusive = false;
    for (const auto& k : stencil_orders(d, s.k_max)) {
        for (const auto& x : points) {
            const auto a = forward_difference(f, x, k, h);
            const auto b = forward_difference(f, x, k, h2);
            ++out.stencils_checked;
            const double err = std::abs(a.value - b.value) + 4.0 * kEps * (a.abs_terms + b.abs_terms);
            if (!std::isfinite(a.value)) {
                if (!have_inconclusive) {
                    have_inconclusive = true;
                    out.verdict = Verdict::inconclusive;
                    out.order = k;
                    out.point = x;
                    out.difference = a.value;
                    out.error_estimate = err;
                }
                continue;
            }
            if (a.value < -s.error_factor * err) {
                out.verdict = Verdict::violated;
                out.order = k;
                out.point = x;
                out.difference = a.value;
                out.error_estimate = err;
                return out;
            }
            if (a.value < 0.0 && !have_inconclusive) {
                have_inconclusive = true;
                out.verdict = Verdict::inconclusive;
                out.order = k;
                out.point = x;
                out.difference = a.value;
                out.error_estimate = err;
            }
        }
    }
    return out;
}

MonotonicityResult check_octant_monotonic(const ScalarField& f, const SignVector& eps, const Box& box,
                                          const StencilSettings& s)
{
    check_same_size(eps.dimension(), box.dimension(), "check_octant_monotonic");
    Box flipped{Vector(box.dimension()), Vector(box.dimension())};
    for (int j = 0; j < box.dimension(); ++j) {
        if (eps[j] > 0) {
            flipped.lo[j] = box.lo[j];
            flipped.hi[j] = box.hi[j];
        } else {
            flipped.lo[j] = -box.hi[j];
            flipped.hi[j] = -box.lo[j];
        }
    }
    auto g = [&](const Vector& mu) { return f(coordinatewise_product(eps, mu)); };
    auto r = check_absolutely_monotonic(g, flipped, s);
    if (r.verdict != Verdict::consistent) r.point = coordinatewise_product(eps, r.point);
    return r;
}

DecompositionResult decomposition_check(const std::vector<DecompositionPart>& parts, const ScalarField& target,
                                        const Box& box, const StencilSettings& s, double sum_tolerance,
                                        double origin_tolerance)
{
    validate(box, s);
    const int d = box.dimension();
    std::set<std::uint32_t> seen;
    for (const auto& p : parts) {
        check_same_size(p.eps.dimension(), d, "decomposition_check");
        if (!seen.insert(p.eps.index()).second) {
            throw ParameterError("decomposition_check: duplicate part for sign vector " + p.eps.to_string());
        }
    }
    DecompositionResult out;
    auto total = [&](const Vector& x) {
        double sum = 0.0;
        for (const auto& p : parts) sum += p.f(x);
        return sum;
    };
    for (const auto& x : grid_points(box, s.grid_points)) {
        const double t = target(x);
        const double err = std::abs(total(x) - t) / std::max(1.0, std::abs(t));
        out.max_sum_error = std::max(out.max_sum_error, err);
    }
    out.origin_sum = total(Vector::Zero(d));
    bool inconclusive = false;
    for (const auto& p : parts) {
        out.parts.push_back(check_octant_monotonic(p.f, p.eps, box, s));
        if (out.parts.back().verdict == Verdict::violated) {
            out.verdict = Verdict::violated;
            out.reason += "part " + p.eps.to_string() + " is not monotonic relative to its octant; ";
        } else if (out.parts.back().verdict == Verdict::inconclusive) {
            inconclusive = true;
        }
    }
    if (out.max_sum_error > sum_tolerance) {
        out.verdict = Verdict::violated;
        out.reason += "sum of parts differs from the target; ";
    }
    if (std::abs(out.origin_sum - 1.0) > origin_tolerance) {
        out.verdict = Verdict::violated;
        out.reason += "sum of parts at the origin differs from 1; ";
    }
    if (out.verdict != Verdict::violated && inconclusive) out.verdict = Verdict::inconclusive;
    return out;
}

}  // namespace bphi
