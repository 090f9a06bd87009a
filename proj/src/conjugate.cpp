#include "bphi/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bphi/kernels.hpp"

namespace bphi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct AscentResult {
    Vector x;
    double value = -kInf;
    Vector gradient;
    int iterations = 0;
};

// Gradient ascent with Barzilai-Borwein steps and Armijo backtracking on a
// concave objective. Only improving steps are accepted.
template <class Objective, class Gradient>
AscentResult concave_ascent(const Objective& f, const Gradient& grad, Vector x, double tol, int max_iter,
                            double escape_radius)
{
    AscentResult r;
    r.x = std::move(x);
    r.value = f(r.x);
    r.gradient = grad(r.x);
    double step = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        r.iterations = it;
        const double gn2 = r.gradient.squaredNorm();
        if (!(gn2 > tol * tol)) break;
        double t = step;
        Vector xn;
        double fn = -kInf;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            xn = r.x + t * r.gradient;
            fn = f(xn);
            if (fn >= r.value + 1e-4 * t * gn2 || (fn > r.value && bt > 40)) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        Vector gnew = grad(xn);
        const Vector s = xn - r.x;
        const Vector yv = gnew - r.gradient;
        const double sy = s.dot(yv);
        step = sy < 0.0 ? s.squaredNorm() / (-sy) : 2.0 * t;
        r.x = std::move(xn);
        r.value = fn;
        r.gradient = std::move(gnew);
        if (r.x.lpNorm<Eigen::Infinity>() > escape_radius) break;
    }
    return r;
}

Vector bounding_half_widths(const SupportRegion& s, double b)
{
    const int d = s.dimension();
    switch (s.kind()) {
    case SupportRegion::Kind::full_space: return Vector::Constant(d, b);
    case SupportRegion::Kind::euclidean_ball: return Vector::Constant(d, s.radius());
    case SupportRegion::Kind::box: return s.half_widths();
    }
    return Vector::Constant(d, b);
}

double corner_distance(const Vector& x, const Vector& center, const Vector& half)
{
    return ((x - center).cwiseAbs() + half).norm();
}

}  // namespace

ConjugateEvaluator::ConjugateEvaluator(YoungFunction phi) : ConjugateEvaluator(std::move(phi), Settings{}) {}

ConjugateEvaluator::ConjugateEvaluator(YoungFunction phi, Settings settings)
    : phi_(std::move(phi)), settings_(settings)
{
    if (settings_.grid_points < 3) throw ParameterError("conjugate grid needs at least 3 points per axis");
    if (settings_.zoom <= 1.0) throw ParameterError("conjugate zoom factor must exceed 1");
}

ConjugateValue ConjugateEvaluator::operator()(const Vector& y) const
{
    check_same_size(y.size(), phi_.dimension(), "conjugate");
    if (!y.allFinite()) throw DomainError("conjugate: y must be finite");
    return search(y);
}

std::vector<ConjugateValue> ConjugateEvaluator::evaluate_batch(std::span<const Vector> ys) const
{
    std::vector<ConjugateValue> out(ys.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ys.size()); ++i) {
        out[static_cast<std::size_t>(i)] = (*this)(ys[static_cast<std::size_t>(i)]);
    }
    return out;
}

ConjugateValue ConjugateEvaluator::search(const Vector& y) const
{
    const int d = phi_.dimension();
    const bool bounded = phi_.support().bounded();
    const bool full_grid = d <= settings_.full_grid_max_dimension;
    const double scale = std::max(1.0, y.norm());
    const double tol = settings_.tolerance * scale;

    auto objective = [&](const Vector& x) {
        const double f = phi_(x);
        if (!std::isfinite(f)) return -kInf;
        return x.dot(y) - f;
    };
    auto gradient = [&](const Vector& x) -> Vector { return y - phi_.gradient_or_estimate(x); };

    ConjugateValue out;
    out.method = full_grid ? "grid+ascent" : "multistart+ascent";

    double b = settings_.initial_half_width;
    Vector half = bounding_half_widths(phi_.support(), b);
    Vector best_x = Vector::Zero(d);
    double best_v = 0.0;  // x = 0 is always a candidate

    auto locate = [&](const Vector& h, int points) {
        Vector bx = Vector::Zero(d);
        double bv = 0.0;
        if (full_grid) {
            const auto g = kernels::grid_argmax(objective, -h, h, points);
            if (g.value > bv) {
                bv = g.value;
                bx = g.point;
            }
        } else {
            std::vector<Vector> starts{Vector::Zero(d)};
            for (const auto& eps : enumerate_sign_vectors(d)) {
                starts.push_back(coordinatewise_product(eps, 0.5 * h));
            }
            for (const auto& s : starts) {
                if (!std::isfinite(objective(s))) continue;
                auto r = concave_ascent(objective, gradient, s, tol, settings_.max_ascent_iterations,
                                        h.maxCoeff() * 4.0);
                if (r.value > bv) {
                    bv = r.value;
                    bx = r.x;
                }
            }
        }
        return std::pair{bx, bv};
    };

    auto on_boundary = [&](const Vector& x, const Vector& h, int points) {
        for (int j = 0; j < d; ++j) {
            const double cell = 2.0 * h[j] / (points - 1);
            if (std::abs(x[j]) >= h[j] - 0.5 * cell) return true;
        }
        return false;
    };

    // Expansion with a coarse grid until the incumbent is interior.
    const int coarse = std::min(settings_.grid_points, 17);
    if (!bounded) {
        for (;;) {
            auto [bx, bv] = locate(half, coarse);
            if (!on_boundary(bx, half, coarse)) break;
            if (2.0 * b > settings_.overflow_guard) {
                out.diverged = true;
                out.value = bv;
                out.argmax = bx;
                const double n = bx.norm();
                out.escaping_ray = n > 0.0 ? Vector(bx / n) : Vector::Unit(d, 0);
                out.slack = kInf;
                out.search_half_width = b;
                return out;
            }
            b *= 2.0;
            half = bounding_half_widths(phi_.support(), b);
        }
    }

    {
        auto [bx, bv] = locate(half, settings_.grid_points);
        if (bv > best_v) {
            best_v = bv;
            best_x = bx;
        }
    }

    if (full_grid) {
        Vector w = half;
        for (int pass = 0; pass < settings_.refinement_passes; ++pass) {
            w /= settings_.zoom;
            const auto g = kernels::grid_argmax(objective, best_x - w, best_x + w, settings_.grid_points);
            if (g.value > best_v) {
                best_v = g.value;
                best_x = g.point;
            }
        }
    }

    auto polished = concave_ascent(objective, gradient, best_x, tol, settings_.max_ascent_iterations,
                                   settings_.overflow_guard);
    if (polished.value > best_v) {
        best_v = polished.value;
        best_x = polished.x;
    }

    const Vector g = gradient(best_x);
    out.value = best_v;
    out.argmax = best_x;
    out.gradient_residual = g.norm();
    out.search_half_width = half.maxCoeff();
    // concavity: sup over the box <= value + |grad| * (distance to farthest corner)
    out.slack = out.gradient_residual * corner_distance(best_x, Vector::Zero(d), half) +
                1e-12 * std::max(1.0, std::abs(best_v));
    return out;
}

ConjugateValue conjugate(const YoungFunction& phi, const Vector& y)
{
    return ConjugateEvaluator(phi)(y);
}

double biconjugate_residual(const YoungFunction& phi, std::span<const Vector> probes,
                            const ConjugateEvaluator::Settings& settings)
{
    if (probes.empty()) return 0.0;
    const int d = phi.dimension();
    const ConjugateEvaluator star(phi, settings);

    double y_range = 0.0;
    for (const auto& l : probes) {
        check_same_size(l.size(), d, "biconjugate_residual");
        if (!phi.support().contains(l)) throw DomainError("biconjugate_residual: probe outside support");
        y_range = std::max(y_range, phi.gradient_or_estimate(l).lpNorm<Eigen::Infinity>());
    }
    y_range = 1.25 * y_range + 1e-3;

    // phi* tabulated on a coarse grid of y, then refined per probe by ascent
    const int pts = d == 1 ? 65 : (d == 2 ? 17 : 7);
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(pts);
    std::vector<Vector> ys;
    ys.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vector yv(d);
        std::size_t rem = flat;
        for (int j = 0; j < d; ++j) {
            yv[j] = -y_range + 2.0 * y_range * static_cast<double>(rem % pts) / (pts - 1);
            rem /= static_cast<std::size_t>(pts);
        }
        ys.push_back(std::move(yv));
    }
    const auto table = star.evaluate_batch(ys);

    std::vector<double> residual(probes.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t p = 0; p < static_cast<std::ptrdiff_t>(probes.size()); ++p) {
        const Vector& l = probes[static_cast<std::size_t>(p)];
        std::size_t best = 0;
        double best_v = -kInf;
        for (std::size_t k = 0; k < ys.size(); ++k) {
            const double v = l.dot(ys[k]) - table[k].value;
            if (v > best_v) {
                best_v = v;
                best = k;
            }
        }
        auto f = [&](const Vector& yv) { return l.dot(yv) - star(yv).value; };
        auto g = [&](const Vector& yv) -> Vector { return l - star(yv).argmax; };
        const auto r = concave_ascent(f, g, ys[best], 1e-10 * std::max(1.0, l.norm()), 200, 1e12);
        const double biconj = std::max(best_v, r.value);
        residual[static_cast<std::size_t>(p)] = std::abs(biconj - phi(l));
    }
    return *std::max_element(residual.begin(), residual.end());
}

double ray_inverse(const YoungFunction& phi, const Vector& direction, double level)
{
    check_same_size(direction.size(), phi.dimension(), "ray_inverse");
    if (!(level > 0.0) || !std::isfinite(level)) throw DomainError("ray_inverse: level must be positive and finite");
    const double n = direction.norm();
    if (!(n > 0.0)) throw DomainError("ray_inverse: zero direction");
    const Vector u = direction / n;
    const double limit = phi.support().ray_limit(u);

    double lo = 0.0;
    double hi = 1e-8;
    for (;;) {
        if (hi >= limit) {
            hi = limit;  // phi -> inf at the boundary of V
            break;
        }
        const double v = phi(hi * u);
        if (v >= level) break;
        lo = hi;
        hi *= 4.0;
        if (!std::isfinite(hi) || hi > 1e300) throw RangeError("ray_inverse: level not reached along the ray");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = phi(mid * u);
        if (std::abs(v - level) <= 1e-12 * level) return mid;
        if (v < level) lo = mid;
        else hi = mid;
    }
    const double v_lo = phi(lo * u);
    const double v_hi = phi(hi * u);
    if (std::isfinite(v_hi) && std::abs(v_hi - level) <= std::abs(v_lo - level)) return hi;
    return lo;
}

double LogReparamFunction::operator()(const Vector& mu) const
{
    return phi_(mu.array().exp().matrix());
}

LogReparamConjugate log_reparam_conjugate(const YoungFunction& phi, const Vector& r)
{
    const int d = phi.dimension();
    check_same_size(r.size(), d, "log_reparam_conjugate");
    if (!(r.array() > 0.0).all()) throw DomainError("log_reparam_conjugate: r must be positive");
    const LogReparamFunction big_phi(phi);

    constexpr double kMuMin = -40.0;
    double mu_max = 40.0;
    if (phi.support().bounded()) {
        mu_max = std::min(mu_max, std::log(phi.support().inner_radius() * (d > 1 ? 1.0 / std::sqrt(d) : 1.0)));
        if (phi.support().kind() == SupportRegion::Kind::euclidean_ball && d == 1) {
            mu_max = std::log(phi.support().radius());
        }
    }

    auto objective = [&](const Vector& mu) {
        const double v = big_phi(mu);
        if (!std::isfinite(v)) return -kInf;
        return r.dot(mu) - v;
    };

    const int pts = d == 1 ? 801 : (d == 2 ? 81 : 21);
    auto g = kernels::grid_argmax(objective, Vector::Constant(d, kMuMin), Vector::Constant(d, mu_max), pts);
    double w = 0.5 * (mu_max - kMuMin);
    Vector best = g.point;
    double best_v = g.value;
    const int refine_pts = d == 1 ? 65 : (d == 2 ? 33 : 11);
    for (int pass = 0; pass < 8; ++pass) {
        w /= 8.0;
        const auto gg = kernels::grid_argmax(objective, best.array() - w, best.array() + w, refine_pts);
        if (gg.value > best_v) {
            best_v = gg.value;
            best = gg.point;
        }
    }

    LogReparamConjugate out;
    out.value = best_v;
    out.argmax = best;
    const double cell = (mu_max - kMuMin) / (pts - 1);
    if (!phi.support().bounded() && (best.array() >= mu_max - cell).any()) out.diverged = true;
    return out;
}

LogReparamConjugate log_reparam_conjugate(const YoungFunction& phi, double r)
{
    if (phi.dimension() != 1) throw ShapeError("scalar log_reparam_conjugate needs a one-dimensional phi");
    return log_reparam_conjugate(phi, Vector::Constant(1, r));
}

}  // namespace bphi
