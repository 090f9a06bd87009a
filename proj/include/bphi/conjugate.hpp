#pragma once

#include <span>
#include <string>
#include <vector>

#include "bphi/core.hpp"
#include "bphi/young.hpp"

namespace bphi {

/// One evaluation of phi*(y) = sup_x ((x, y) - phi(x)).
struct ConjugateValue {
    double value = 0.0;         ///< achieved objective; a lower bound of the supremum
    double slack = 0.0;         ///< sup over the search box is at most value + slack
    Vector argmax;
    bool diverged = false;      ///< supremum escaped the overflow guard
    Vector escaping_ray;        ///< unit direction of escape when diverged
    double gradient_residual = 0.0;
    double search_half_width = 0.0;
    std::string method;         ///< "grid+ascent" or "multistart+ascent"
};

/// Numerical Legendre-Fenchel conjugate of a Young function.
///
/// The supremum is located on a tensor grid (d <= 3) or by multistart ascent
/// (d > 3), zoomed in around the incumbent, and polished by gradient ascent on
/// the concave objective. For full-space support the search box doubles until
/// the incumbent is interior; for bounded support it is the bounding box of V.
class ConjugateEvaluator {
public:
    struct Settings {
        int grid_points = 65;
        int refinement_passes = 3;
        double zoom = 8.0;
        double initial_half_width = 1.0;
        double overflow_guard = 1e8;   ///< largest search half-width
        double tolerance = 1e-11;      ///< relative gradient-residual target
        int max_ascent_iterations = 400;
        int full_grid_max_dimension = 3;
    };

    explicit ConjugateEvaluator(YoungFunction phi);
    ConjugateEvaluator(YoungFunction phi, Settings settings);

    ConjugateValue operator()(const Vector& y) const;

    /// Evaluates a batch of points, in parallel when OpenMP is enabled.
    std::vector<ConjugateValue> evaluate_batch(std::span<const Vector> ys) const;

    const YoungFunction& source() const { return phi_; }
    const Settings& settings() const { return settings_; }

private:
    ConjugateValue search(const Vector& y) const;

    YoungFunction phi_;
    Settings settings_;
};

/// phi*(y) with default settings.
ConjugateValue conjugate(const YoungFunction& phi, const Vector& y);

/// max over probes of |phi**(lambda) - phi(lambda)|, phi** obtained by
/// conjugating the numerical phi* again.
double biconjugate_residual(const YoungFunction& phi, std::span<const Vector> probes,
                            const ConjugateEvaluator::Settings& settings = {});

/// t > 0 with phi(t u) = level, by bracketed bisection. Throws RangeError
/// when the level is not reached inside the support.
double ray_inverse(const YoungFunction& phi, const Vector& direction, double level);

/// Phi(mu) = phi(e^mu), e^mu coordinatewise.
class LogReparamFunction {
public:
    explicit LogReparamFunction(YoungFunction phi) : phi_(std::move(phi)) {}

    double operator()(const Vector& mu) const;
    const YoungFunction& source() const { return phi_; }

private:
    YoungFunction phi_;
};

struct LogReparamConjugate {
    double value = 0.0;
    Vector argmax;
    bool diverged = false;
};

/// Phi*(r) = sup_mu ((r, mu) - phi(e^mu)) over mu in [-40, mu_max]^d by grid
/// search and zoom refinement; concavity is not assumed.
LogReparamConjugate log_reparam_conjugate(const YoungFunction& phi, const Vector& r);

/// Scalar convenience for one-dimensional phi.
LogReparamConjugate log_reparam_conjugate(const YoungFunction& phi, double r);

}  // namespace bphi
