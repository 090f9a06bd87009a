#pragma once

// Tail bounds exp(-phi*(x / norm)) for single vectors and normalized sums,
// linear-transform norm rules, and Monte Carlo lower bounds.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bphi/conjugate.hpp"
#include "bphi/core.hpp"
#include "bphi/empirical.hpp"
#include "bphi/norms.hpp"
#include "bphi/young.hpp"

namespace bphi {

struct TailBound {
    Vector x;
    double norm = 0.0;
    /// exp(-v) with v the computed (lower-bound) conjugate value: a valid
    /// upper bound for the computed conjugate
    double bound = 1.0;
    /// exp(-(v + slack)): what the bound would be at the upper end of the
    /// conjugate's slack
    double tight_bound = 1.0;
    double conjugate_value = 0.0;
    double slack = 0.0;
    bool clamped = false;
    bool diverged = false;       ///< the conjugate diverged: bound is 0+ (underflow)
    Vector escaping_ray;
    std::string ingredients;
};

/// exp(-phi*(x / norm)) via the numerical conjugate; x >= 0, norm > 0.
TailBound chernov_bound(const YoungFunction& phi, double norm, const Vector& x,
                        const ConjugateEvaluator::Settings& settings = {});

/// min(1, 2^d exp(-phi*((y / norm) 1))).
struct MinCoordinateBound {
    double bound = 1.0;
    double unclamped = 1.0;
    bool clamped = false;
};
MinCoordinateBound min_coordinate_bound(const YoungFunction& phi, double norm, double y);

struct TransformNormResult {
    NormEstimate measured;      ///< B(phi)-norm of A xi from the pushed-forward MGF
    double seminorm = 0.0;      ///< estimated Delta2 seminorm m of A
    double product_bound = 0.0; ///< m^2 * ||xi||
    bool within_bound = true;
    std::string warning;
};

/// Norm of A xi given the plain log-MGF of xi, lambda -> log E exp((lambda, xi)).
/// With `natural` the pushed-forward source is max over eps of
/// mgf(A^T (eps (x) lambda)); without it the plain MGF of A xi is used
/// (the Sub(B) convention).
TransformNormResult transform_norm(const YoungFunction& phi, const Matrix& a, double xi_norm,
                                   const std::function<double(const Vector&)>& plain_log_mgf,
                                   bool natural = true, const ProbePlan& plan = {});

/// Norms of the n independent summands of S(n) = n^{-1/2} sum xi_i.
struct SumSpec {
    std::vector<double> component_norms;
    int n = 0;

    static SumSpec iid(double norm, int n);
    /// n^{-1/2} (sum ||xi_i||^2)^{1/2}
    double sigma() const;
};

/// sigma(n); PreconditionError unless `certificate` holds for this phi.
double sum_norm_pythagoras(const SumSpec& spec, const YoungFunction& phi, const Lambda2Result& certificate);

/// chernov_bound with norm sigma(n).
TailBound sum_bound(const SumSpec& spec, const YoungFunction& phi, const Lambda2Result& certificate, const Vector& x);

/// Uniform-in-n variant: norm sup over the specs of sigma(n).
TailBound uniform_sum_bound(const std::vector<SumSpec>& specs, const YoungFunction& phi,
                            const Lambda2Result& certificate, const Vector& x);

/// n phi(lambda / sqrt(n)); DomainError when lambda / sqrt(n) is outside V.
double phi_n(const YoungFunction& phi, int n, const Vector& lambda);

/// {1, 2, 4, ..., n_max} (n_max included).
std::vector<int> doubling_n_set(int n_max);

/// max over n in doubling_n_set(n_max) of phi_n, and the n -> inf candidate
/// 0.5 (phi''(0) lambda, lambda). The limit term is a heuristic stand-in for
/// the untruncated sup.
double phi_bar(const YoungFunction& phi, const Vector& lambda, int n_max);

/// phi_n and phi_bar as Young functions.
YoungFunction make_phi_n(const YoungFunction& phi, int n);
YoungFunction make_phi_bar(const YoungFunction& phi, int n_max);

/// exp(-phi_n*(x)).
TailBound sum_bound_via_phi_n(const YoungFunction& phi, int n, const Vector& x);
/// exp(-phi_bar*(x)); flagged heuristic in the ingredients.
TailBound uniform_sum_bound_via_phi_bar(const YoungFunction& phi, int n_max, const Vector& x);

/// Young function matched to tails exp(-|x|^p): quadratic(I) for p >= 2,
/// the radial nu(z) = 0.5 max(z, z^(q/2)), q = p/(p-1), for 1 < p < 2.
YoungFunction tail_matched_function(double p, int d);

struct EstimateWithWidth {
    double value = 0.0;
    double half_width = 0.0;
};

struct LowerBound {
    double value = 0.0;
    double half_width = 0.0;
    std::string source;              ///< which estimate attains the max
    EstimateWithWidth component;     ///< U(xi, x)
    EstimateWithWidth gaussian_limit;///< orthant mass of N(0, Q-hat)
    EstimateWithWidth sum;           ///< U(S(n_probe), x)
};

/// max of U(xi, x), the gaussian-limit orthant mass with the empirical
/// covariance, and U(S(n_probe), x), each from `reps` draws.
LowerBound lower_bound(const VectorDistribution& dist, const Vector& x, int n_probe, std::size_t reps,
                       std::uint64_t seed);

}  // namespace bphi
