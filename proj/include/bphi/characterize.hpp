#pragma once

// Finite-difference checks of the sign structure of mixed partial
// derivatives: absolute monotonicity and monotonicity relative to an octant.

#include <functional>
#include <string>
#include <vector>

#include "bphi/core.hpp"

namespace bphi {

/// Numerical differentiation can refute but never certify a continuum
/// property: `consistent` means no violation at this resolution.
enum class Verdict { consistent, violated, inconclusive };

std::string to_string(Verdict v);

/// Axis-aligned box [lo, hi].
struct Box {
    Vector lo;
    Vector hi;

    static Box cube(int d, double lo, double hi);
    int dimension() const { return static_cast<int>(lo.size()); }
};

struct StencilSettings {
    int k_max = 4;
    int grid_points = 9;              ///< per axis
    double step_fraction = 1.0 / 64;  ///< h = step_fraction * box width per axis
    double error_factor = 10.0;       ///< violation needs difference < -factor * error estimate
};

struct MonotonicityResult {
    Verdict verdict = Verdict::consistent;
    std::vector<int> order;      ///< witness order vector when not consistent
    Vector point;                ///< witness grid point
    double difference = 0.0;     ///< signed difference at the witness (sign-adjusted)
    double error_estimate = 0.0;
    int stencils_checked = 0;
};

using ScalarField = std::function<double(const Vector&)>;

/// Mixed forward difference of order k with steps h at lambda, divided by
/// prod h(j)^k(j).
double mixed_forward_difference(const ScalarField& f, const Vector& lambda, const std::vector<int>& k,
                                const Vector& h);

/// All order vectors with |k| <= k_max: by total degree, then
/// lexicographically descending within a degree.
std::vector<std::vector<int>> stencil_orders(int d, int k_max);

/// Every mixed difference of order |k| <= k_max is >= 0 on the grid.
MonotonicityResult check_absolutely_monotonic(const ScalarField& f, const Box& box, const StencilSettings& s = {});

/// sign of the order-k difference equals prod eps(j)^k(j); checked as
/// absolute monotonicity of lambda -> f(eps (x) lambda) on the flipped box.
MonotonicityResult check_octant_monotonic(const ScalarField& f, const SignVector& eps, const Box& box,
                                          const StencilSettings& s = {});

struct DecompositionPart {
    SignVector eps;
    ScalarField f;
};

struct DecompositionResult {
    Verdict verdict = Verdict::consistent;
    double max_sum_error = 0.0;     ///< max relative |sum F - target| on the grid
    double origin_sum = 0.0;        ///< sum F(0)
    std::vector<MonotonicityResult> parts;
    std::string reason;
};

/// Checks target = sum of the parts on the grid, sum F(0) = 1, and that each
/// part is monotonic relative to its octant. Duplicate sign vectors are a
/// ParameterError.
DecompositionResult decomposition_check(const std::vector<DecompositionPart>& parts, const ScalarField& target,
                                        const Box& box, const StencilSettings& s = {},
                                        double sum_tolerance = 1e-8, double origin_tolerance = 1e-10);

}  // namespace bphi
