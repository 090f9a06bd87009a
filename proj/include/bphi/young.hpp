#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "bphi/core.hpp"

namespace bphi {

/// Open, convex, centrally symmetric domain V of a Young function.
class SupportRegion {
public:
    enum class Kind { full_space, euclidean_ball, box };

    static SupportRegion full_space(int d);
    static SupportRegion ball(int d, double radius);
    static SupportRegion box(const Vector& half_widths);

    Kind kind() const { return kind_; }
    int dimension() const { return dimension_; }
    bool bounded() const { return kind_ != Kind::full_space; }
    double radius() const { return radius_; }
    const Vector& half_widths() const { return half_widths_; }

    /// Strict membership (V is open).
    bool contains(const Vector& x) const;

    /// sup { t >= 0 : t * direction in V }; +inf on the full space.
    double ray_limit(const Vector& direction) const;

    /// Largest radius of a centered Euclidean ball inside V.
    double inner_radius() const;

    std::string describe() const;

private:
    Kind kind_ = Kind::full_space;
    int dimension_ = 1;
    double radius_ = 0.0;
    Vector half_widths_;
};

/// Symmetric matrix parameter B with a positive-definiteness certificate.
class MatrixParameter {
public:
    /// Symmetrizes `entries`; throws ShapeError for non-square input and
    /// ParameterError when the asymmetry exceeds 1e-12 relative.
    explicit MatrixParameter(const Matrix& entries);

    const Matrix& entries() const { return entries_; }
    bool positive_definite() const { return positive_definite_; }
    double min_eigenvalue() const { return min_eigenvalue_; }
    int dimension() const { return static_cast<int>(entries_.rows()); }

private:
    Matrix entries_;
    bool positive_definite_ = false;
    double min_eigenvalue_ = 0.0;
};

/// A scalar profile nu: [0, inf) -> [0, inf) used by radial functions.
struct ScalarProfile {
    std::string name;
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

/// Named profiles: "half" (z/2), "pow2", "pow3", "identity", and
/// "hybridQ" = 0.5 max(z, z^(Q/2)) for Q >= 2 (e.g. "hybrid3").
ScalarProfile named_profile(const std::string& name);

enum class FamilyTag { quadratic, power, bounded_support, radial, empirical, custom };

std::string to_string(FamilyTag tag);

/// Whether the function satisfies the positive-definite origin Hessian
/// condition of a Young-Orlicz function, or is admitted with it relaxed.
enum class YMembership { member, relaxed };

/// An even convex function phi with phi(0) = 0 on a symmetric support V.
///
/// Values are immutable after construction. Outside V the function evaluates
/// to +inf.
class YoungFunction {
public:
    using Evaluator = std::function<double(const Vector&)>;
    using Gradient = std::function<Vector(const Vector&)>;
    using Conjugate = std::function<double(const Vector&)>;

    struct Parts {
        int dimension = 1;
        SupportRegion support = SupportRegion::full_space(1);
        Evaluator evaluate;
        Gradient gradient;            // may be empty
        Conjugate closed_conjugate;   // may be empty
        Matrix hessian_at_origin;
        FamilyTag family = FamilyTag::custom;
        YMembership membership = YMembership::member;
        std::string spec;
    };

    explicit YoungFunction(Parts parts);

    /// A black-box function; the Hessian at the origin is estimated by
    /// central differences when not provided.
    static YoungFunction custom(int d, Evaluator f, std::string name,
                                SupportRegion support, Gradient gradient = {},
                                std::optional<Matrix> hessian = std::nullopt);

    double operator()(const Vector& lambda) const;
    bool has_gradient() const { return static_cast<bool>(impl_->gradient); }
    /// Analytic gradient; throws PreconditionError when the family has none.
    Vector gradient(const Vector& lambda) const;
    /// Analytic gradient when available, central differences otherwise.
    Vector gradient_or_estimate(const Vector& lambda) const;

    bool has_closed_conjugate() const { return static_cast<bool>(impl_->closed_conjugate); }
    double closed_conjugate(const Vector& y) const;

    int dimension() const { return impl_->dimension; }
    const SupportRegion& support() const { return impl_->support; }
    const Matrix& hessian_at_origin() const { return impl_->hessian_at_origin; }
    FamilyTag family() const { return impl_->family; }
    YMembership membership() const { return impl_->membership; }
    const std::string& spec() const { return impl_->spec; }

    /// Throws PreconditionError unless the function is a Y-class member.
    void require_member(const char* operation) const;

private:
    std::shared_ptr<const Parts> impl_;
};

/// phi(lambda) = 0.5 (B lambda, lambda).
YoungFunction make_quadratic(const MatrixParameter& b);

/// phi(lambda) = c |lambda|^p. For 1 < p < 2 the origin Hessian is singular
/// and the result carries YMembership::relaxed, as does p > 2 (zero Hessian).
YoungFunction make_power(double p, double c, int d);

/// One-dimensional phi(lambda) = c lambda^2 / (K - |lambda|) on (-K, K).
YoungFunction make_bounded_support(double k, double c);

/// phi(lambda) = nu((Q lambda, lambda)).
YoungFunction make_radial(const ScalarProfile& nu, const MatrixParameter& q);

/// Result of a randomized predicate check.
struct Lambda2Witness {
    double a = 0.0;
    double b = 0.0;
    Vector lambda;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct Lambda2Result {
    bool holds = true;
    std::optional<Lambda2Witness> witness;
    std::uint64_t seed = 0;
    int trials = 0;
    std::string function_spec;
    std::string plan;
};

/// Samples (a, b, lambda) and tests phi(a lambda) + phi(b lambda) <=
/// phi(sqrt(a^2+b^2) lambda) + tolerance * max(1, |rhs|).
Lambda2Result check_lambda2(const YoungFunction& phi, int trial_count, double tolerance,
                            std::uint64_t seed);

struct SeminormEstimate {
    double value = 0.0;
    bool unbounded = false;
    int directions = 0;
    int radii = 0;
    std::string grid;
};

/// Bisection estimate of inf { m >= 0 : phi(A^T lambda) <= phi(m^2 lambda) }
/// over a direction x radius grid. A lower bound of the true seminorm.
SeminormEstimate check_delta2_seminorm(const YoungFunction& phi, const Matrix& a,
                                       int search_budget = 256, double m_max = 1e6);

struct EvennessWitness {
    SignVector eps;
    Vector x;
    double value = 0.0;
    double flipped_value = 0.0;
};

struct EvennessResult {
    bool holds = true;
    std::optional<EvennessWitness> witness;
    std::uint64_t seed = 0;
    int trials = 0;
};

/// f(eps (x) x) = f(x) within 1e-10 for every eps, at the coordinate unit
/// vectors followed by trial_count random normal points.
EvennessResult check_absolutely_even(const std::function<double(const Vector&)>& f, int d,
                                     int trial_count, std::uint64_t seed);

}  // namespace bphi
