#pragma once

// Sampling of centered random vectors and the Monte Carlo estimators built on
// the samples: natural function, octant tail function, vector moments.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "bphi/core.hpp"
#include "bphi/kernels.hpp"
#include "bphi/random.hpp"

namespace bphi {

/// A centered distribution on R^d.
class VectorDistribution {
public:
    enum class Kind { gaussian, symmetric_weibull, rademacher, uniform_box, custom };
    /// Writes one draw of dimension d to `row`.
    using Sampler = std::function<void(Engine&, double* row)>;

    /// N(0, Q). Q must be positive semidefinite; with `require_full_rank` a
    /// singular Q is a ParameterError.
    static VectorDistribution gaussian(const Matrix& q, bool require_full_rank = false);
    /// Independent coordinates s_j * sign * M with P(M > t) = exp(-t^p).
    static VectorDistribution symmetric_weibull(double p, const Vector& scale);
    static VectorDistribution symmetric_weibull(double p, double scale, int d);
    /// Independent coordinates +-scale with probability 1/2 each.
    static VectorDistribution rademacher(double scale, int d);
    /// Independent coordinates uniform on [-hw_j, hw_j].
    static VectorDistribution uniform_box(const Vector& half_widths);
    /// A user sampler; it must be centered. `kramer` declares whether the
    /// coordinates have finite exponential moments near the origin.
    static VectorDistribution custom(int d, Sampler sampler, std::string tag, bool kramer = true);

    Kind kind() const { return kind_; }
    int dimension() const { return d_; }
    const std::string& tag() const { return tag_; }
    bool kramer() const { return kramer_; }
    const Matrix& covariance_parameter() const { return q_; }
    double tail_exponent() const { return p_; }
    const Vector& scale() const { return scale_; }

    void draw(Engine& engine, double* row) const;

    /// Whether log E exp((lambda, xi)) is known in closed form or by quadrature.
    bool has_log_mgf() const { return kind_ != Kind::custom; }
    /// log E exp((lambda, xi)); +inf where the expectation diverges.
    double log_mgf(const Vector& lambda) const;
    /// Exact natural function: max over sign vectors of log_mgf(eps (x) lambda).
    double natural_value(const Vector& lambda) const;

private:
    Kind kind_ = Kind::custom;
    int d_ = 1;
    std::string tag_;
    bool kramer_ = true;
    Matrix q_;
    Matrix factor_;
    double p_ = 2.0;
    Vector scale_;
    Sampler sampler_;
};

/// log E cosh(a M) for P(M > t) = exp(-t^p); +inf when it diverges.
double weibull_log_mgf(double p, double a);

/// n x d block of draws, row-major.
class SampleSet {
public:
    SampleSet(std::vector<double> data, std::size_t n, int d, std::uint64_t seed, std::string tag,
              bool kramer = true);

    std::size_t size() const { return n_; }
    int dimension() const { return d_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& tag() const { return tag_; }
    bool kramer() const { return kramer_; }
    const std::vector<double>& data() const { return data_; }
    double at(std::size_t i, int j) const { return data_[i * static_cast<std::size_t>(d_) + j]; }
    Vector row(std::size_t i) const;
    kernels::SampleView view() const { return {data_.data(), n_, d_}; }

    /// Header "dim,seed,tag", one line with those values, then the rows.
    void write_csv(std::ostream& out) const;
    static SampleSet read_csv(std::istream& in);

private:
    std::vector<double> data_;
    std::size_t n_ = 0;
    int d_ = 1;
    std::uint64_t seed_ = 0;
    std::string tag_;
    bool kramer_ = true;
};

/// n draws; chunk c of kernels::kChunkRows rows uses stream c of the seed,
/// so the output does not depend on the thread count.
SampleSet sample(const VectorDistribution& dist, std::size_t n, std::uint64_t seed);

/// `reps` draws of the normalized sum n^{-1/2} (xi_1 + ... + xi_n).
SampleSet sample_normalized_sums(const VectorDistribution& dist, int n_terms, std::size_t reps,
                                 std::uint64_t seed);

struct NaturalValue {
    double value = 0.0;
    /// false when one sample carries more than the trust share of the
    /// exponential sum for some sign vector
    bool trusted = true;
    double std_error = 0.0;  ///< delta-method standard error of the log-mean
    double max_share = 0.0;
};

/// lambda -> max over eps of log mean exp((eps (x) lambda, xi_i)) on
/// re-centered samples. Copies share an internal memo; evaluation is
/// thread-safe.
class EmpiricalNaturalFunction {
public:
    explicit EmpiricalNaturalFunction(const SampleSet& samples, double trust_share = 0.1);

    NaturalValue evaluate(const Vector& lambda) const;
    double operator()(const Vector& lambda) const { return evaluate(lambda).value; }
    int dimension() const;
    std::size_t sample_size() const;
    double trust_share() const;

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Throws PreconditionError for samples without exponential moments.
EmpiricalNaturalFunction natural_function(const SampleSet& samples);

/// Normal-approximation half-width 2 sqrt(p(1-p)/n), floored at 3/n.
double confidence_half_width(double p, std::size_t n);

struct TailEstimate {
    double value = 0.0;
    double half_width = 0.0;
    SignVector octant = SignVector::ones(1);  ///< maximizing sign vector
};

/// max over eps of the fraction of rows with eps(j) xi(j) > x(j) for all j.
TailEstimate tail_function(const SampleSet& samples, const Vector& x);

/// Fraction of rows with min_j |xi(j)| > y.
TailEstimate min_coordinate_tail(const SampleSet& samples, double y);

struct MomentEstimate {
    double value = 0.0;
    double log_value = 0.0;
    double half_width = 0.0;
    bool diverged = false;
};

/// ((1/n) sum_i prod_j |xi_i(j)|^r(j))^(1/|r|), computed in log space.
MomentEstimate vector_moment(const SampleSet& samples, const Vector& r);

/// Unbiased sample covariance; InsufficientDataError for n < 2.
Matrix empirical_variance(const SampleSet& samples);

}  // namespace bphi
