#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bphi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Upper bound on the dimension of every 2^d enumeration in the library.
inline constexpr int kMaxDimension = 16;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Throws CapacityError unless 1 <= d <= kMaxDimension.
void check_dimension(int d);

/// Throws ShapeError when the two sizes differ.
void check_same_size(Eigen::Index a, Eigen::Index b, const char* what);

/// A d-vector of +1/-1 entries.
class SignVector {
public:
    explicit SignVector(std::vector<int> entries);

    static SignVector ones(int d);

    /// Sign vector number `index` in the canonical ordering: bit j of the
    /// index set means coordinate j is -1.
    static SignVector from_index(std::uint32_t index, int d);

    int dimension() const { return static_cast<int>(entries_.size()); }
    int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
    std::span<const int> entries() const { return entries_; }
    std::uint32_t index() const;

    /// Product of eps(j)^k(j).
    int power_sign(std::span<const int> orders) const;

    std::string to_string() const;

    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<int> entries_;
};

/// All 2^d sign vectors; first is (1,...,1), then binary counting with
/// coordinate 1 as the least significant bit.
std::vector<SignVector> enumerate_sign_vectors(int d);

/// eps (x) x, coordinatewise.
Vector coordinatewise_product(const SignVector& eps, const Vector& x);

/// The closed orthant { x : eps(j) x(j) >= 0 for all j }.
struct Octant {
    SignVector sign;

    bool contains(const Vector& x) const;
};

/// Signed value s * exp(m) kept in log scale.
class LogValue {
public:
    LogValue() = default;
    LogValue(double log_magnitude, int sign);

    static LogValue from_double(double v);
    static LogValue zero() { return {}; }

    double log_magnitude() const { return log_magnitude_; }
    int sign() const { return sign_; }
    double to_double() const;

    LogValue operator*(const LogValue& other) const;
    LogValue operator+(const LogValue& other) const;
    LogValue pow(double exponent) const;

private:
    double log_magnitude_ = 0.0;
    int sign_ = 0;
};

/// log((1/n) sum exp(v_i)), shifted by the maximum. Throws DomainError on
/// empty input.
double log_mean_exp(std::span<const double> values);

/// log(sum exp(v_i)), shifted by the maximum.
double log_sum_exp(std::span<const double> values);

/// Numerically stable log(cosh(x)).
double log_cosh(double x);

/// Deterministic, roughly uniform unit directions on the sphere S^{d-1}.
/// d=1 alternates +1/-1, d=2 uses equally spaced angles, d>=3 maps a Halton
/// sequence through the inverse normal cdf.
std::vector<Vector> sphere_directions(int d, int count);

/// Same construction restricted to the closed positive orthant.
std::vector<Vector> positive_orthant_directions(int d, int count);

}  // namespace bphi
