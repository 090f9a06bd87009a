#include "bphi/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

namespace bphi {

void check_dimension(int d)
{
    if (d < 1 || d > kMaxDimension) {
        throw CapacityError("dimension " + std::to_string(d) + " outside [1, " +
                            std::to_string(kMaxDimension) + "]");
    }
}

void check_same_size(Eigen::Index a, Eigen::Index b, const char* what)
{
    if (a != b) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a << " vs " << b << ")";
        throw ShapeError(os.str());
    }
}

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries))
{
    check_dimension(dimension());
    for (int e : entries_) {
        if (e != 1 && e != -1) {
            throw ParameterError("sign vector entries must be +1 or -1");
        }
    }
}

SignVector SignVector::ones(int d)
{
    check_dimension(d);
    return SignVector(std::vector<int>(static_cast<std::size_t>(d), 1));
}

SignVector SignVector::from_index(std::uint32_t index, int d)
{
    check_dimension(d);
    std::vector<int> e(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        e[static_cast<std::size_t>(j)] = ((index >> j) & 1U) ? -1 : 1;
    }
    return SignVector(std::move(e));
}

std::uint32_t SignVector::index() const
{
    std::uint32_t idx = 0;
    for (int j = 0; j < dimension(); ++j) {
        if (entries_[static_cast<std::size_t>(j)] < 0) {
            idx |= (1U << j);
        }
    }
    return idx;
}

int SignVector::power_sign(std::span<const int> orders) const
{
    check_same_size(static_cast<Eigen::Index>(orders.size()), dimension(), "power_sign");
    int s = 1;
    for (std::size_t j = 0; j < orders.size(); ++j) {
        if (entries_[j] < 0 && (orders[j] % 2) != 0) {
            s = -s;
        }
    }
    return s;
}

std::string SignVector::to_string() const
{
    std::string out = "(";
    for (std::size_t j = 0; j < entries_.size(); ++j) {
        if (j) out += ",";
        out += entries_[j] > 0 ? "+1" : "-1";
    }
    return out + ")";
}

std::vector<SignVector> enumerate_sign_vectors(int d)
{
    check_dimension(d);
    const std::uint32_t count = 1U << d;
    std::vector<SignVector> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        out.push_back(SignVector::from_index(i, d));
    }
    return out;
}

Vector coordinatewise_product(const SignVector& eps, const Vector& x)
{
    check_same_size(x.size(), eps.dimension(), "coordinatewise_product");
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        out[j] = eps[static_cast<int>(j)] > 0 ? x[j] : -x[j];
    }
    return out;
}

bool Octant::contains(const Vector& x) const
{
    check_same_size(x.size(), sign.dimension(), "Octant::contains");
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (sign[static_cast<int>(j)] * x[j] < 0.0) {
            return false;
        }
    }
    return true;
}

LogValue::LogValue(double log_magnitude, int sign)
    : log_magnitude_(sign == 0 ? 0.0 : log_magnitude), sign_(sign > 0 ? 1 : (sign < 0 ? -1 : 0))
{
}

LogValue LogValue::from_double(double v)
{
    if (v == 0.0) return {};
    return {std::log(std::abs(v)), v > 0 ? 1 : -1};
}

double LogValue::to_double() const
{
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_magnitude_);
}

LogValue LogValue::operator*(const LogValue& other) const
{
    if (sign_ == 0 || other.sign_ == 0) return {};
    return {log_magnitude_ + other.log_magnitude_, sign_ * other.sign_};
}

LogValue LogValue::operator+(const LogValue& other) const
{
    if (sign_ == 0) return other;
    if (other.sign_ == 0) return *this;
    const LogValue& big = log_magnitude_ >= other.log_magnitude_ ? *this : other;
    const LogValue& small = log_magnitude_ >= other.log_magnitude_ ? other : *this;
    const double ratio = std::exp(small.log_magnitude_ - big.log_magnitude_);
    if (big.sign_ == small.sign_) {
        return {big.log_magnitude_ + std::log1p(ratio), big.sign_};
    }
    if (ratio == 1.0) return {};
    return {big.log_magnitude_ + std::log1p(-ratio), big.sign_};
}

LogValue LogValue::pow(double exponent) const
{
    if (sign_ == 0) return exponent == 0.0 ? LogValue(0.0, 1) : LogValue{};
    if (sign_ < 0) throw DomainError("LogValue::pow of a negative value");
    return {log_magnitude_ * exponent, 1};
}

double log_sum_exp(std::span<const double> values)
{
    if (values.empty()) throw DomainError("log_sum_exp of an empty array");
    const double m = *std::max_element(values.begin(), values.end());
    if (std::isinf(m)) return m;
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s);
}

double log_mean_exp(std::span<const double> values)
{
    if (values.empty()) throw DomainError("log_mean_exp of an empty array");
    return log_sum_exp(values) - std::log(static_cast<double>(values.size()));
}

double log_cosh(double x)
{
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

namespace {

double radical_inverse(std::uint64_t i, std::uint64_t base)
{
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

constexpr std::uint64_t kPrimes[kMaxDimension] = {2,  3,  5,  7,  11, 13, 17, 19,
                                                  23, 29, 31, 37, 41, 43, 47, 53};

Vector halton_gaussian(int d, std::uint64_t i)
{
    Vector z(d);
    for (int j = 0; j < d; ++j) {
        // shift away from 0 and 1
        const double u = (radical_inverse(i + 1, kPrimes[j]) * 0.998) + 0.001;
        z[j] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
    }
    return z;
}

}  // namespace

std::vector<Vector> sphere_directions(int d, int count)
{
    check_dimension(d);
    if (count < 1) throw ParameterError("sphere_directions: count must be positive");
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (d == 1) {
        for (int i = 0; i < count; ++i) out.push_back(Vector::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
        return out;
    }
    if (d == 2) {
        for (int i = 0; i < count; ++i) {
            const double a = 2.0 * std::numbers::pi * (i + 0.5) / count;
            Vector u(2);
            u << std::cos(a), std::sin(a);
            out.push_back(u);
        }
        return out;
    }
    for (std::uint64_t i = 0; out.size() < static_cast<std::size_t>(count); ++i) {
        Vector z = halton_gaussian(d, i);
        const double n = z.norm();
        if (n > 1e-12) out.push_back(z / n);
    }
    return out;
}

std::vector<Vector> positive_orthant_directions(int d, int count)
{
    check_dimension(d);
    if (count < 1) throw ParameterError("positive_orthant_directions: count must be positive");
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (d == 1) {
        out.push_back(Vector::Ones(1));
        return out;
    }
    if (d == 2) {
        if (count == 1) {
            out.push_back(Vector::Constant(2, std::numbers::sqrt2 / 2));
            return out;
        }
        for (int i = 0; i < count; ++i) {
            const double a = 0.5 * std::numbers::pi * i / (count - 1);
            Vector u(2);
            u << std::cos(a), std::sin(a);
            out.push_back(u);
        }
        return out;
    }
    // axes and the diagonal first, then a folded Halton sequence
    for (int j = 0; j < d && out.size() < static_cast<std::size_t>(count); ++j) {
        out.push_back(Vector::Unit(d, j));
    }
    if (out.size() < static_cast<std::size_t>(count)) {
        out.push_back(Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
    }
    for (std::uint64_t i = 0; out.size() < static_cast<std::size_t>(count); ++i) {
        Vector z = halton_gaussian(d, i).cwiseAbs();
        const double n = z.norm();
        if (n > 1e-12) out.push_back(z / n);
    }
    return out;
}

}  // namespace bphi
