#include <algorithm>
#include <cmath>
#include <limits>

#include "bphi/kernels.hpp"

namespace bphi::kernels::serial {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double signed_projection(const double* row, std::span<const double> lambda, std::uint32_t eps_index)
{
    double v = 0.0;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        const double t = lambda[j] * row[j];
        v += ((eps_index >> j) & 1U) ? -t : t;
    }
    return v;
}

}  // namespace

std::vector<ExpMoments> signed_exp_moments(SampleView s, std::span<const double> lambda)
{
    check_same_size(static_cast<Eigen::Index>(lambda.size()), s.d, "signed_exp_moments");
    if (s.n == 0) throw DomainError("signed_exp_moments: empty sample");
    const std::uint32_t count = 1U << s.d;
    std::vector<ExpMoments> out(count);
    const double log_n = std::log(static_cast<double>(s.n));
    for (std::uint32_t e = 0; e < count; ++e) {
        double m = kNegInf;
        for (std::size_t i = 0; i < s.n; ++i) m = std::max(m, signed_projection(s.row(i), lambda, e));
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t i = 0; i < s.n; ++i) {
            const double w = std::exp(signed_projection(s.row(i), lambda, e) - m);
            sum += w;
            sum_sq += w * w;
        }
        out[e].log_mean = m + std::log(sum) - log_n;
        out[e].log_mean_sq = 2.0 * m + std::log(sum_sq) - log_n;
        out[e].max_share = 1.0 / sum;
    }
    return out;
}

std::vector<std::uint64_t> octant_exceedance_counts(SampleView s, std::span<const double> x)
{
    check_same_size(static_cast<Eigen::Index>(x.size()), s.d, "octant_exceedance_counts");
    std::vector<std::uint64_t> counts(std::size_t{1} << s.d, 0);
    for (std::size_t i = 0; i < s.n; ++i) {
        const double* r = s.row(i);
        std::uint32_t idx = 0;
        bool hit = true;
        for (int j = 0; j < s.d && hit; ++j) {
            if (r[j] > x[static_cast<std::size_t>(j)]) {
                continue;
            }
            if (-r[j] > x[static_cast<std::size_t>(j)]) {
                idx |= (1U << j);
                continue;
            }
            hit = false;
        }
        if (hit) ++counts[idx];
    }
    return counts;
}

std::uint64_t min_abs_exceedance_count(SampleView s, double y)
{
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < s.n; ++i) {
        const double* r = s.row(i);
        bool all = true;
        for (int j = 0; j < s.d; ++j) {
            if (!(std::abs(r[j]) > y)) {
                all = false;
                break;
            }
        }
        if (all) ++count;
    }
    return count;
}

double log_mean_abs_power_product(SampleView s, std::span<const double> r)
{
    check_same_size(static_cast<Eigen::Index>(r.size()), s.d, "log_mean_abs_power_product");
    std::vector<double> w(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        const double* row = s.row(i);
        double acc = 0.0;
        for (int j = 0; j < s.d; ++j) acc += r[static_cast<std::size_t>(j)] * std::log(std::abs(row[j]));
        w[i] = acc;
    }
    return serial::log_mean_exp(w);
}

double log_mean_exp(std::span<const double> values)
{
    if (values.empty()) throw DomainError("log_mean_exp of an empty array");
    const double m = *std::max_element(values.begin(), values.end());
    if (m == kNegInf) return kNegInf;
    if (std::isinf(m)) return m;
    double sum = 0.0;
    for (double v : values) sum += std::exp(v - m);
    return m + std::log(sum) - std::log(static_cast<double>(values.size()));
}

Vector column_means(SampleView s)
{
    if (s.n == 0) throw DomainError("column_means: empty sample");
    Vector mean = Vector::Zero(s.d);
    for (std::size_t i = 0; i < s.n; ++i) {
        for (int j = 0; j < s.d; ++j) mean[j] += s.row(i)[j];
    }
    return mean / static_cast<double>(s.n);
}

Matrix covariance(SampleView s)
{
    if (s.n < 2) throw DomainError("covariance needs at least two rows");
    const Vector mean = serial::column_means(s);
    Matrix c = Matrix::Zero(s.d, s.d);
    for (std::size_t i = 0; i < s.n; ++i) {
        for (int a = 0; a < s.d; ++a) {
            const double da = s.row(i)[a] - mean[a];
            for (int b = 0; b < s.d; ++b) c(a, b) += da * (s.row(i)[b] - mean[b]);
        }
    }
    return c / static_cast<double>(s.n - 1);
}

GridBest grid_argmax(const GridObjective& objective, const Vector& lo, const Vector& hi, int points)
{
    check_same_size(lo.size(), hi.size(), "grid_argmax");
    if (points < 1) throw ParameterError("grid_argmax: points must be positive");
    const auto d = static_cast<int>(lo.size());
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(points);

    GridBest best;
    best.value = kNegInf;
    best.point = lo;
    Vector x(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int j = 0; j < d; ++j) {
            const auto k = rem % static_cast<std::size_t>(points);
            rem /= static_cast<std::size_t>(points);
            x[j] = points == 1 ? 0.5 * (lo[j] + hi[j])
                               : lo[j] + (hi[j] - lo[j]) * static_cast<double>(k) / (points - 1);
        }
        const double v = objective(x);
        if (v > best.value) {
            best.value = v;
            best.point = x;
            best.flat_index = flat;
        }
    }
    return best;
}

}  // namespace bphi::kernels::serial
