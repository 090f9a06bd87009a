#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bphi/kernels.hpp"

namespace bphi::kernels {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t chunk_count(std::size_t n) { return (n + kChunkRows - 1) / kChunkRows; }

// Running (max, sum exp(v - max), sum exp(2(v - max))).
struct LsePartial {
    double max = kNegInf;
    double sum = 0.0;
    double sum_sq = 0.0;

    void merge(const LsePartial& o)
    {
        if (o.max == kNegInf) return;
        if (max == kNegInf) {
            *this = o;
            return;
        }
        if (o.max > max) {
            const double f = std::exp(max - o.max);
            sum = sum * f + o.sum;
            sum_sq = sum_sq * f * f + o.sum_sq;
            max = o.max;
        } else {
            const double f = std::exp(o.max - max);
            sum += o.sum * f;
            sum_sq += o.sum_sq * f * f;
        }
    }
};

LsePartial lse_of(const double* v, std::size_t count)
{
    LsePartial p;
    for (std::size_t i = 0; i < count; ++i) p.max = std::max(p.max, v[i]);
    if (p.max == kNegInf || std::isinf(p.max)) return p;
    for (std::size_t i = 0; i < count; ++i) {
        const double w = std::exp(v[i] - p.max);
        p.sum += w;
        p.sum_sq += w * w;
    }
    return p;
}

}  // namespace

int max_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n)
{
#ifdef _OPENMP
    omp_set_num_threads(std::max(1, n));
#else
    (void)n;
#endif
}

std::vector<ExpMoments> signed_exp_moments(SampleView s, std::span<const double> lambda)
{
    check_same_size(static_cast<Eigen::Index>(lambda.size()), s.d, "signed_exp_moments");
    if (s.n == 0) throw DomainError("signed_exp_moments: empty sample");
    const std::size_t ne = std::size_t{1} << s.d;
    const std::size_t chunks = chunk_count(s.n);
    std::vector<LsePartial> partials(chunks * ne);

#pragma omp parallel
    {
        std::vector<double> proj(kChunkRows * ne);
#pragma omp for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
            const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
            const std::size_t rows = std::min(kChunkRows, s.n - begin);
            for (std::size_t i = 0; i < rows; ++i) {
                const double* r = s.row(begin + i);
                for (std::size_t e = 0; e < ne; ++e) {
                    double v = 0.0;
                    for (int j = 0; j < s.d; ++j) {
                        const double t = lambda[static_cast<std::size_t>(j)] * r[j];
                        v += ((e >> j) & 1U) ? -t : t;
                    }
                    proj[e * kChunkRows + i] = v;
                }
            }
            for (std::size_t e = 0; e < ne; ++e) {
                partials[static_cast<std::size_t>(c) * ne + e] = lse_of(proj.data() + e * kChunkRows, rows);
            }
        }
    }

    const double log_n = std::log(static_cast<double>(s.n));
    std::vector<ExpMoments> out(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        LsePartial total;
        for (std::size_t c = 0; c < chunks; ++c) total.merge(partials[c * ne + e]);
        out[e].log_mean = total.max + std::log(total.sum) - log_n;
        out[e].log_mean_sq = 2.0 * total.max + std::log(total.sum_sq) - log_n;
        out[e].max_share = 1.0 / total.sum;
    }
    return out;
}

std::vector<std::uint64_t> octant_exceedance_counts(SampleView s, std::span<const double> x)
{
    check_same_size(static_cast<Eigen::Index>(x.size()), s.d, "octant_exceedance_counts");
    const std::size_t ne = std::size_t{1} << s.d;
    const std::size_t chunks = chunk_count(s.n);
    std::vector<std::uint64_t> partial(chunks * ne, 0);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
        const std::size_t end = std::min(s.n, begin + kChunkRows);
        std::uint64_t* counts = partial.data() + static_cast<std::size_t>(c) * ne;
        for (std::size_t i = begin; i < end; ++i) {
            const double* r = s.row(i);
            std::uint32_t idx = 0;
            bool hit = true;
            for (int j = 0; j < s.d && hit; ++j) {
                const double xj = x[static_cast<std::size_t>(j)];
                if (r[j] > xj) continue;
                if (-r[j] > xj) {
                    idx |= (1U << j);
                    continue;
                }
                hit = false;
            }
            if (hit) ++counts[idx];
        }
    }

    std::vector<std::uint64_t> out(ne, 0);
    for (std::size_t c = 0; c < chunks; ++c) {
        for (std::size_t e = 0; e < ne; ++e) out[e] += partial[c * ne + e];
    }
    return out;
}

std::uint64_t min_abs_exceedance_count(SampleView s, double y)
{
    std::uint64_t count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.n); ++i) {
        const double* r = s.row(static_cast<std::size_t>(i));
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
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s.n); ++i) {
        const double* row = s.row(static_cast<std::size_t>(i));
        double acc = 0.0;
        for (int j = 0; j < s.d; ++j) acc += r[static_cast<std::size_t>(j)] * std::log(std::abs(row[j]));
        w[static_cast<std::size_t>(i)] = acc;
    }
    return kernels::log_mean_exp(w);
}

double log_mean_exp(std::span<const double> values)
{
    if (values.empty()) throw DomainError("log_mean_exp of an empty array");
    const std::size_t n = values.size();
    const std::size_t chunks = chunk_count(n);
    std::vector<LsePartial> partials(chunks);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
        partials[static_cast<std::size_t>(c)] = lse_of(values.data() + begin, std::min(kChunkRows, n - begin));
    }

    LsePartial total;
    for (const auto& p : partials) {
        if (std::isinf(p.max) && p.max > 0) return p.max;
        total.merge(p);
    }
    if (total.max == kNegInf) return kNegInf;
    return total.max + std::log(total.sum) - std::log(static_cast<double>(n));
}

Vector column_means(SampleView s)
{
    if (s.n == 0) throw DomainError("column_means: empty sample");
    const std::size_t chunks = chunk_count(s.n);
    std::vector<Vector> partial(chunks, Vector::Zero(s.d));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
        const std::size_t end = std::min(s.n, begin + kChunkRows);
        Vector& acc = partial[static_cast<std::size_t>(c)];
        for (std::size_t i = begin; i < end; ++i) {
            for (int j = 0; j < s.d; ++j) acc[j] += s.row(i)[j];
        }
    }

    Vector mean = Vector::Zero(s.d);
    for (const auto& p : partial) mean += p;
    return mean / static_cast<double>(s.n);
}

Matrix covariance(SampleView s)
{
    if (s.n < 2) throw DomainError("covariance needs at least two rows");
    const Vector mean = kernels::column_means(s);
    const std::size_t chunks = chunk_count(s.n);
    std::vector<Matrix> partial(chunks, Matrix::Zero(s.d, s.d));

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
        const std::size_t end = std::min(s.n, begin + kChunkRows);
        Matrix& acc = partial[static_cast<std::size_t>(c)];
        for (std::size_t i = begin; i < end; ++i) {
            for (int a = 0; a < s.d; ++a) {
                const double da = s.row(i)[a] - mean[a];
                for (int b = 0; b < s.d; ++b) acc(a, b) += da * (s.row(i)[b] - mean[b]);
            }
        }
    }

    Matrix cov = Matrix::Zero(s.d, s.d);
    for (const auto& p : partial) cov += p;
    return cov / static_cast<double>(s.n - 1);
}

GridBest grid_argmax(const GridObjective& objective, const Vector& lo, const Vector& hi, int points)
{
    check_same_size(lo.size(), hi.size(), "grid_argmax");
    if (points < 1) throw ParameterError("grid_argmax: points must be positive");
    const auto d = static_cast<int>(lo.size());
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<std::size_t>(points);

    const std::size_t chunks = chunk_count(total);
    std::vector<GridBest> partial(chunks);

#pragma omp parallel
    {
        Vector x(d);
#pragma omp for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
            GridBest& best = partial[static_cast<std::size_t>(c)];
            best.value = kNegInf;
            best.point = lo;
            const std::size_t begin = static_cast<std::size_t>(c) * kChunkRows;
            const std::size_t end = std::min(total, begin + kChunkRows);
            best.flat_index = begin;
            for (std::size_t flat = begin; flat < end; ++flat) {
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
        }
    }

    GridBest best = partial.front();
    for (std::size_t c = 1; c < chunks; ++c) {
        if (partial[c].value > best.value) best = partial[c];
    }
    return best;
}

}  // namespace bphi::kernels
