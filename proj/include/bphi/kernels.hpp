#pragma once

// Data-parallel inner loops over sample blocks and search grids.
//
// Every kernel exists twice: the OpenMP version in bphi::kernels and a plain
// serial reference in bphi::kernels::serial. The OpenMP versions reduce over
// fixed-size row chunks and combine the chunk partials in chunk order, so
// their output does not depend on the number of threads.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bphi/core.hpp"

namespace bphi::kernels {

/// Rows per reduction chunk.
inline constexpr std::size_t kChunkRows = 4096;

/// Row-major n x d view of sample data.
struct SampleView {
    const double* data = nullptr;
    std::size_t n = 0;
    int d = 0;

    const double* row(std::size_t i) const { return data + i * static_cast<std::size_t>(d); }
};

/// Summary of exp-sums for one sign vector.
struct ExpMoments {
    double log_mean = 0.0;     ///< log (1/n) sum exp(v_i)
    double log_mean_sq = 0.0;  ///< log (1/n) sum exp(2 v_i)
    double max_share = 0.0;    ///< max_i exp(v_i) / sum_k exp(v_k)
};

/// For every sign vector eps (canonical order) the exp-moments of
/// v_i = (eps (x) lambda, xi_i).
std::vector<ExpMoments> signed_exp_moments(SampleView s, std::span<const double> lambda);

/// Sample count in each octant's joint exceedance event
/// { eps(j) xi(j) > x(j) for all j }, indexed by sign-vector index. x >= 0.
std::vector<std::uint64_t> octant_exceedance_counts(SampleView s, std::span<const double> x);

/// Count of rows with min_j |xi(j)| > y.
std::uint64_t min_abs_exceedance_count(SampleView s, double y);

/// log (1/n) sum_i prod_j |xi_i(j)|^r(j); -inf when every product is zero.
double log_mean_abs_power_product(SampleView s, std::span<const double> r);

/// Chunked log-mean-exp of an arbitrary array.
double log_mean_exp(std::span<const double> values);

/// Column means.
Vector column_means(SampleView s);

/// Unbiased sample covariance (n >= 2).
Matrix covariance(SampleView s);

/// Best point of a tensor grid with `points` nodes per axis on [lo, hi].
struct GridBest {
    double value = 0.0;
    Vector point;
    std::size_t flat_index = 0;
};

using GridObjective = std::function<double(const Vector&)>;

/// Maximizes the objective over the grid; ties go to the lowest flat index.
GridBest grid_argmax(const GridObjective& objective, const Vector& lo, const Vector& hi, int points);

namespace serial {

std::vector<ExpMoments> signed_exp_moments(SampleView s, std::span<const double> lambda);
std::vector<std::uint64_t> octant_exceedance_counts(SampleView s, std::span<const double> x);
std::uint64_t min_abs_exceedance_count(SampleView s, double y);
double log_mean_abs_power_product(SampleView s, std::span<const double> r);
double log_mean_exp(std::span<const double> values);
Vector column_means(SampleView s);
Matrix covariance(SampleView s);
GridBest grid_argmax(const GridObjective& objective, const Vector& lo, const Vector& hi, int points);

}  // namespace serial

/// Thread count the OpenMP kernels will use (1 when built without OpenMP).
int max_threads();

/// Sets the OpenMP thread count; no-op without OpenMP.
void set_threads(int n);

}  // namespace bphi::kernels
