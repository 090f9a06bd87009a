#include "bphi/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace bphi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_vector(const Vector& v)
{
    std::ostringstream os;
    os << std::setprecision(17) << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
}

std::string format_matrix(const Matrix& m)
{
    std::ostringstream os;
    os << std::setprecision(17) << '[';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << (i ? "," : "") << '[';
        for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

// log(sinh(x)/x), stable for small and large |x|
double log_sinhc(double x)
{
    const double a = std::abs(x);
    if (a < 1e-4) return a * a / 6.0;
    return a + std::log1p(-std::exp(-2.0 * a)) - std::log(2.0) - std::log(a);
}

}  // namespace

double weibull_log_mgf(double p, double a)
{
    if (!(p > 0.0)) throw ParameterError("weibull tail exponent must be positive");
    a = std::abs(a);
    if (a == 0.0) return 0.0;
    if (p < 1.0) return kInf;
    if (p == 1.0) return a < 1.0 ? -std::log1p(-a * a) : kInf;

    const double log_p = std::log(p);
    auto g = [&](double t) {
        if (t <= 0.0) return -kInf;
        return log_cosh(a * t) + log_p + (p - 1.0) * std::log(t) - std::pow(t, p);
    };
    // Locate the mode on a coarse grid that extends until the density is negligible.
    double hi = 1.0;
    double g_max = -kInf;
    double t_mode = 0.0;
    for (;;) {
        const int pts = 400;
        for (int i = 1; i <= pts; ++i) {
            const double t = hi * i / pts;
            const double v = g(t);
            if (v > g_max) {
                g_max = v;
                t_mode = t;
            }
        }
        if (g(hi) < g_max - 60.0 && t_mode < 0.5 * hi) break;
        hi *= 2.0;
        if (hi > 1e12) return kInf;
    }
    auto f = [&](double t) { return std::exp(g(t) - g_max); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double left = GK::integrate(f, 0.0, t_mode, 15, 1e-13);
    const double right = GK::integrate(f, t_mode, hi, 15, 1e-13);
    return g_max + std::log(left + right);
}

VectorDistribution VectorDistribution::gaussian(const Matrix& q, bool require_full_rank)
{
    if (q.rows() != q.cols()) throw ShapeError("gaussian covariance must be square");
    const int d = static_cast<int>(q.rows());
    check_dimension(d);
    if (!q.allFinite()) throw ParameterError("gaussian covariance must be finite");
    const double asym = (q - q.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if (asym > 1e-12 * scale) throw ParameterError("gaussian covariance must be symmetric");
    const Matrix sym = 0.5 * (q + q.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    const Vector ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10 * scale) throw ParameterError("gaussian covariance must be positive semidefinite");
    if (require_full_rank && ev.minCoeff() <= 1e-12 * scale) {
        throw ParameterError("gaussian covariance is singular but full rank was required");
    }
    VectorDistribution out;
    out.kind_ = Kind::gaussian;
    out.d_ = d;
    out.q_ = sym;
    out.factor_ = es.eigenvectors() * ev.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    out.tag_ = "gaussian{Q=" + format_matrix(sym) + "}";
    return out;
}

VectorDistribution VectorDistribution::symmetric_weibull(double p, const Vector& scale)
{
    const int d = static_cast<int>(scale.size());
    check_dimension(d);
    if (!(p > 0.0) || !std::isfinite(p)) throw ParameterError("weibull tail exponent must be positive");
    if (!(scale.array() > 0.0).all() || !scale.allFinite()) throw ParameterError("weibull scales must be positive");
    VectorDistribution out;
    out.kind_ = Kind::symmetric_weibull;
    out.d_ = d;
    out.p_ = p;
    out.scale_ = scale;
    out.kramer_ = p >= 1.0;
    std::ostringstream os;
    os << std::setprecision(17) << "weibull{p=" << p << ",scale=" << format_vector(scale) << ",d=" << d << '}';
    out.tag_ = os.str();
    return out;
}

VectorDistribution VectorDistribution::symmetric_weibull(double p, double scale, int d)
{
    check_dimension(d);
    return symmetric_weibull(p, Vector::Constant(d, scale));
}

VectorDistribution VectorDistribution::rademacher(double scale, int d)
{
    check_dimension(d);
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ParameterError("rademacher scale must be positive");
    VectorDistribution out;
    out.kind_ = Kind::rademacher;
    out.d_ = d;
    out.scale_ = Vector::Constant(d, scale);
    std::ostringstream os;
    os << std::setprecision(17) << "rademacher{scale=" << scale << ",d=" << d << '}';
    out.tag_ = os.str();
    return out;
}

VectorDistribution VectorDistribution::uniform_box(const Vector& half_widths)
{
    const int d = static_cast<int>(half_widths.size());
    check_dimension(d);
    if (!(half_widths.array() > 0.0).all() || !half_widths.allFinite()) {
        throw ParameterError("uniform half-widths must be positive");
    }
    VectorDistribution out;
    out.kind_ = Kind::uniform_box;
    out.d_ = d;
    out.scale_ = half_widths;
    out.tag_ = "uniform{hw=" + format_vector(half_widths) + "}";
    return out;
}

VectorDistribution VectorDistribution::custom(int d, Sampler sampler, std::string tag, bool kramer)
{
    check_dimension(d);
    if (!sampler) throw ParameterError("custom distribution needs a sampler");
    VectorDistribution out;
    out.kind_ = Kind::custom;
    out.d_ = d;
    out.sampler_ = std::move(sampler);
    out.tag_ = std::move(tag);
    out.kramer_ = kramer;
    return out;
}

void VectorDistribution::draw(Engine& engine, double* row) const
{
    switch (kind_) {
    case Kind::gaussian: {
        std::normal_distribution<double> normal;
        Vector z(d_);
        for (int j = 0; j < d_; ++j) z[j] = normal(engine);
        const Vector x = factor_ * z;
        for (int j = 0; j < d_; ++j) row[j] = x[j];
        return;
    }
    case Kind::symmetric_weibull: {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int j = 0; j < d_; ++j) {
            double u = unif(engine);
            while (u <= 0.0) u = unif(engine);
            const double m = std::pow(-std::log(u), 1.0 / p_);
            const bool negative = (engine() >> 63) != 0;
            row[j] = scale_[j] * (negative ? -m : m);
        }
        return;
    }
    case Kind::rademacher:
        for (int j = 0; j < d_; ++j) row[j] = ((engine() >> 63) != 0) ? -scale_[j] : scale_[j];
        return;
    case Kind::uniform_box: {
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int j = 0; j < d_; ++j) row[j] = scale_[j] * unif(engine);
        return;
    }
    case Kind::custom: sampler_(engine, row); return;
    }
}

double VectorDistribution::log_mgf(const Vector& lambda) const
{
    check_same_size(lambda.size(), d_, "log_mgf");
    switch (kind_) {
    case Kind::gaussian: return 0.5 * lambda.dot(q_ * lambda);
    case Kind::symmetric_weibull: {
        double s = 0.0;
        for (int j = 0; j < d_; ++j) s += weibull_log_mgf(p_, scale_[j] * lambda[j]);
        return s;
    }
    case Kind::rademacher: {
        double s = 0.0;
        for (int j = 0; j < d_; ++j) s += log_cosh(scale_[j] * lambda[j]);
        return s;
    }
    case Kind::uniform_box: {
        double s = 0.0;
        for (int j = 0; j < d_; ++j) s += log_sinhc(scale_[j] * lambda[j]);
        return s;
    }
    case Kind::custom: break;
    }
    throw PreconditionError("log_mgf is not available for custom distributions");
}

double VectorDistribution::natural_value(const Vector& lambda) const
{
    if (kind_ != Kind::gaussian) return log_mgf(lambda);  // independent symmetric coordinates
    double best = -kInf;
    for (const auto& eps : enumerate_sign_vectors(d_)) {
        best = std::max(best, log_mgf(coordinatewise_product(eps, lambda)));
    }
    return best;
}

SampleSet::SampleSet(std::vector<double> data, std::size_t n, int d, std::uint64_t seed, std::string tag,
                     bool kramer)
    : data_(std::move(data)), n_(n), d_(d), seed_(seed), tag_(std::move(tag)), kramer_(kramer)
{
    check_dimension(d);
    if (n == 0) throw InsufficientDataError("a sample set needs at least one row");
    if (data_.size() != n * static_cast<std::size_t>(d)) throw ShapeError("sample data size does not match n x d");
    for (double v : data_) {
        if (!std::isfinite(v)) throw DomainError("sample entries must be finite");
    }
}

Vector SampleSet::row(std::size_t i) const
{
    if (i >= n_) throw RangeError("sample row out of range");
    return Eigen::Map<const Vector>(data_.data() + i * static_cast<std::size_t>(d_), d_);
}

void SampleSet::write_csv(std::ostream& out) const
{
    std::string escaped;
    for (char c : tag_) {
        if (c == '"') escaped += '"';
        escaped += c;
    }
    out << "dim,seed,tag\n" << d_ << ',' << seed_ << ",\"" << escaped << "\"\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < n_; ++i) {
        for (int j = 0; j < d_; ++j) out << (j ? "," : "") << at(i, j);
        out << '\n';
    }
}

SampleSet SampleSet::read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "dim,seed,tag") throw DomainError("sample csv: missing header");
    if (!std::getline(in, line)) throw DomainError("sample csv: missing metadata line");
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw DomainError("sample csv: bad metadata line");
    const int d = std::stoi(line.substr(0, c1));
    const std::uint64_t seed = std::stoull(line.substr(c1 + 1, c2 - c1 - 1));
    std::string raw = line.substr(c2 + 1);
    std::string tag;
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        raw = raw.substr(1, raw.size() - 2);
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (raw[i] == '"' && i + 1 < raw.size() && raw[i + 1] == '"') ++i;
            tag += raw[i];
        }
    } else {
        tag = raw;
    }
    check_dimension(d);
    std::vector<double> data;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        int count = 0;
        while (std::getline(row, cell, ',')) {
            data.push_back(std::stod(cell));
            ++count;
        }
        if (count != d) throw ShapeError("sample csv: row width does not match dim");
        ++n;
    }
    return SampleSet(std::move(data), n, d, seed, std::move(tag));
}

SampleSet sample(const VectorDistribution& dist, std::size_t n, std::uint64_t seed)
{
    if (n == 0) throw InsufficientDataError("sample size must be at least 1");
    const int d = dist.dimension();
    std::vector<double> data(n * static_cast<std::size_t>(d));
    const std::size_t chunks = (n + kernels::kChunkRows - 1) / kernels::kChunkRows;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        Engine engine = make_engine(seed, static_cast<std::uint64_t>(c));
        const std::size_t begin = static_cast<std::size_t>(c) * kernels::kChunkRows;
        const std::size_t end = std::min(n, begin + kernels::kChunkRows);
        for (std::size_t i = begin; i < end; ++i) dist.draw(engine, data.data() + i * static_cast<std::size_t>(d));
    }
    return SampleSet(std::move(data), n, d, seed, dist.tag(), dist.kramer());
}

SampleSet sample_normalized_sums(const VectorDistribution& dist, int n_terms, std::size_t reps, std::uint64_t seed)
{
    if (n_terms < 1) throw ParameterError("normalized sums need at least one term");
    if (reps == 0) throw InsufficientDataError("normalized sums need at least one replicate");
    const int d = dist.dimension();
    std::vector<double> data(reps * static_cast<std::size_t>(d), 0.0);
    const std::size_t chunks = (reps + kernels::kChunkRows - 1) / kernels::kChunkRows;
    const double norm = 1.0 / std::sqrt(static_cast<double>(n_terms));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
        Engine engine = make_engine(seed, (static_cast<std::uint64_t>(n_terms) << 32) | static_cast<std::uint64_t>(c));
        std::vector<double> term(static_cast<std::size_t>(d));
        const std::size_t begin = static_cast<std::size_t>(c) * kernels::kChunkRows;
        const std::size_t end = std::min(reps, begin + kernels::kChunkRows);
        for (std::size_t i = begin; i < end; ++i) {
            double* out = data.data() + i * static_cast<std::size_t>(d);
            for (int k = 0; k < n_terms; ++k) {
                dist.draw(engine, term.data());
                for (int j = 0; j < d; ++j) out[j] += term[static_cast<std::size_t>(j)];
            }
            for (int j = 0; j < d; ++j) out[j] *= norm;
        }
    }
    std::ostringstream tag;
    tag << "sum{n=" << n_terms << "," << dist.tag() << '}';
    return SampleSet(std::move(data), reps, d, seed, tag.str(), dist.kramer());
}

struct EmpiricalNaturalFunction::State {
    std::vector<double> centered;
    std::size_t n = 0;
    int d = 1;
    double trust_share = 0.1;
    std::mutex mutex;
    std::map<std::vector<double>, NaturalValue> memo;
};

EmpiricalNaturalFunction::EmpiricalNaturalFunction(const SampleSet& samples, double trust_share)
    : state_(std::make_shared<State>())
{
    if (!(trust_share > 0.0 && trust_share <= 1.0)) throw ParameterError("trust share must lie in (0, 1]");
    state_->n = samples.size();
    state_->d = samples.dimension();
    state_->trust_share = trust_share;
    state_->centered = samples.data();
    const Vector mean = kernels::column_means(samples.view());
    const auto d = static_cast<std::size_t>(state_->d);
    for (std::size_t i = 0; i < state_->n; ++i) {
        for (std::size_t j = 0; j < d; ++j) state_->centered[i * d + j] -= mean[static_cast<Eigen::Index>(j)];
    }
}

int EmpiricalNaturalFunction::dimension() const { return state_->d; }
std::size_t EmpiricalNaturalFunction::sample_size() const { return state_->n; }
double EmpiricalNaturalFunction::trust_share() const { return state_->trust_share; }

NaturalValue EmpiricalNaturalFunction::evaluate(const Vector& lambda) const
{
    check_same_size(lambda.size(), state_->d, "natural function");
    if (!lambda.allFinite()) throw DomainError("natural function: lambda must be finite");
    if ((lambda.array() == 0.0).all()) return {};
    // the max over sign vectors makes the value depend on |lambda| only
    std::vector<double> key(static_cast<std::size_t>(state_->d));
    for (int j = 0; j < state_->d; ++j) key[static_cast<std::size_t>(j)] = std::abs(lambda[j]);
    {
        std::lock_guard lock(state_->mutex);
        const auto it = state_->memo.find(key);
        if (it != state_->memo.end()) return it->second;
    }
    const kernels::SampleView view{state_->centered.data(), state_->n, state_->d};
    const auto moments = kernels::signed_exp_moments(view, key);
    NaturalValue out;
    out.value = -kInf;
    std::size_t best = 0;
    for (std::size_t k = 0; k < moments.size(); ++k) {
        out.max_share = std::max(out.max_share, moments[k].max_share);
        if (moments[k].log_mean > out.value) {
            out.value = moments[k].log_mean;
            best = k;
        }
    }
    out.trusted = out.max_share <= state_->trust_share;
    const double rel_var = std::expm1(moments[best].log_mean_sq - 2.0 * moments[best].log_mean);
    out.std_error = std::sqrt(std::max(0.0, rel_var) / static_cast<double>(state_->n));
    std::lock_guard lock(state_->mutex);
    state_->memo.emplace(std::move(key), out);
    return out;
}

EmpiricalNaturalFunction natural_function(const SampleSet& samples)
{
    if (!samples.kramer()) {
        throw PreconditionError("natural function does not exist: the distribution has no exponential moments");
    }
    return EmpiricalNaturalFunction(samples);
}

double confidence_half_width(double p, std::size_t n)
{
    const double nn = static_cast<double>(n);
    if (p <= 0.0 || p >= 1.0) return 3.0 / nn;
    return std::max(2.0 * std::sqrt(p * (1.0 - p) / nn), 0.0);
}

TailEstimate tail_function(const SampleSet& samples, const Vector& x)
{
    check_same_size(x.size(), samples.dimension(), "tail_function");
    if (!(x.array() >= 0.0).all()) throw DomainError("tail_function: x must be nonnegative");
    const std::vector<double> xs(x.data(), x.data() + x.size());
    const auto counts = kernels::octant_exceedance_counts(samples.view(), xs);
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (counts[k] > counts[best]) best = k;
    }
    TailEstimate out;
    out.value = static_cast<double>(counts[best]) / static_cast<double>(samples.size());
    out.half_width = confidence_half_width(out.value, samples.size());
    out.octant = SignVector::from_index(static_cast<std::uint32_t>(best), samples.dimension());
    return out;
}

TailEstimate min_coordinate_tail(const SampleSet& samples, double y)
{
    if (!(y > 0.0)) throw DomainError("min_coordinate_tail: y must be positive");
    TailEstimate out;
    out.value = static_cast<double>(kernels::min_abs_exceedance_count(samples.view(), y)) /
                static_cast<double>(samples.size());
    out.half_width = confidence_half_width(out.value, samples.size());
    out.octant = SignVector::ones(samples.dimension());
    return out;
}

MomentEstimate vector_moment(const SampleSet& samples, const Vector& r)
{
    check_same_size(r.size(), samples.dimension(), "vector_moment");
    if (!(r.array() >= 1.0).all() || !r.allFinite()) throw DomainError("vector_moment: every r(j) must be >= 1");
    const double total = r.sum();
    const std::vector<double> rs(r.data(), r.data() + r.size());
    const double log_m = kernels::log_mean_abs_power_product(samples.view(), rs);
    MomentEstimate out;
    if (!std::isfinite(log_m)) {
        if (log_m == -kInf) return out;  // every product is zero
        out.diverged = true;
        out.value = kInf;
        out.log_value = kInf;
        return out;
    }
    std::vector<double> rs2(rs);
    for (double& v : rs2) v *= 2.0;
    const double log_m2 = kernels::log_mean_abs_power_product(samples.view(), rs2);
    out.log_value = log_m / total;
    out.value = std::exp(out.log_value);
    const double rel_var = std::expm1(log_m2 - 2.0 * log_m);
    const double rel_se = std::sqrt(std::max(0.0, rel_var) / static_cast<double>(samples.size()));
    out.half_width = 2.0 * out.value * rel_se / total;
    return out;
}

Matrix empirical_variance(const SampleSet& samples)
{
    if (samples.size() < 2) throw InsufficientDataError("empirical variance needs at least two rows");
    return kernels::covariance(samples.view());
}

}  // namespace bphi
