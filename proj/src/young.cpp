#include "bphi/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bphi/random.hpp"

namespace bphi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string matrix_spec(const Matrix& m)
{
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) os << ",";
        os << "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m(i, j);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

std::string number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double quadratic_form(const Matrix& b, const Vector& x)
{
    const auto d = x.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < d; ++j) row += b(i, j) * x[j];
        acc += x[i] * row;
    }
    return acc;
}

YMembership membership_of(const Matrix& h)
{
    if (!h.allFinite()) return YMembership::relaxed;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() > 0.0 ? YMembership::member : YMembership::relaxed;
}

Matrix estimate_hessian_at_origin(const YoungFunction::Evaluator& f, int d)
{
    const double h = 1e-4;
    Matrix out(d, d);
    const Vector zero = Vector::Zero(d);
    const double f0 = f(zero);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            Vector pp = zero, pm = zero, mp = zero, mm = zero;
            pp[i] += h; pp[j] += h;
            pm[i] += h; pm[j] -= h;
            mp[i] -= h; mp[j] += h;
            mm[i] -= h; mm[j] -= h;
            double v;
            if (i == j) {
                Vector p = zero, m = zero;
                p[i] = h;
                m[i] = -h;
                v = (f(p) - 2.0 * f0 + f(m)) / (h * h);
            } else {
                v = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
            }
            out(i, j) = v;
            out(j, i) = v;
        }
    }
    return out;
}

Vector central_gradient(const YoungFunction& phi, const Vector& x)
{
    Vector g(x.size());
    Vector p = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
        p[j] = x[j] + h;
        const double fp = phi(p);
        p[j] = x[j] - h;
        const double fm = phi(p);
        p[j] = x[j];
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace

// ---------------------------------------------------------------------------

SupportRegion SupportRegion::full_space(int d)
{
    check_dimension(d);
    SupportRegion s;
    s.kind_ = Kind::full_space;
    s.dimension_ = d;
    return s;
}

SupportRegion SupportRegion::ball(int d, double radius)
{
    check_dimension(d);
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ParameterError("ball radius must be positive");
    SupportRegion s;
    s.kind_ = Kind::euclidean_ball;
    s.dimension_ = d;
    s.radius_ = radius;
    return s;
}

SupportRegion SupportRegion::box(const Vector& half_widths)
{
    check_dimension(static_cast<int>(half_widths.size()));
    if (!(half_widths.array() > 0.0).all() || !half_widths.allFinite()) {
        throw ParameterError("box half-widths must be positive");
    }
    SupportRegion s;
    s.kind_ = Kind::box;
    s.dimension_ = static_cast<int>(half_widths.size());
    s.half_widths_ = half_widths;
    return s;
}

bool SupportRegion::contains(const Vector& x) const
{
    check_same_size(x.size(), dimension_, "SupportRegion::contains");
    switch (kind_) {
    case Kind::full_space: return x.allFinite();
    case Kind::euclidean_ball: return x.norm() < radius_;
    case Kind::box: return (x.cwiseAbs().array() < half_widths_.array()).all();
    }
    return false;
}

double SupportRegion::ray_limit(const Vector& direction) const
{
    check_same_size(direction.size(), dimension_, "SupportRegion::ray_limit");
    switch (kind_) {
    case Kind::full_space: return kInf;
    case Kind::euclidean_ball: {
        const double n = direction.norm();
        return n == 0.0 ? kInf : radius_ / n;
    }
    case Kind::box: {
        double t = kInf;
        for (Eigen::Index j = 0; j < direction.size(); ++j) {
            if (direction[j] != 0.0) t = std::min(t, half_widths_[j] / std::abs(direction[j]));
        }
        return t;
    }
    }
    return kInf;
}

double SupportRegion::inner_radius() const
{
    switch (kind_) {
    case Kind::full_space: return kInf;
    case Kind::euclidean_ball: return radius_;
    case Kind::box: return half_widths_.minCoeff();
    }
    return kInf;
}

std::string SupportRegion::describe() const
{
    switch (kind_) {
    case Kind::full_space: return "R^" + std::to_string(dimension_);
    case Kind::euclidean_ball: return "ball(" + number(radius_) + ")";
    case Kind::box: {
        std::string s = "box(";
        for (Eigen::Index j = 0; j < half_widths_.size(); ++j) {
            if (j) s += ",";
            s += number(half_widths_[j]);
        }
        return s + ")";
    }
    }
    return "?";
}

// ---------------------------------------------------------------------------

MatrixParameter::MatrixParameter(const Matrix& entries)
{
    if (entries.rows() != entries.cols()) throw ShapeError("matrix parameter must be square");
    check_dimension(static_cast<int>(entries.rows()));
    if (!entries.allFinite()) throw ParameterError("matrix parameter has non-finite entries");
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ParameterError("matrix parameter must be symmetric");
    }
    entries_ = 0.5 * (entries + entries.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    min_eigenvalue_ = es.eigenvalues().minCoeff();
    positive_definite_ = min_eigenvalue_ > 0.0 && Eigen::LLT<Matrix>(entries_).info() == Eigen::Success;
}

// ---------------------------------------------------------------------------

ScalarProfile named_profile(const std::string& name)
{
    if (name == "half") {
        return {name, [](double z) { return 0.5 * z; }, [](double) { return 0.5; }};
    }
    if (name == "identity") {
        return {name, [](double z) { return z; }, [](double) { return 1.0; }};
    }
    if (name == "pow2") {
        return {name, [](double z) { return z * z; }, [](double z) { return 2.0 * z; }};
    }
    if (name == "pow3") {
        return {name, [](double z) { return z * z * z; }, [](double z) { return 3.0 * z * z; }};
    }
    if (name.rfind("hybrid", 0) == 0) {
        double q = 0.0;
        try {
            q = std::stod(name.substr(6));
        } catch (const std::exception&) {
            throw ParameterError("unknown profile '" + name + "'");
        }
        if (!(q >= 2.0)) throw ParameterError("hybrid profile exponent must be >= 2");
        const double h = 0.5 * q;
        return {name,
                [h](double z) { return 0.5 * std::max(z, std::pow(z, h)); },
                [h](double z) { return z <= 1.0 ? 0.5 : 0.5 * h * std::pow(z, h - 1.0); }};
    }
    throw ParameterError("unknown profile '" + name + "'");
}

std::string to_string(FamilyTag tag)
{
    switch (tag) {
    case FamilyTag::quadratic: return "quadratic";
    case FamilyTag::power: return "power";
    case FamilyTag::bounded_support: return "bounded";
    case FamilyTag::radial: return "radial";
    case FamilyTag::empirical: return "empirical";
    case FamilyTag::custom: return "custom";
    }
    return "?";
}

// ---------------------------------------------------------------------------

YoungFunction::YoungFunction(Parts parts)
{
    check_dimension(parts.dimension);
    if (!parts.evaluate) throw ParameterError("Young function needs an evaluator");
    if (parts.support.dimension() != parts.dimension) throw ShapeError("support dimension mismatch");
    if (parts.hessian_at_origin.rows() != parts.dimension || parts.hessian_at_origin.cols() != parts.dimension) {
        throw ShapeError("origin Hessian has the wrong shape");
    }
    impl_ = std::make_shared<const Parts>(std::move(parts));
}

YoungFunction YoungFunction::custom(int d, Evaluator f, std::string name, SupportRegion support,
                                    Gradient gradient, std::optional<Matrix> hessian)
{
    check_dimension(d);
    if (!f) throw ParameterError("custom Young function needs an evaluator");
    Parts p;
    p.dimension = d;
    p.support = std::move(support);
    p.gradient = std::move(gradient);
    p.hessian_at_origin = hessian ? *hessian : estimate_hessian_at_origin(f, d);
    p.membership = membership_of(p.hessian_at_origin);
    p.family = FamilyTag::custom;
    p.spec = name.empty() ? "custom" : std::move(name);
    p.evaluate = std::move(f);
    return YoungFunction(std::move(p));
}

double YoungFunction::operator()(const Vector& lambda) const
{
    check_same_size(lambda.size(), impl_->dimension, "YoungFunction");
    if (!impl_->support.contains(lambda)) return kInf;
    return impl_->evaluate(lambda);
}

Vector YoungFunction::gradient(const Vector& lambda) const
{
    if (!impl_->gradient) throw PreconditionError(impl_->spec + " has no analytic gradient");
    check_same_size(lambda.size(), impl_->dimension, "YoungFunction::gradient");
    return impl_->gradient(lambda);
}

Vector YoungFunction::gradient_or_estimate(const Vector& lambda) const
{
    if (impl_->gradient) return gradient(lambda);
    return central_gradient(*this, lambda);
}

double YoungFunction::closed_conjugate(const Vector& y) const
{
    if (!impl_->closed_conjugate) throw PreconditionError(impl_->spec + " has no closed-form conjugate");
    check_same_size(y.size(), impl_->dimension, "YoungFunction::closed_conjugate");
    return impl_->closed_conjugate(y);
}

void YoungFunction::require_member(const char* operation) const
{
    if (impl_->membership != YMembership::member) {
        throw PreconditionError(std::string(operation) + " requires a Young-Orlicz function with "
                                "positive-definite origin Hessian; " + impl_->spec + " is relaxed");
    }
}

// ---------------------------------------------------------------------------

YoungFunction make_quadratic(const MatrixParameter& b)
{
    if (!b.positive_definite()) throw ParameterError("quadratic family needs a positive-definite matrix");
    const Matrix m = b.entries();
    const Matrix inv = m.inverse();
    YoungFunction::Parts p;
    p.dimension = b.dimension();
    p.support = SupportRegion::full_space(p.dimension);
    p.evaluate = [m](const Vector& x) { return 0.5 * quadratic_form(m, x); };
    p.gradient = [m](const Vector& x) -> Vector { return m * x; };
    p.closed_conjugate = [inv](const Vector& y) { return 0.5 * quadratic_form(inv, y); };
    p.hessian_at_origin = m;
    p.family = FamilyTag::quadratic;
    p.membership = YMembership::member;
    p.spec = "quadratic{B=" + matrix_spec(m) + "}";
    return YoungFunction(std::move(p));
}

YoungFunction make_power(double pw, double c, int d)
{
    check_dimension(d);
    if (!(pw > 1.0) || !std::isfinite(pw)) throw ParameterError("power family needs p > 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("power family needs c > 0");
    YoungFunction::Parts p;
    p.dimension = d;
    p.support = SupportRegion::full_space(d);
    p.evaluate = [pw, c](const Vector& x) { return c * std::pow(x.norm(), pw); };
    p.gradient = [pw, c](const Vector& x) -> Vector {
        const double r = x.norm();
        if (r == 0.0) return Vector::Zero(x.size());
        return (c * pw * std::pow(r, pw - 2.0)) * x;
    };
    const double q = pw / (pw - 1.0);
    p.closed_conjugate = [pw, c, q](const Vector& y) {
        return (pw - 1.0) * c * std::pow(y.norm() / (c * pw), q);
    };
    if (pw == 2.0) {
        p.hessian_at_origin = 2.0 * c * Matrix::Identity(d, d);
    } else if (pw > 2.0) {
        p.hessian_at_origin = Matrix::Zero(d, d);
    } else {
        p.hessian_at_origin = Matrix::Constant(d, d, 0.0);
        p.hessian_at_origin.diagonal().setConstant(kInf);
    }
    p.membership = pw == 2.0 ? YMembership::member : YMembership::relaxed;
    p.family = FamilyTag::power;
    p.spec = "power{p=" + number(pw) + ",c=" + number(c) + ",d=" + std::to_string(d) + "}";
    return YoungFunction(std::move(p));
}

YoungFunction make_bounded_support(double k, double c)
{
    if (!(k > 0.0) || !std::isfinite(k)) throw ParameterError("bounded family needs K > 0");
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("bounded family needs c > 0");
    YoungFunction::Parts p;
    p.dimension = 1;
    p.support = SupportRegion::ball(1, k);
    p.evaluate = [k, c](const Vector& x) {
        const double a = std::abs(x[0]);
        return c * a * a / (k - a);
    };
    p.gradient = [k, c](const Vector& x) -> Vector {
        const double l = x[0];
        const double a = std::abs(l);
        return Vector::Constant(1, c * l * (2.0 * k - a) / ((k - a) * (k - a)));
    };
    p.hessian_at_origin = Matrix::Constant(1, 1, 2.0 * c / k);
    p.membership = YMembership::member;
    p.family = FamilyTag::bounded_support;
    p.spec = "bounded{K=" + number(k) + ",c=" + number(c) + "}";
    return YoungFunction(std::move(p));
}

YoungFunction make_radial(const ScalarProfile& nu, const MatrixParameter& q)
{
    if (!q.positive_definite()) throw ParameterError("radial family needs a positive-definite Q");
    if (!nu.value) throw ParameterError("radial profile has no value function");
    if (nu.value(0.0) != 0.0) throw ParameterError("radial profile must vanish at zero");
    const Matrix m = q.entries();
    const auto value = nu.value;
    const auto derivative = nu.derivative;
    YoungFunction::Parts p;
    p.dimension = q.dimension();
    p.support = SupportRegion::full_space(p.dimension);
    p.evaluate = [m, value](const Vector& x) { return value(quadratic_form(m, x)); };
    if (derivative) {
        p.gradient = [m, derivative](const Vector& x) -> Vector {
            return (2.0 * derivative(quadratic_form(m, x))) * (m * x);
        };
        p.hessian_at_origin = 2.0 * derivative(0.0) * m;
    } else {
        p.hessian_at_origin = estimate_hessian_at_origin(p.evaluate, p.dimension);
    }
    if (nu.name == "half") {
        const Matrix inv = m.inverse();
        p.closed_conjugate = [inv](const Vector& y) { return 0.5 * quadratic_form(inv, y); };
    }
    p.membership = membership_of(p.hessian_at_origin);
    p.family = FamilyTag::radial;
    p.spec = "radial{nu=" + nu.name + ",Q=" + matrix_spec(m) + "}";
    return YoungFunction(std::move(p));
}

// ---------------------------------------------------------------------------

Lambda2Result check_lambda2(const YoungFunction& phi, int trial_count, double tolerance, std::uint64_t seed)
{
    if (trial_count < 1) throw ParameterError("check_lambda2: trial_count must be positive");
    const int d = phi.dimension();
    Lambda2Result result;
    result.seed = seed;
    result.trials = trial_count;
    result.function_spec = phi.spec();
    const bool bounded = phi.support().bounded();
    const double r_in = phi.support().inner_radius();
    result.plan = bounded ? "a,b log-uniform[1e-2,1e2]; lambda normal direction, |lambda| = 0.8 r_V U / sqrt(a^2+b^2)"
                          : "a,b log-uniform[1e-2,1e2]; lambda standard normal";

    Engine eng = make_engine(seed, 0x1a2b);
    std::uniform_real_distribution<double> log_ab(std::log(1e-2), std::log(1e2));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    Vector lambda(d);
    for (int t = 0; t < trial_count; ++t) {
        const double a = std::exp(log_ab(eng));
        const double b = std::exp(log_ab(eng));
        for (int j = 0; j < d; ++j) lambda[j] = normal(eng);
        const double c = std::hypot(a, b);
        if (bounded) {
            const double n = lambda.norm();
            if (n == 0.0) continue;
            lambda *= 0.8 * r_in * unit(eng) / (c * n);
        }
        const double lhs = phi(a * lambda) + phi(b * lambda);
        const double rhs = phi(c * lambda);
        if (lhs > rhs + tolerance * std::max(1.0, std::abs(rhs))) {
            result.holds = false;
            result.witness = Lambda2Witness{a, b, lambda, lhs, rhs};
            return result;
        }
    }
    return result;
}

SeminormEstimate check_delta2_seminorm(const YoungFunction& phi, const Matrix& a, int search_budget, double m_max)
{
    const int d = phi.dimension();
    if (a.rows() != d || a.cols() != d) throw ShapeError("check_delta2_seminorm: matrix shape mismatch");
    if (phi.support().bounded()) throw PreconditionError("check_delta2_seminorm needs full-space support");
    if (search_budget < 1) throw ParameterError("check_delta2_seminorm: search_budget must be positive");

    const auto dirs = sphere_directions(d, search_budget);
    std::vector<Vector> probes;
    std::vector<double> lhs;
    probes.reserve(dirs.size() * 21);
    const Matrix at = a.transpose();
    for (const auto& u : dirs) {
        for (int k = -10; k <= 10; ++k) {
            Vector l = std::ldexp(1.0, k) * u;
            lhs.push_back(phi(at * l));
            probes.push_back(std::move(l));
        }
    }

    auto holds = [&](double m) {
        const double s = m * m;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double rhs = phi(s * probes[i]);
            if (lhs[i] > rhs * (1.0 + 1e-12)) return false;
        }
        return true;
    };

    SeminormEstimate out;
    out.directions = static_cast<int>(dirs.size());
    out.radii = 21;
    out.grid = std::to_string(dirs.size()) + " sphere directions x radii 2^k, k=-10..10";
    if (holds(0.0)) {
        out.value = 0.0;
        return out;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (!holds(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > m_max) {
            out.unbounded = true;
            out.value = kInf;
            return out;
        }
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (holds(mid)) hi = mid;
        else lo = mid;
    }
    out.value = hi;
    return out;
}

EvennessResult check_absolutely_even(const std::function<double(const Vector&)>& f, int d, int trial_count,
                                     std::uint64_t seed)
{
    check_dimension(d);
    EvennessResult result;
    result.seed = seed;
    result.trials = trial_count;
    const auto signs = enumerate_sign_vectors(d);
    Engine eng = make_engine(seed, 0xe7e);
    std::normal_distribution<double> normal(0.0, 2.0);

    auto probe = [&](const Vector& x) {
        const double base = f(x);
        for (const auto& eps : signs) {
            const double flipped = f(coordinatewise_product(eps, x));
            if (std::abs(flipped - base) > 1e-10 * std::max(1.0, std::abs(base))) {
                result.holds = false;
                result.witness = EvennessWitness{eps, x, base, flipped};
                return false;
            }
        }
        return true;
    };

    for (int j = 0; j < d; ++j) {
        if (!probe(Vector::Unit(d, j))) return result;
    }
    Vector x(d);
    for (int t = 0; t < trial_count; ++t) {
        for (int j = 0; j < d; ++j) x[j] = normal(eng);
        if (!probe(x)) return result;
    }
    return result;
}

}  // namespace bphi
