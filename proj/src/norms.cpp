#include "bphi/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bphi {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Probe {
    Vector lambda;
    double mgf = 0.0;
    double std_error = 0.0;
};

// The B(phi) predicate: every probe satisfies mgf <= phi(tau lambda).
bool norm_predicate(const std::vector<Probe>& probes, const YoungFunction& phi, double tau)
{
    for (const auto& p : probes) {
        if (p.mgf > phi(tau * p.lambda)) return false;
    }
    return true;
}

std::size_t worst_probe(const std::vector<Probe>& probes, const YoungFunction& phi, double tau, double* violation)
{
    std::size_t worst = 0;
    double best = -kInf;
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const double f = phi(tau * probes[k].lambda);
        const double v = std::isfinite(f) ? probes[k].mgf - f : -kInf;
        if (v > best || (k == 0 && best == -kInf)) {
            best = v;
            worst = k;
        }
    }
    if (violation) *violation = best;
    return worst;
}

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    int iterations = 0;
    bool capped = false;
};

// Finds the monotone predicate's threshold: pred(hi) true, pred(lo) false.
template <class Pred>
Bracket bisect_threshold(const Pred& pred, double start, double tolerance, double cap, double floor = 1e-300)
{
    Bracket b;
    double t = start;
    if (pred(t)) {
        b.hi = t;
        for (;;) {
            t *= 0.5;
            ++b.iterations;
            if (t < floor) {
                b.lo = 0.0;
                b.hi = 0.0;
                return b;
            }
            if (!pred(t)) break;
            b.hi = t;
        }
        b.lo = t;
    } else {
        b.lo = t;
        for (;;) {
            t *= 2.0;
            ++b.iterations;
            if (t > cap) {
                b.hi = cap;
                b.capped = !pred(cap);
                if (b.capped) return b;
                break;
            }
            if (pred(t)) {
                b.hi = t;
                break;
            }
            b.lo = t;
        }
    }
    while (b.hi - b.lo > tolerance * b.hi) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        ++b.iterations;
        if (pred(mid)) b.hi = mid;
        else b.lo = mid;
    }
    return b;
}

std::vector<SignVector> octant_representatives(int d)
{
    std::vector<SignVector> reps;
    for (const auto& eps : enumerate_sign_vectors(d)) {
        if (eps[d - 1] == 1) reps.push_back(eps);  // phi is even: eps and -eps give the same constraint
    }
    return reps;
}

}  // namespace

NaturalSource exact_natural(const VectorDistribution& dist)
{
    return [dist](const Vector& l) { return MgfValue{dist.natural_value(l), true, 0.0}; };
}

NaturalSource exact_natural(std::function<double(const Vector&)> natural_log_mgf)
{
    return [f = std::move(natural_log_mgf)](const Vector& l) { return MgfValue{f(l), true, 0.0}; };
}

NaturalSource empirical_natural(const EmpiricalNaturalFunction& f)
{
    return [f](const Vector& l) {
        const auto v = f.evaluate(l);
        return MgfValue{v.value, v.trusted, v.std_error};
    };
}

std::string ProbePlan::describe() const
{
    std::ostringstream os;
    os << "directions_per_octant=" << directions_per_octant << ",radii=" << radii << ",r_min=" << r_min
       << ",r_max=" << r_max << ",refinement=" << refinement_probes << ",tolerance=" << tolerance
       << ",tau_max=" << tau_max;
    return os.str();
}

std::vector<Vector> ProbePlan::probes(int d) const
{
    check_dimension(d);
    if (directions_per_octant < 1 || radii < 1) throw ParameterError("probe plan needs directions and radii");
    if (!(r_min > 0.0) || !(r_max >= r_min)) throw ParameterError("probe plan radii must satisfy 0 < r_min <= r_max");
    const auto dirs = positive_orthant_directions(d, directions_per_octant);
    std::vector<Vector> out;
    for (const auto& eps : octant_representatives(d)) {
        for (const auto& u : dirs) {
            const Vector v = coordinatewise_product(eps, u);
            for (int k = 0; k < radii; ++k) {
                const double r = radii == 1 ? r_max : r_min * std::pow(r_max / r_min, double(k) / (radii - 1));
                out.push_back(r * v);
            }
        }
    }
    return out;
}

NormEstimate bphi_norm(const NaturalSource& mgf, const YoungFunction& phi, const ProbePlan& plan)
{
    const int d = phi.dimension();
    const auto raw = plan.probes(d);
    NormEstimate out;
    out.space = "bphi";
    out.probe_plan = plan.describe();

    std::vector<Probe> probes;
    const auto per_direction = static_cast<std::size_t>(plan.radii);
    for (std::size_t start = 0; start < raw.size(); start += per_direction) {
        bool untrusted = false;
        for (std::size_t k = start; k < start + per_direction; ++k) {
            if (untrusted) {
                ++out.trust_flags;
                continue;
            }
            const auto v = mgf(raw[k]);
            if (!v.trusted) {
                untrusted = true;
                ++out.trust_flags;
                continue;
            }
            probes.push_back({raw[k], v.value, v.std_error});
        }
    }
    if (probes.empty()) throw InsufficientDataError("bphi_norm: no trusted probes");

    auto pred = [&](double tau) { return norm_predicate(probes, phi, tau); };
    Bracket b = bisect_threshold(pred, 1.0, plan.tolerance, plan.tau_max);
    int iterations = b.iterations;

    if (!b.capped && b.hi > 0.0 && plan.refinement_probes > 0) {
        const auto w = worst_probe(probes, phi, b.lo, nullptr);
        const Vector center = probes[w].lambda;
        const double r = center.norm();
        const Vector u = center / r;
        std::vector<Vector> extra;
        const int n_radial = d == 1 ? plan.refinement_probes : plan.refinement_probes / 2;
        for (int k = 0; k < n_radial; ++k) {
            const double f = 0.025 * (k / 2 + 1) * (k % 2 == 0 ? 1.0 : -1.0);
            extra.push_back(r * (1.0 + f) * u);
        }
        for (int k = n_radial; k < plan.refinement_probes; ++k) {
            const int j = (k - n_radial) / 2 % d;
            const double f = 0.05 * ((k - n_radial) % 2 == 0 ? 1.0 : -1.0);
            Vector v = u + f * Vector::Unit(d, j);
            extra.push_back(r * v / v.norm());
        }
        for (const auto& l : extra) {
            const auto v = mgf(l);
            if (!v.trusted) {
                ++out.trust_flags;
                continue;
            }
            probes.push_back({l, v.value, v.std_error});
        }
        if (!pred(b.hi)) {
            const Bracket b2 = bisect_threshold(pred, b.hi, plan.tolerance, plan.tau_max);
            iterations += b2.iterations;
            b = b2;
        }
    }

    out.lo = b.lo;
    out.hi = b.hi;
    out.value = b.hi;
    out.exceeds_cap = b.capped;
    out.bisection_iterations = iterations;
    out.probes_used = static_cast<int>(probes.size());
    double violation = 0.0;
    const auto w = worst_probe(probes, phi, out.value, &violation);
    out.residual = violation;
    out.binding = probes[w].lambda;
    if (probes[w].std_error > 0.0 && out.value > 0.0 && !out.exceeds_cap) {
        const double slope = phi.gradient_or_estimate(out.value * out.binding).dot(out.binding);
        if (slope > 0.0) out.mc_width = 2.0 * probes[w].std_error / slope;
    }
    return out;
}

double odot(double a, double b, const YoungFunction& phi, const ProbePlan& plan)
{
    if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("odot: arguments must be nonnegative");
    const double lo0 = std::max(a, b);
    const double hi0 = a + b;
    if (a == 0.0 || b == 0.0) return hi0;
    const auto probes = plan.probes(phi.dimension());
    auto pred = [&](double c) {
        for (const auto& l : probes) {
            if (phi(c * l) < phi(a * l) + phi(b * l)) return false;
        }
        return true;
    };
    if (pred(lo0)) return lo0;
    double lo = lo0;
    double hi = hi0;
    while (hi - lo > plan.tolerance * 1e-2 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (pred(mid)) hi = mid;
        else lo = mid;
    }
    return hi;
}

NormEstimate gls_norm_1d(const std::function<double(double)>& moment, const std::function<double(double)>& psi,
                         const std::vector<double>& p_grid)
{
    if (p_grid.empty()) throw ParameterError("gls_norm_1d: empty p grid");
    NormEstimate out;
    out.space = "gls";
    out.probe_plan = "p_grid_size=" + std::to_string(p_grid.size());
    out.binding = Vector::Constant(1, p_grid.front());
    for (double p : p_grid) {
        const double s = psi(p);
        if (!(s > 0.0)) throw DomainError("gls_norm_1d: psi must be positive on the grid");
        const double ratio = moment(p) / s;
        if (ratio > out.value) {
            out.value = ratio;
            out.binding = Vector::Constant(1, p);
        }
    }
    out.lo = out.hi = out.value;
    out.probes_used = static_cast<int>(p_grid.size());
    return out;
}

double psi_from_inverse(const YoungFunction& phi, double p)
{
    if (phi.dimension() != 1) throw ShapeError("psi_from_inverse needs a one-dimensional phi");
    return p / ray_inverse(phi, Vector::Ones(1), p);
}

double psi_phi_even_moments(const YoungFunction& phi, int m)
{
    if (m < 1) throw DomainError("psi_phi_even_moments: m must be >= 1");
    const double r = 2.0 * m;
    const auto c = log_reparam_conjugate(phi, r);
    if (c.diverged) throw RangeError("psi_phi_even_moments: Phi* diverged");
    return r * std::exp(-c.value / r);
}

double psi_big_phi(const YoungFunction& phi, const Vector& r)
{
    const auto c = log_reparam_conjugate(phi, r);
    if (c.diverged) throw RangeError("psi_big_phi: Phi* diverged");
    const double total = r.sum();
    const int d = static_cast<int>(r.size());
    double log_psi = -1.0 + d * std::log(2.0) / total - c.value / total;
    for (int j = 0; j < d; ++j) log_psi += r[j] * std::log(r[j]) / total;
    return std::exp(log_psi);
}

std::vector<Vector> default_r_grid(int d)
{
    check_dimension(d);
    const double values[] = {2.0, 4.0, 8.0};
    std::vector<Vector> out;
    std::size_t total = 1;
    for (int j = 0; j < d; ++j) total *= 3;
    for (std::size_t flat = 0; flat < total; ++flat) {
        Vector r(d);
        std::size_t rem = flat;
        for (int j = 0; j < d; ++j) {
            r[j] = values[rem % 3];
            rem /= 3;
        }
        out.push_back(r);
    }
    return out;
}

NormEstimate gls_norm_vector(const std::function<double(const Vector&)>& moment, const YoungFunction& phi,
                             const std::vector<Vector>& r_grid)
{
    if (r_grid.empty()) throw ParameterError("gls_norm_vector: empty r grid");
    NormEstimate out;
    out.space = "gls_vector";
    out.probe_plan = "r_grid_size=" + std::to_string(r_grid.size());
    out.binding = r_grid.front();
    for (const auto& r : r_grid) {
        check_same_size(r.size(), phi.dimension(), "gls_norm_vector");
        if (!(r.array() >= 1.0).all()) throw DomainError("gls_norm_vector: every r(j) must be >= 1");
        const double ratio = moment(r) / psi_big_phi(phi, r);
        if (ratio > out.value) {
            out.value = ratio;
            out.binding = r;
        }
    }
    out.lo = out.hi = out.value;
    out.probes_used = static_cast<int>(r_grid.size());
    return out;
}

OrliczFunction::OrliczFunction(YoungFunction phi) : phi_(phi), star_(std::move(phi)) {}

double OrliczFunction::conjugate_value(const Vector& u) const
{
    if (phi_.has_closed_conjugate()) return phi_.closed_conjugate(u);
    const auto v = star_(u);
    if (v.diverged) return kInf;
    return v.value;
}

double OrliczFunction::operator()(const Vector& u) const
{
    return std::expm1(conjugate_value(u));  // phi*(0) = 0
}

NormEstimate luxemburg_norm(const SampleSet& samples, const OrliczFunction& n_phi, double tolerance, double c_max)
{
    check_same_size(samples.dimension(), n_phi.base().dimension(), "luxemburg_norm");
    NormEstimate out;
    out.space = "orlicz";
    out.probe_plan = "samples=" + std::to_string(samples.size());
    std::vector<Vector> rows;
    rows.reserve(samples.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        rows.push_back(samples.row(i));
        scale = std::max(scale, rows.back().lpNorm<Eigen::Infinity>());
    }
    out.probes_used = static_cast<int>(rows.size());
    if (scale == 0.0) return out;

    const double log2 = std::log(2.0);
    std::vector<double> values(rows.size());
    double last_c = 0.0;
    bool last_result = false;
    auto pred = [&](double c) {
        for (std::size_t i = 0; i < rows.size(); ++i) values[i] = n_phi.conjugate_value(rows[i] / c);
        const bool ok = log_mean_exp(values) <= log2;
        // the predicate is monotone in c; an inverted bracket would be a bug
        if (last_c > 0.0 && ((c > last_c && last_result && !ok) || (c < last_c && !last_result && ok))) {
            throw Error("luxemburg_norm: predicate is not monotone in c");
        }
        last_c = c;
        last_result = ok;
        return ok;
    };
    const Bracket b = bisect_threshold(pred, scale, tolerance, c_max * scale);
    out.lo = b.lo;
    out.hi = b.hi;
    out.value = b.hi;
    out.exceeds_cap = b.capped;
    out.bisection_iterations = b.iterations;
    return out;
}

EquivalenceReport equivalence_report(const SampleSet& samples, const YoungFunction& phi, const ProbePlan& plan,
                                     double band_lo, double band_hi)
{
    check_same_size(samples.dimension(), phi.dimension(), "equivalence_report");
    EquivalenceReport rep;
    rep.band_lo = band_lo;
    rep.band_hi = band_hi;
    // All three norms are computed on the data divided by its root mean
    // square and scaled back, so that the fixed probe plan sees the same
    // standardized cloud at every scale and the report is homogeneous.
    double mean_sq = 0.0;
    for (double v : samples.data()) mean_sq += v * v;
    mean_sq /= static_cast<double>(samples.data().size());
    const double unit = mean_sq > 0.0 ? std::sqrt(mean_sq) : 1.0;
    std::vector<double> standardized = samples.data();
    for (auto& v : standardized) v /= unit;
    const SampleSet base(std::move(standardized), samples.size(), samples.dimension(), samples.seed(),
                         samples.tag(), samples.kramer());
    auto rescale = [unit](NormEstimate e) {
        e.value *= unit;
        e.lo *= unit;
        e.hi *= unit;
        e.mc_width *= unit;
        return e;
    };

    const auto nat = natural_function(base);
    rep.bphi = rescale(bphi_norm(empirical_natural(nat), phi, plan));
    rep.gls = rescale(gls_norm_vector([&](const Vector& r) { return vector_moment(base, r).value; }, phi,
                                      default_r_grid(phi.dimension())));
    const OrliczFunction n_phi(phi);
    rep.orlicz = rescale(luxemburg_norm(base, n_phi, plan.tolerance));

    auto ratio = [](double a, double b) { return b > 0.0 ? a / b : (a > 0.0 ? kInf : 1.0); };
    rep.ratio_bphi_gls = ratio(rep.bphi.value, rep.gls.value);
    rep.ratio_bphi_orlicz = ratio(rep.bphi.value, rep.orlicz.value);
    rep.ratio_gls_orlicz = ratio(rep.gls.value, rep.orlicz.value);
    for (double r : {rep.ratio_bphi_gls, rep.ratio_bphi_orlicz, rep.ratio_gls_orlicz}) {
        if (!(r >= band_lo && r <= band_hi)) rep.ratios_in_band = false;
    }

    std::ostringstream note;
    if (rep.bphi.exceeds_cap) {
        rep.non_member = true;
        note << "B(phi) norm exceeds the cap; ";
    } else if (rep.bphi.value > 0.0) {
        // the fitted norm implies U(xi, x) <= exp(-phi*(x / tau)); look for a contradiction
        const double tau = rep.bphi.value;
        const double floor = 5.0 / static_cast<double>(samples.size());
        const int d = samples.dimension();
        for (double t = 0.5; t < 1e3; t *= 1.1) {
            const Vector x = Vector::Constant(d, t * tau);
            const auto emp = tail_function(samples, x);
            if (emp.value < floor) break;
            const double bound = std::exp(-n_phi.conjugate_value(x / tau));
            if (emp.value - emp.half_width > bound) {
                rep.non_member = true;
                note << "empirical tail " << emp.value << " exceeds the fitted bound " << bound << " at x=" << t * tau
                     << "*1; ";
                break;
            }
        }
    }
    if (!rep.ratios_in_band) note << "norm ratio outside [" << band_lo << ", " << band_hi << "]; ";
    rep.note = note.str();
    return rep;
}

}  // namespace bphi
