#pragma once

// Norms of random vectors: the B(phi) norm from a natural function, the odot
// operation, moment (Grand Lebesgue) norms and the Luxemburg norm of N_phi.

#include <functional>
#include <string>
#include <vector>

#include "bphi/conjugate.hpp"
#include "bphi/core.hpp"
#include "bphi/empirical.hpp"
#include "bphi/young.hpp"

namespace bphi {

/// One value of a (natural) log-MGF with its reliability.
struct MgfValue {
    double value = 0.0;
    bool trusted = true;
    double std_error = 0.0;
};

/// lambda -> log of max over eps of E exp((eps (x) lambda, xi)).
using NaturalSource = std::function<MgfValue(const Vector&)>;

NaturalSource exact_natural(const VectorDistribution& dist);
NaturalSource exact_natural(std::function<double(const Vector&)> natural_log_mgf);
NaturalSource empirical_natural(const EmpiricalNaturalFunction& f);

/// Finite set of lambda probes standing in for "all lambda in V".
struct ProbePlan {
    int directions_per_octant = 37;
    int radii = 12;
    double r_min = 0.05;
    double r_max = 4.0;
    int refinement_probes = 8;
    double tolerance = 1e-4;  ///< relative bisection tolerance
    double tau_max = 1e6;

    std::string describe() const;
    /// Directions over 2^(d-1) octant representatives times log-spaced radii;
    /// grouped by direction with radii ascending.
    std::vector<Vector> probes(int d) const;
};

struct NormEstimate {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::string space;
    std::string probe_plan;
    double residual = 0.0;     ///< max over probes of constraint violation at `value`
    int trust_flags = 0;       ///< probes discarded as untrusted
    int probes_used = 0;
    int bisection_iterations = 0;
    bool exceeds_cap = false;
    Vector binding;            ///< active probe (lambda, p or r)
    double mc_width = 0.0;     ///< Monte Carlo uncertainty of `value` (0 for exact inputs)
};

/// inf tau such that mgf(lambda) <= phi(tau lambda) on every trusted probe.
/// A lower bound of the true norm. Along each direction, probes beyond the
/// first untrusted radius are discarded.
NormEstimate bphi_norm(const NaturalSource& mgf, const YoungFunction& phi, const ProbePlan& plan = {});

/// a (.) b = inf { c : phi(c lambda) >= phi(a lambda) + phi(b lambda) } over
/// the probes, searched in [max(a,b), a+b].
double odot(double a, double b, const YoungFunction& phi, const ProbePlan& plan = {});

/// sup over the grid of moment(p) / psi(p).
NormEstimate gls_norm_1d(const std::function<double(double)>& moment, const std::function<double(double)>& psi,
                         const std::vector<double>& p_grid);

/// psi(p) = p / phi^{-1}(p) for one-dimensional phi.
double psi_from_inverse(const YoungFunction& phi, double p);

/// psi_phi(m) = 2m exp(-Phi*(2m) / (2m)); throws RangeError when Phi* diverges.
double psi_phi_even_moments(const YoungFunction& phi, int m);

/// psi_Phi(r) = e^-1 2^(d/|r|) prod r(j)^(r(j)/|r|) exp(-Phi*(r)/|r|).
double psi_big_phi(const YoungFunction& phi, const Vector& r);

/// {2,4,8}^d.
std::vector<Vector> default_r_grid(int d);

/// sup over the grid of moment(r) / psi_Phi(r).
NormEstimate gls_norm_vector(const std::function<double(const Vector&)>& moment, const YoungFunction& phi,
                             const std::vector<Vector>& r_grid);

/// N_phi(u) = exp(phi*(u)) - exp(phi*(0)).
class OrliczFunction {
public:
    explicit OrliczFunction(YoungFunction phi);

    /// phi*(u), closed form when the family has one.
    double conjugate_value(const Vector& u) const;
    double operator()(const Vector& u) const;
    const YoungFunction& base() const { return phi_; }

private:
    YoungFunction phi_;
    ConjugateEvaluator star_;
};

/// inf c > 0 with (1/n) sum N(xi_i / c) <= 1, by bisection.
NormEstimate luxemburg_norm(const SampleSet& samples, const OrliczFunction& n_phi, double tolerance = 1e-4,
                            double c_max = 1e6);

struct EquivalenceReport {
    NormEstimate bphi;
    NormEstimate gls;
    NormEstimate orlicz;
    double ratio_bphi_gls = 0.0;
    double ratio_bphi_orlicz = 0.0;
    double ratio_gls_orlicz = 0.0;
    double band_lo = 1.0 / 50.0;
    double band_hi = 50.0;
    bool ratios_in_band = true;
    /// the B(phi) norm hit its cap, or the fitted norm's tail bound is
    /// contradicted by the empirical tail beyond Monte Carlo width
    bool non_member = false;
    std::string note;
};

EquivalenceReport equivalence_report(const SampleSet& samples, const YoungFunction& phi, const ProbePlan& plan = {},
                                     double band_lo = 1.0 / 50.0, double band_hi = 50.0);

}  // namespace bphi
