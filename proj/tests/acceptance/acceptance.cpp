// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "../oracles.hpp"
#include "bphi/bounds.hpp"
#include "bphi/characterize.hpp"
#include "bphi/conjugate.hpp"
#include "bphi/core.hpp"
#include "bphi/empirical.hpp"
#include "bphi/norms.hpp"
#include "bphi/young.hpp"

#ifndef BPHI_CLI_PATH
#error "BPHI_CLI_PATH must name the bphi executable"
#endif

using namespace bphi;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Collects failures; the first failure message is kept as detail.
class Check {
public:
    void require(bool ok, const std::string& what)
    {
        ++checks_;
        if (!ok && pass_) {
            pass_ = false;
            first_ = what;
        }
        failures_ += ok ? 0 : 1;
    }
    Outcome outcome(const std::string& summary) const
    {
        std::ostringstream s;
        s << summary << " (" << checks_ - failures_ << "/" << checks_ << " checks)";
        if (!pass_) s << "; first failure: " << first_;
        return {pass_, s.str()};
    }

private:
    bool pass_ = true;
    int checks_ = 0;
    int failures_ = 0;
    std::string first_;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

YoungFunction quadratic(const Matrix& b) { return make_quadratic(MatrixParameter(b)); }
YoungFunction quadratic(int d) { return quadratic(Matrix::Identity(d, d)); }

ProbePlan plan_with_tolerance(double tol)
{
    ProbePlan p;
    p.tolerance = tol;
    return p;
}

// 1. conjugate of quadratic(B) against the linear-solve oracle
Outcome conjugate_correctness()
{
    Check c;
    std::mt19937_64 rng(101);
    std::normal_distribution<double> n;
    double worst = 0.0;
    for (int d : {2, 3}) {
        for (int m = 0; m < 10; ++m) {
            const Matrix b = oracle::random_spd(d, rng);
            std::vector<Vector> ys;
            for (int i = 0; i < 100; ++i) {
                Vector y(d);
                for (int j = 0; j < d; ++j) y[j] = 2.0 * n(rng);
                ys.push_back(y);
            }
            const auto values = ConjugateEvaluator(quadratic(b)).evaluate_batch(ys);
            for (std::size_t i = 0; i < ys.size(); ++i) {
                const double exact = oracle::quadratic_conjugate(b, ys[i]);
                const double rel = std::abs(values[i].value - exact) / std::max(exact, 1e-300);
                worst = std::max(worst, rel);
                c.require(rel <= 1e-6, "d=" + std::to_string(d) + " relative error " + fmt(rel));
            }
        }
    }
    return c.outcome("2000 points, max relative error " + fmt(worst));
}

std::vector<Vector> ball_probes(int d, double radius, int count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) {
        Vector v(d);
        for (int j = 0; j < d; ++j) v[j] = n(rng);
        out.push_back(v.normalized() * radius * std::pow(u(rng), 1.0 / d));
    }
    return out;
}

// 2. phi** = phi
Outcome fenchel_moreau()
{
    Check c;
    std::mt19937_64 rng(202);
    double worst = 0.0;
    const std::vector<std::pair<std::string, YoungFunction>> cases{
        {"quadratic d=2", quadratic(oracle::random_spd(2, rng))},
        {"quadratic d=1", quadratic(1)},
        {"power p=4 d=1", make_power(4.0, 1.0, 1)},
        {"power p=4 d=2", make_power(4.0, 0.5, 2)}};
    for (const auto& [name, phi] : cases) {
        const auto probes = ball_probes(phi.dimension(), 3.0, 12, 7);
        const double r = biconjugate_residual(phi, probes);
        worst = std::max(worst, r);
        c.require(r <= 1e-4, name + " residual " + fmt(r));
    }
    return c.outcome("quadratic and power p=4 over |l| <= 3, max residual " + fmt(worst));
}

// 3. empirical natural function of gaussian(I2), n = 1e6
Outcome natural_recovery()
{
    Check c;
    const auto s = sample(VectorDistribution::gaussian(Matrix::Identity(2, 2)), 1000000, 303);
    const auto nat = natural_function(s);
    int trusted = 0;
    double worst = 0.0;
    for (int i = 0; trusted < 50 && i < 500; ++i) {
        const double angle = 2.0 * M_PI * i / 50.0 + 0.1;
        const double r = 0.1 + 1.4 * ((i * 7) % 50) / 49.0;
        const Vector l = (Vector(2) << r * std::cos(angle), r * std::sin(angle)).finished();
        const auto v = nat.evaluate(l);
        if (!v.trusted) continue;
        ++trusted;
        const double err = std::abs(v.value - 0.5 * l.squaredNorm());
        worst = std::max(worst, err);
        c.require(err <= 0.02, "natural function error " + fmt(err) + " at |l|=" + fmt(r));
    }
    c.require(trusted == 50, "only " + std::to_string(trusted) + " trusted probes");
    const auto norm = bphi_norm(empirical_natural(nat), quadratic(2));
    c.require(norm.value >= 0.97 && norm.value <= 1.03, "norm " + fmt(norm.value));
    return c.outcome(std::to_string(trusted) + " trusted probes, max error " + fmt(worst) + ", norm " +
                     fmt(norm.value));
}

// 4. homogeneity, triangle inequality, rearrangement invariance
Outcome norm_axioms()
{
    Check c;
    const double tol = 1e-6;
    const auto plan = plan_with_tolerance(tol);
    const auto phi = quadratic(2);
    const Matrix q = (Matrix(2, 2) << 1.0, 0.4, 0.4, 0.7).finished();
    const double base = bphi_norm(exact_natural(VectorDistribution::gaussian(q)), phi, plan).value;
    for (double a : {0.5, 2.0, 10.0}) {
        const double v = bphi_norm(exact_natural(VectorDistribution::gaussian(a * a * q)), phi, plan).value;
        c.require(std::abs(v - a * base) <= 2.0 * tol * a * base, "homogeneity at alpha=" + fmt(a));
    }
    std::mt19937_64 rng(404);
    for (int i = 0; i < 5; ++i) {
        const Matrix q1 = oracle::random_spd(2, rng);
        const Matrix q2 = oracle::random_spd(2, rng);
        const double a = bphi_norm(exact_natural(VectorDistribution::gaussian(q1)), phi, plan).value;
        const double b = bphi_norm(exact_natural(VectorDistribution::gaussian(q2)), phi, plan).value;
        const double s = bphi_norm(exact_natural(VectorDistribution::gaussian(q1 + q2)), phi, plan).value;
        c.require(s <= a + b + 2.0 * tol * (a + b), "triangle inequality for pair " + std::to_string(i));
    }
    const auto g = VectorDistribution::gaussian(Matrix::Identity(2, 2));
    std::vector<NormEstimate> est;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        est.push_back(bphi_norm(empirical_natural(natural_function(sample(g, 200000, 4000 + seed))), phi));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        for (std::size_t j = i + 1; j < est.size(); ++j) {
            const double width = std::hypot(est[i].mc_width, est[j].mc_width);
            const double gap = std::abs(est[i].value - est[j].value);
            worst = std::max(worst, gap / width);
            c.require(gap <= 3.0 * width, "seeds " + std::to_string(i) + "," + std::to_string(j) + " differ by " +
                                              fmt(gap) + " > 3 x " + fmt(width));
        }
    }
    return c.outcome("largest seed gap " + fmt(worst) + " MC widths");
}

std::vector<Vector> tail_grid(int d)
{
    std::vector<Vector> xs;
    for (double t = 0.25; t <= 4.0 + 1e-12; t += 0.25) xs.push_back(Vector::Constant(d, t));
    for (double t = 0.5; t <= 3.0 + 1e-12; t += 0.5) {
        Vector x = Vector::Constant(d, t);
        x[0] = 0.5 * t;
        xs.push_back(x);
    }
    return xs;
}

YoungFunction logcosh_custom(int d)
{
    return YoungFunction::custom(
        d,
        [](const Vector& l) {
            double v = 0.0;
            for (Eigen::Index j = 0; j < l.size(); ++j) v += log_cosh(l[j]);
            return v;
        },
        "logcosh-custom", SupportRegion::full_space(d),
        [](const Vector& l) { return Vector(l.array().tanh()); }, Matrix::Identity(d, d));
}

// 5. Chernov domination
Outcome chernov_domination()
{
    Check c;
    const int d = 2;
    const std::size_t reps = 1000000;
    struct Case {
        std::string name;
        VectorDistribution dist;
        YoungFunction phi;
    };
    const std::vector<Case> cases{
        {"gaussian x quadratic", VectorDistribution::gaussian(Matrix::Identity(d, d)), quadratic(d)},
        {"rademacher x logcosh", VectorDistribution::rademacher(1.0, d), logcosh_custom(d)},
        {"weibull p=4 x quadratic", VectorDistribution::symmetric_weibull(4.0, 1.0, d), quadratic(d)}};
    int compared = 0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& cs = cases[k];
        const double norm = bphi_norm(exact_natural(cs.dist), cs.phi).value;
        const auto s = sample(cs.dist, reps, 505 + k);
        for (const auto& x : tail_grid(d)) {
            const auto b = chernov_bound(cs.phi, norm, x);
            if (b.bound < 10.0 / static_cast<double>(reps)) continue;
            const auto e = tail_function(s, x);
            ++compared;
            c.require(b.bound + b.slack * b.bound >= e.value - 3.0 * e.half_width,
                      cs.name + " at x=(" + fmt(x[0]) + "," + fmt(x[1]) + "): bound " + fmt(b.bound) +
                          " < empirical " + fmt(e.value));
        }
    }
    return c.outcome(std::to_string(compared) + " resolvable grid points, 3 configurations");
}

// 6. min-coordinate bound
Outcome min_coordinate()
{
    Check c;
    for (double y : {1.0, 2.0, 3.0}) {
        const auto b = min_coordinate_bound(quadratic(2), 1.0, y);
        const double exact = std::pow(2.0 * oracle::normal_upper_tail(y), 2);
        c.require(b.unclamped >= exact && b.bound >= exact,
                  "y=" + fmt(y) + " bound " + fmt(b.bound) + " < " + fmt(exact));
        c.require(std::abs(b.unclamped - 4.0 * std::exp(-y * y)) <= 1e-9 * b.unclamped, "closed form at y=" + fmt(y));
    }
    return c.outcome("y in {1,2,3} against (2 Phi-bar(y))^2");
}

// 7. Pythagoras sum rule
Outcome pythagoras()
{
    Check c;
    const auto phi = quadratic(2);
    const auto cert = check_lambda2(phi, 10000, 1e-9, 707);
    const double sigma = sum_norm_pythagoras(SumSpec{{3.0, 4.0}, 2}, phi, cert);
    c.require(std::abs(sigma - 5.0 / std::sqrt(2.0)) <= 1e-15, "sigma " + fmt(sigma));
    const auto g = VectorDistribution::gaussian(Matrix::Identity(2, 2));
    std::string values;
    for (int n : {2, 8, 32}) {
        const double target = sum_norm_pythagoras(SumSpec::iid(1.0, n), phi, cert);
        const auto s = sample_normalized_sums(g, n, 200000, 700 + n);
        const double v = bphi_norm(empirical_natural(natural_function(s)), phi).value;
        values += " n=" + std::to_string(n) + ":" + fmt(v);
        c.require(std::abs(v - target) <= 0.03, "n=" + std::to_string(n) + " norm " + fmt(v));
    }
    return c.outcome("sigma(2;{3,4}) = 5/sqrt2, measured" + values);
}

// 8. phi_n domination of the sum MGF
Outcome phi_n_domination()
{
    Check c;
    const int n = 16;
    const auto s = sample_normalized_sums(VectorDistribution::rademacher(1.0, 1), n, 100000, 808);
    const auto nat = natural_function(s);
    const auto phi = logcosh_custom(1);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 10; ++i) {
        for (double sign : {1.0, -1.0}) {
            const Vector l = Vector::Constant(1, sign * 0.2 * i);
            const auto e = nat.evaluate(l);
            const double bound = phi_n(phi, n, l);
            worst = std::max(worst, e.value - bound);
            c.require(e.value <= bound + 3.0 * e.std_error, "lambda=" + fmt(l[0]) + ": " + fmt(e.value) + " > " +
                                                                 fmt(bound) + " + 3 x " + fmt(e.std_error));
        }
    }
    return c.outcome("20 values |l| <= 2, max(empirical - phi_16) = " + fmt(worst));
}

// 9. exponent min(p, 2) of the sum bound
Outcome exponent_law()
{
    Check c;
    ProbePlan plan;
    plan.r_max = 8.0;
    std::string slopes;
    for (double p : {1.5, 4.0}) {
        const auto dist = VectorDistribution::symmetric_weibull(p, 1.0, 1);
        const auto phi = tail_matched_function(p, 1);
        const double norm = bphi_norm(exact_natural(dist), phi, plan).value;
        const auto cert = check_lambda2(phi, 2000, 1e-9, 909);
        std::vector<double> lx, ly;
        for (double x = 2.0; x <= 6.0 + 1e-12; x += 0.25) {
            const auto b = sum_bound(SumSpec::iid(norm, 16), phi, cert, Vector::Constant(1, x));
            lx.push_back(std::log(x));
            ly.push_back(std::log(b.conjugate_value));
        }
        const double slope = oracle::slope(lx, ly);
        slopes += " p=" + fmt(p) + ":" + fmt(slope);
        c.require(std::abs(slope - std::min(p, 2.0)) <= 0.15, "p=" + fmt(p) + " slope " + fmt(slope));
    }
    return c.outcome("log-log slopes" + slopes);
}

// 10. lower bound <= empirical sup_n tail <= sum bound
Outcome sandwich()
{
    Check c;
    const int d = 2;
    const std::size_t reps = 200000;
    const std::vector<int> n_set{1, 2, 4, 8, 16, 64};
    const std::vector<std::pair<std::string, VectorDistribution>> cases{
        {"gaussian", VectorDistribution::gaussian(Matrix::Identity(d, d))},
        {"weibull p=4", VectorDistribution::symmetric_weibull(4.0, 1.0, d)}};
    int points = 0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [name, dist] = cases[k];
        const auto phi = tail_matched_function(name == "gaussian" ? 2.0 : 4.0, d);
        const double norm = bphi_norm(exact_natural(dist), phi).value;
        const auto cert = check_lambda2(phi, 2000, 1e-9, 1010);
        std::vector<SampleSet> sums;
        for (int n : n_set) sums.push_back(sample_normalized_sums(dist, n, reps, 10000 + 100 * k + n));
        for (double t : {0.5, 1.0, 1.2, 1.5, 2.0}) {
            const Vector x = Vector::Constant(d, t);
            TailEstimate sup;
            for (const auto& s : sums) {
                const auto e = tail_function(s, x);
                if (e.value > sup.value) sup = e;
            }
            const auto lower = lower_bound(dist, x, 16, reps, 20000 + 10 * k);
            const auto upper = sum_bound(SumSpec::iid(norm, 16), phi, cert, x);
            ++points;
            c.require(lower.value - 3.0 * lower.half_width <= sup.value + 3.0 * sup.half_width,
                      name + " t=" + fmt(t) + ": lower " + fmt(lower.value) + " (" + lower.source + ") > sup " +
                          fmt(sup.value));
            c.require(sup.value - 3.0 * sup.half_width <= upper.bound,
                      name + " t=" + fmt(t) + ": sup " + fmt(sup.value) + " > bound " + fmt(upper.bound));
        }
    }
    return c.outcome(std::to_string(points) + " points, n-set {1,2,4,8,16,64}");
}

// 11. Lambda2 checker
Outcome lambda2()
{
    Check c;
    const auto quad = quadratic(2);
    const auto rad = make_radial(named_profile("pow2"), MatrixParameter(Matrix::Identity(2, 2)));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        c.require(check_lambda2(quad, 10000, 1e-9, seed).holds, "quadratic, seed " + std::to_string(seed));
        c.require(check_lambda2(rad, 10000, 1e-9, seed).holds, "radial z^2, seed " + std::to_string(seed));
    }
    const auto abs = YoungFunction::custom(
        1, [](const Vector& l) { return std::abs(l[0]); }, "abs", SupportRegion::full_space(1));
    const auto r = check_lambda2(abs, 10000, 1e-9, 11);
    c.require(!r.holds && r.witness.has_value(), "|l| not rejected");
    if (r.witness) {
        const auto& w = *r.witness;
        const double l = std::abs(w.lambda[0]);
        const double lhs = std::abs(w.a) * l + std::abs(w.b) * l;
        const double rhs = std::sqrt(w.a * w.a + w.b * w.b) * l;
        c.require(lhs > rhs, "witness does not violate the condition");
        return c.outcome("|l| witness a=" + fmt(w.a) + " b=" + fmt(w.b) + " l=" + fmt(w.lambda[0]) + ": " + fmt(lhs) +
                         " > " + fmt(rhs));
    }
    return c.outcome("no witness");
}

// 12. moment norm direction and the Luxemburg closed form
Outcome moment_and_luxemburg()
{
    Check c;
    const auto phi = quadratic(2);
    const auto s = sample(VectorDistribution::gaussian(Matrix::Identity(2, 2)), 1000000, 1212);
    const double b = bphi_norm(empirical_natural(natural_function(s)), phi).value;
    const auto g = gls_norm_vector([&](const Vector& r) { return vector_moment(s, r).value; }, phi, default_r_grid(2));
    c.require(g.value <= 1.1 * b, "moment norm " + fmt(g.value) + " > 1.1 x " + fmt(b));
    const auto rs = sample(VectorDistribution::rademacher(1.0, 1), 1000, 1213);
    const auto l = luxemburg_norm(rs, OrliczFunction(quadratic(1)), 1e-7);
    const double exact = 1.0 / std::sqrt(2.0 * std::log(2.0));
    c.require(std::abs(l.value - exact) <= 1e-4, "luxemburg " + fmt(l.value));
    return c.outcome("moment norm " + fmt(g.value) + " vs B(phi) " + fmt(b) + "; luxemburg " + fmt(l.value) + " vs " +
                     fmt(exact));
}

// 13. characterization verdicts
Outcome characterization()
{
    Check c;
    auto exp_sum = [](const Vector& l) { return std::exp(l[0] + l[1]); };
    auto exp_diff = [](const Vector& l) { return std::exp(l[0] - l[1]); };
    auto sign2 = [](int a, int b) {
        for (const auto& e : enumerate_sign_vectors(2)) {
            if (e[0] == a && e[1] == b) return e;
        }
        return enumerate_sign_vectors(2)[0];
    };
    StencilSettings k3;
    k3.k_max = 3;
    const auto box = Box::cube(2, 0.0, 1.0);
    c.require(check_absolutely_monotonic(exp_sum, box, k3).verdict == Verdict::consistent, "exp(l1+l2)");
    const auto v = check_absolutely_monotonic(exp_diff, box, k3);
    c.require(v.verdict == Verdict::violated && v.order == std::vector<int>{0, 1}, "exp(l1-l2) witness");
    c.require(check_absolutely_monotonic([](const Vector&) { return 1.0; }, box, k3).verdict == Verdict::consistent,
              "constant");
    c.require(check_octant_monotonic(exp_diff, sign2(1, -1), box).verdict == Verdict::consistent,
              "exp(l1-l2) in K(+,-)");
    c.require(check_octant_monotonic(exp_sum, sign2(1, 1), box).verdict == Verdict::consistent,
              "exp(l1+l2) in K(+,+)");
    const auto w = check_octant_monotonic(exp_sum, sign2(-1, -1), box);
    c.require(w.verdict == Verdict::violated && w.order == std::vector<int>{1, 0}, "exp(l1+l2) in K(-,-)");

    const auto plus = enumerate_sign_vectors(1)[0];
    const auto minus = enumerate_sign_vectors(1)[1];
    const auto b1 = Box::cube(1, -1.0, 1.0);
    std::vector<DecompositionPart> cosh_parts{{plus, [](const Vector& l) { return 0.5 * std::exp(l[0]); }},
                                              {minus, [](const Vector& l) { return 0.5 * std::exp(-l[0]); }}};
    auto cosh = [](const Vector& l) { return std::cosh(l[0]); };
    const auto dc = decomposition_check(cosh_parts, cosh, b1);
    c.require(dc.verdict == Verdict::consistent && std::abs(dc.origin_sum - 1.0) <= 1e-10, "cosh decomposition");
    std::vector<DecompositionPart> gauss_parts{
        {plus, [](const Vector& l) { return oracle::gaussian_half_line_mgf(l[0], true); }},
        {minus, [](const Vector& l) { return oracle::gaussian_half_line_mgf(l[0], false); }}};
    c.require(decomposition_check(gauss_parts, [](const Vector& l) { return std::exp(0.5 * l[0] * l[0]); }, b1)
                      .verdict == Verdict::consistent,
              "gaussian decomposition");
    c.require(decomposition_check({cosh_parts[0]}, cosh, b1).verdict == Verdict::violated, "missing part");
    return c.outcome("six monotonicity examples and three decomposition examples");
}

int run_cli(const std::string& args)
{
    const int status = std::system((std::string(BPHI_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 14. determinism of the command line runner and the negative control
Outcome determinism()
{
    Check c;
    const auto dir = std::filesystem::temp_directory_path() / "bphi_acceptance";
    std::filesystem::create_directories(dir);
    const auto suite = dir / "suite.json";
    std::ofstream(suite) << R"({"experiment": "verify-suite", "seed": 1414})";
    const auto neg = dir / "negative.json";
    std::ofstream(neg) << R"({"experiment": "tailbound", "phi": "quadratic{d=1}", "dist": "gaussian{d=1}",)"
                       << R"( "norm": 0.25, "reps": 100000, "seed": 1415})";
    const auto a = dir / "a.csv";
    const auto b = dir / "b.csv";
    const int ea = run_cli("verify-suite " + suite.string() + " --out " + a.string());
    const int eb = run_cli("verify-suite " + suite.string() + " --out " + b.string());
    c.require(ea == 0 && eb == 0, "verify-suite exit codes " + std::to_string(ea) + "," + std::to_string(eb));
    const auto text = slurp(a);
    c.require(!text.empty() && text == slurp(b), "outputs differ between runs");
    const auto t1 = dir / "t1.csv";
    const int e1 = std::system(("OMP_NUM_THREADS=1 " + std::string(BPHI_CLI_PATH) + " verify-suite " +
                                suite.string() + " --out " + t1.string() + " 2>/dev/null")
                                   .c_str());
    c.require(WIFEXITED(e1) && WEXITSTATUS(e1) == 0 && slurp(t1) == text, "single-thread output differs");
    const int en = run_cli("tailbound " + neg.string() + " --out " + (dir / "neg.csv").string());
    c.require(en == 1, "negative control exit " + std::to_string(en));
    const auto rows = std::count(text.begin(), text.end(), '\n') - 1;
    std::filesystem::remove_all(dir);
    return c.outcome("verify-suite " + std::to_string(rows) + " rows byte-identical across runs and thread counts; "
                     "negative control exit " + std::to_string(en));
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"conjugate correctness", conjugate_correctness},
        {"Fenchel-Moreau involution", fenchel_moreau},
        {"natural-function recovery", natural_recovery},
        {"norm axioms", norm_axioms},
        {"Chernov domination", chernov_domination},
        {"min-coordinate bound", min_coordinate},
        {"Pythagoras sum rule", pythagoras},
        {"phi_n domination", phi_n_domination},
        {"sum-bound exponent", exponent_law},
        {"lower/upper sandwich", sandwich},
        {"Lambda2 checker", lambda2},
        {"moment norm and Luxemburg norm", moment_and_luxemburg},
        {"characterization verdicts", characterization},
        {"determinism", determinism}};
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && std::find(selected.begin(), selected.end(), id) == selected.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d %s: %s - %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
