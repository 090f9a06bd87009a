#include "runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bphi/bounds.hpp"
#include "bphi/characterize.hpp"
#include "bphi/family_spec.hpp"
#include "bphi/norms.hpp"

namespace bphi::cli {

namespace {

using json = nlohmann::ordered_json;

// ---- config access -------------------------------------------------------

class Config {
public:
    explicit Config(const json& j) : j_(j) {}

    bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& at(const char* key) const { return j_.at(key); }

    double number(const char* key, double fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(key, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
        return x;
    }

    std::int64_t integer(const char* key, std::int64_t fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (v.is_number_integer()) return v.get<std::int64_t>();
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (x == std::floor(x) && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
        }
        throw ConfigError(key, "expected an integer");
    }

    std::string text(const char* key, const std::string& fallback) const
    {
        if (!has(key)) return fallback;
        const auto& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(key, "expected a string");
        return v.get<std::string>();
    }

    std::string required_text(const char* key) const
    {
        if (!has(key)) throw ConfigError(key, "missing required key");
        return text(key, "");
    }

private:
    const json& j_;
};

std::uint64_t seed_of(const Config& c)
{
    const auto s = c.integer("seed", 20240101);
    if (s < 0) throw ConfigError("seed", "must be nonnegative");
    return static_cast<std::uint64_t>(s);
}

std::size_t positive_count(const Config& c, const char* key, std::int64_t fallback, std::int64_t cap)
{
    const auto v = c.integer(key, fallback);
    if (v < 1 || v > cap) throw ConfigError(key, "must lie in [1, " + std::to_string(cap) + "]");
    return static_cast<std::size_t>(v);
}

std::vector<double> scalar_grid(const json& g, const std::string& path)
{
    const double from = g.value("from", 0.0);
    const double to = g.value("to", 0.0);
    const double step = g.value("step", 0.0);
    if (!(step > 0.0) || !(to >= from)) throw ConfigError(path, "grid needs from <= to and step > 0");
    const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError(path, "grid too large");
    std::vector<double> out;
    for (long i = 0; i < count; ++i) out.push_back(from + static_cast<double>(i) * step);
    return out;
}

// Points: list of scalars t (meaning t * 1), list of d-vectors, or a scalar grid.
std::vector<Vector> points_of(const Config& c, const char* key, int d, const std::vector<double>& fallback)
{
    std::vector<Vector> out;
    if (!c.has(key)) {
        for (double t : fallback) out.push_back(Vector::Constant(d, t));
        return out;
    }
    const auto& v = c.at(key);
    if (v.is_object()) {
        for (double t : scalar_grid(v, key)) out.push_back(Vector::Constant(d, t));
        return out;
    }
    if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a grid object or a nonempty list");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = std::string(key) + "[" + std::to_string(i) + "]";
        if (v[i].is_number()) {
            out.push_back(Vector::Constant(d, v[i].get<double>()));
        } else if (v[i].is_array()) {
            if (static_cast<int>(v[i].size()) != d) throw ConfigError(p, "vector length must equal the dimension");
            Vector x(d);
            for (int j = 0; j < d; ++j) {
                if (!v[i][static_cast<std::size_t>(j)].is_number()) throw ConfigError(p, "expected numbers");
                x[j] = v[i][static_cast<std::size_t>(j)].get<double>();
            }
            out.push_back(x);
        } else {
            throw ConfigError(p, "expected a number or a vector");
        }
    }
    return out;
}

YoungFunction phi_of(const Config& c)
{
    return young_from_spec(c.required_text("phi"), "phi");
}

VectorDistribution dist_of(const Config& c)
{
    return distribution_from_spec(c.required_text("dist"), "dist");
}

void require_same_dimension(const YoungFunction& phi, const VectorDistribution& dist)
{
    if (phi.dimension() != dist.dimension()) {
        throw ConfigError("dist", "dimension " + std::to_string(dist.dimension()) + " does not match phi dimension " +
                                      std::to_string(phi.dimension()));
    }
}

void add_vector(Record& r, const char* prefix, const Vector& v)
{
    for (Eigen::Index j = 0; j < v.size(); ++j) r.add(prefix + std::to_string(j + 1), v[j]);
}

std::string vector_text(const Vector& v)
{
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (Eigen::Index j = 0; j < v.size(); ++j) os << (j ? ";" : "") << v[j];
    os << ']';
    return os.str();
}

std::string order_text(const std::vector<int>& k)
{
    std::string s = "(";
    for (std::size_t j = 0; j < k.size(); ++j) s += (j ? "," : "") + std::to_string(k[j]);
    return s + ")";
}

ProbePlan plan_of(const Config& c)
{
    ProbePlan plan;
    plan.tolerance = c.number("tol", plan.tolerance);
    if (!(plan.tolerance > 0.0 && plan.tolerance < 1.0)) throw ConfigError("tol", "must lie in (0, 1)");
    plan.r_max = c.number("r_max", plan.r_max);
    return plan;
}

Record norm_record(std::uint64_t seed, const std::string& phi, const std::string& dist, const NormEstimate& e)
{
    Record r;
    r.add("seed", static_cast<std::int64_t>(seed))
        .add("phi", phi)
        .add("dist", dist)
        .add("space", e.space)
        .add("value", e.value)
        .add("lo", e.lo)
        .add("hi", e.hi)
        .add("residual", e.residual)
        .add("trust_flags", static_cast<std::int64_t>(e.trust_flags))
        .add("mc_width", e.mc_width)
        .add("exceeds_cap", e.exceeds_cap)
        .add("probe_plan", e.probe_plan);
    return r;
}

// Verdict of one bound against an empirical tail: certification only where
// the predicted probability is resolvable by the Monte Carlo sample.
std::string tail_verdict(double bound, double slack_bound, double empirical, double width, std::size_t reps)
{
    if (bound < 10.0 / static_cast<double>(reps)) return "unresolved";
    return std::max(bound, slack_bound) >= empirical - 3.0 * width ? "pass" : "violation";
}

// ---- experiments ---------------------------------------------------------

RunResult run_conjugate(const Config& c)
{
    const auto phi = phi_of(c);
    ConjugateEvaluator::Settings st;
    st.grid_points = static_cast<int>(c.integer("grid_points", st.grid_points));
    st.refinement_passes = static_cast<int>(c.integer("refinement_passes", st.refinement_passes));
    const ConjugateEvaluator star(phi, st);
    const auto seed = seed_of(c);
    RunResult out;
    for (const auto& y : points_of(c, "points", phi.dimension(), {0.0, 0.5, 1.0, 1.5, 2.0})) {
        const auto v = star(y);
        Record r;
        r.add("seed", static_cast<std::int64_t>(seed)).add("phi", phi.spec());
        add_vector(r, "y", y);
        r.add("phi_star", v.value).add("slack", v.slack).add("diverged", v.diverged).add("method", v.method);
        out.records.push_back(std::move(r));
    }
    return out;
}

RunResult run_norm(const Config& c)
{
    const auto phi = phi_of(c);
    const auto dist = dist_of(c);
    require_same_dimension(phi, dist);
    const auto seed = seed_of(c);
    const auto n = positive_count(c, "n", 100000, 10000000);
    const auto space = c.text("space", "all");
    if (space != "bphi" && space != "gls" && space != "orlicz" && space != "all") {
        throw ConfigError("space", "expected one of bphi, gls, orlicz, all");
    }
    const auto plan = plan_of(c);
    const auto s = sample(dist, n, seed);
    RunResult out;
    out.format = Format::json;
    if (space == "bphi" || space == "all") {
        out.records.push_back(
            norm_record(seed, phi.spec(), dist.tag(), bphi_norm(empirical_natural(natural_function(s)), phi, plan)));
    }
    if (space == "gls" || space == "all") {
        const auto e = gls_norm_vector([&](const Vector& r) { return vector_moment(s, r).value; }, phi,
                                       default_r_grid(phi.dimension()));
        out.records.push_back(norm_record(seed, phi.spec(), dist.tag(), e));
    }
    if (space == "orlicz" || space == "all") {
        out.records.push_back(
            norm_record(seed, phi.spec(), dist.tag(), luxemburg_norm(s, OrliczFunction(phi), plan.tolerance)));
    }
    return out;
}

RunResult run_tailbound(const Config& c)
{
    const auto phi = phi_of(c);
    const auto dist = dist_of(c);
    require_same_dimension(phi, dist);
    const auto seed = seed_of(c);
    const auto reps = positive_count(c, "reps", 100000, 10000000);
    double norm = 0.0;
    std::string norm_source = "fixed";
    if (c.has("norm")) {
        norm = c.number("norm", 0.0);
        if (!(norm > 0.0)) throw ConfigError("norm", "must be positive");
    } else {
        norm = bphi_norm(exact_natural(dist), phi, plan_of(c)).value;
        norm_source = "fitted";
        if (!(norm > 0.0)) throw ConfigError("dist", "fitted norm is zero");
    }
    const auto s = sample(dist, reps, seed);
    RunResult out;
    for (const auto& x : points_of(c, "x", phi.dimension(), scalar_grid(json{{"from", 0.5}, {"to", 4.0}, {"step", 0.5}}, "x"))) {
        if (!(x.array() >= 0.0).all()) throw ConfigError("x", "points must be nonnegative");
        const auto b = chernov_bound(phi, norm, x);
        const auto e = tail_function(s, x);
        const auto verdict = tail_verdict(b.bound, b.bound, e.value, e.half_width, reps);
        out.violation = out.violation || verdict == "violation";
        Record r;
        r.add("seed", static_cast<std::int64_t>(seed)).add("phi", phi.spec()).add("dist", dist.tag());
        add_vector(r, "x", x);
        r.add("norm", norm)
            .add("norm_source", norm_source)
            .add("bound", b.bound)
            .add("slack", b.slack)
            .add("empirical", e.value)
            .add("width", e.half_width)
            .add("verdict", verdict);
        out.records.push_back(std::move(r));
    }
    return out;
}

std::vector<int> n_set_of(const Config& c)
{
    std::vector<int> out;
    if (!c.has("n_set")) return {1, 2, 4, 8, 16};
    const auto& v = c.at("n_set");
    if (!v.is_array() || v.empty()) throw ConfigError("n_set", "expected a nonempty list of sizes");
    for (const auto& e : v) {
        if (!e.is_number_integer() || e.get<std::int64_t>() < 1 || e.get<std::int64_t>() > 100000) {
            throw ConfigError("n_set", "sizes must be integers in [1, 100000]");
        }
        out.push_back(static_cast<int>(e.get<std::int64_t>()));
    }
    return out;
}

RunResult run_sumbound(const Config& c)
{
    const auto phi = phi_of(c);
    const auto dist = dist_of(c);
    require_same_dimension(phi, dist);
    const auto seed = seed_of(c);
    const auto reps = positive_count(c, "reps", 20000, 10000000);
    const auto ns = n_set_of(c);
    const auto trials = static_cast<int>(positive_count(c, "lambda2_trials", 10000, 10000000));
    const auto cert = check_lambda2(phi, trials, 1e-9, seed);
    if (!cert.holds) throw ConfigError("phi", "the Lambda2 condition fails, so the sum rule does not apply");
    const double component = c.has("norm") ? c.number("norm", 1.0)
                                           : bphi_norm(exact_natural(dist), phi, plan_of(c)).value;
    if (!(component > 0.0)) throw ConfigError("norm", "component norm must be positive");
    const auto xs = points_of(c, "x", phi.dimension(), {1.0, 1.5, 2.0});
    RunResult out;
    for (int n : ns) {
        const auto spec = SumSpec::iid(component, n);
        const auto sums = sample_normalized_sums(dist, n, reps, seed);
        for (const auto& x : xs) {
            if (!(x.array() >= 0.0).all()) throw ConfigError("x", "points must be nonnegative");
            const auto b = sum_bound(spec, phi, cert, x);
            const auto e = tail_function(sums, x);
            const auto verdict = tail_verdict(b.bound, b.bound, e.value, e.half_width, reps);
            out.violation = out.violation || verdict == "violation";
            Record r;
            r.add("seed", static_cast<std::int64_t>(seed))
                .add("phi", phi.spec())
                .add("dist", dist.tag())
                .add("n", static_cast<std::int64_t>(n));
            add_vector(r, "x", x);
            r.add("sigma", spec.sigma())
                .add("bound", b.bound)
                .add("empirical", e.value)
                .add("width", e.half_width)
                .add("verdict", verdict);
            out.records.push_back(std::move(r));
        }
    }
    return out;
}

Box box_of(const Config& c, int d)
{
    if (!c.has("box")) return Box::cube(d, 0.0, 1.0);
    const auto& v = c.at("box");
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        const double lo = v[0].get<double>();
        const double hi = v[1].get<double>();
        if (!(hi >= lo)) throw ConfigError("box", "needs lo <= hi");
        return Box::cube(d, lo, hi);
    }
    if (v.is_object() && v.contains("lo") && v.contains("hi")) {
        Box b{Vector(d), Vector(d)};
        for (const char* key : {"lo", "hi"}) {
            const auto& a = v.at(key);
            if (!a.is_array() || static_cast<int>(a.size()) != d) {
                throw ConfigError(std::string("box.") + key, "expected a vector of the function dimension");
            }
            for (int j = 0; j < d; ++j) (key[0] == 'l' ? b.lo : b.hi)[j] = a[static_cast<std::size_t>(j)].get<double>();
        }
        if (!(b.hi.array() >= b.lo.array()).all()) throw ConfigError("box", "needs lo <= hi");
        return b;
    }
    throw ConfigError("box", "expected [lo, hi] or {\"lo\": [...], \"hi\": [...]}");
}

RunResult run_characterize(const Config& c)
{
    const auto field = field_from_spec(c.required_text("function"), "function");
    StencilSettings st;
    st.k_max = static_cast<int>(c.integer("kmax", st.k_max));
    if (st.k_max < 0 || st.k_max > 8) throw ConfigError("kmax", "must lie in [0, 8]");
    st.grid_points = static_cast<int>(positive_count(c, "grid_points", st.grid_points, 65));
    const Box box = box_of(c, field.dimension);
    const auto seed = seed_of(c);
    MonotonicityResult res;
    std::string eps_text = "absolute";
    if (c.has("eps")) {
        const auto eps = sign_vector_from_text(c.text("eps", ""), "eps");
        if (eps.dimension() != field.dimension) throw ConfigError("eps", "length must equal the function dimension");
        res = check_octant_monotonic(field.f, eps, box, st);
        eps_text = eps.to_string();
    } else {
        res = check_absolutely_monotonic(field.f, box, st);
    }
    Record r;
    r.add("seed", static_cast<std::int64_t>(seed))
        .add("function", field.spec)
        .add("eps", eps_text)
        .add("kmax", static_cast<std::int64_t>(st.k_max))
        .add("verdict", to_string(res.verdict))
        .add("order", res.verdict == Verdict::consistent ? std::string("") : order_text(res.order))
        .add("point", res.verdict == Verdict::consistent ? std::string("") : vector_text(res.point))
        .add("difference", res.difference)
        .add("error_estimate", res.error_estimate)
        .add("stencils", static_cast<std::int64_t>(res.stencils_checked));
    RunResult out;
    out.records.push_back(std::move(r));
    return out;
}

RunResult run_equivalence(const Config& c)
{
    const auto phi = phi_of(c);
    const auto dist = dist_of(c);
    require_same_dimension(phi, dist);
    const auto seed = seed_of(c);
    const auto n = positive_count(c, "n", 100000, 10000000);
    double band_lo = 1.0 / 50.0;
    double band_hi = 50.0;
    if (c.has("band")) {
        const auto& b = c.at("band");
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number() ||
            !(b[0].get<double>() > 0.0 && b[1].get<double>() >= b[0].get<double>())) {
            throw ConfigError("band", "expected [lo, hi] with 0 < lo <= hi");
        }
        band_lo = b[0].get<double>();
        band_hi = b[1].get<double>();
    }
    const auto s = sample(dist, n, seed);
    const auto rep = equivalence_report(s, phi, plan_of(c), band_lo, band_hi);
    RunResult out;
    out.format = Format::json;
    for (const auto* e : {&rep.bphi, &rep.gls, &rep.orlicz}) out.records.push_back(norm_record(seed, phi.spec(), dist.tag(), *e));
    Record r;
    r.add("seed", static_cast<std::int64_t>(seed))
        .add("phi", phi.spec())
        .add("dist", dist.tag())
        .add("ratio_bphi_gls", rep.ratio_bphi_gls)
        .add("ratio_bphi_orlicz", rep.ratio_bphi_orlicz)
        .add("ratio_gls_orlicz", rep.ratio_gls_orlicz)
        .add("ratios_in_band", rep.ratios_in_band)
        .add("non_member", rep.non_member)
        .add("note", rep.note);
    out.records.push_back(std::move(r));
    return out;
}

std::vector<std::string> text_list(const Config& c, const char* key, std::vector<std::string> fallback)
{
    if (!c.has(key)) return fallback;
    const auto& v = c.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError(key, "expected a nonempty list of specs");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_string()) throw ConfigError(std::string(key) + "[" + std::to_string(i) + "]", "expected a spec string");
        out.push_back(v[i].get<std::string>());
    }
    return out;
}

RunResult run_verify_suite(const Config& c)
{
    const auto d = static_cast<int>(c.integer("d", 2));
    if (d < 1 || d > 4) throw ConfigError("d", "must lie in [1, 4]");
    const std::string ds = std::to_string(d);
    const auto dists = text_list(c, "dists", {"gaussian{d=" + ds + "}", "rademacher{scale=1,d=" + ds + "}",
                                              "weibull{p=4,scale=1,d=" + ds + "}"});
    const auto phis = text_list(c, "phis", {"quadratic{d=" + ds + "}", "power{p=4,c=1,d=" + ds + "}"});
    const auto seed = seed_of(c);
    const auto reps = positive_count(c, "reps", 100000, 10000000);
    const auto xs = points_of(c, "x", d, scalar_grid(json{{"from", 0.5}, {"to", 4.0}, {"step", 0.5}}, "x"));
    const auto plan = plan_of(c);
    RunResult out;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        const auto dist = distribution_from_spec(dists[i], "dists[" + std::to_string(i) + "]");
        const auto s = sample(dist, reps, seed + i);
        for (std::size_t k = 0; k < phis.size(); ++k) {
            const auto phi = young_from_spec(phis[k], "phis[" + std::to_string(k) + "]");
            require_same_dimension(phi, dist);
            const auto fitted = bphi_norm(exact_natural(dist), phi, plan);
            for (const auto& x : xs) {
                const auto b = chernov_bound(phi, fitted.value, x);
                const auto e = tail_function(s, x);
                const auto verdict = tail_verdict(b.bound, b.bound, e.value, e.half_width, reps);
                out.violation = out.violation || verdict == "violation";
                Record r;
                r.add("seed", static_cast<std::int64_t>(seed + i)).add("dist", dist.tag()).add("phi", phi.spec());
                add_vector(r, "x", x);
                r.add("norm", fitted.value)
                    .add("bound", b.bound)
                    .add("empirical", e.value)
                    .add("width", e.half_width)
                    .add("verdict", verdict);
                out.records.push_back(std::move(r));
            }
        }
    }
    return out;
}

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_cell(const Field& f)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else {
                if (v.find_first_of(",\"\n") == std::string::npos) return v;
                std::string q = "\"";
                for (char ch : v) {
                    if (ch == '"') q += '"';
                    q += ch;
                }
                return q + "\"";
            }
        },
        f);
}

json field_json(const Field& f)
{
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) return json(format_double(v));
                return json(v);
            } else {
                return json(v);
            }
        },
        f);
}

void write_output(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output path '" + path + "'");
    out << text;
    if (!out) throw IoError("failed writing output path '" + path + "'");
}

}  // namespace

RunResult run(const std::string& experiment, const json& config)
{
    if (!config.is_object()) throw ConfigError("<root>", "config must be a JSON object");
    const Config c(config);
    if (c.has("experiment") && c.text("experiment", "") != experiment) {
        throw ConfigError("experiment", "config is for '" + c.text("experiment", "") + "', not '" + experiment + "'");
    }
    RunResult out;
    if (experiment == "conjugate") out = run_conjugate(c);
    else if (experiment == "norm") out = run_norm(c);
    else if (experiment == "tailbound") out = run_tailbound(c);
    else if (experiment == "sumbound") out = run_sumbound(c);
    else if (experiment == "characterize") out = run_characterize(c);
    else if (experiment == "equivalence") out = run_equivalence(c);
    else if (experiment == "verify-suite") out = run_verify_suite(c);
    else throw ConfigError("experiment", "unknown experiment '" + experiment + "'");
    if (c.has("format")) {
        const auto f = c.text("format", "");
        if (f == "csv") out.format = Format::csv;
        else if (f == "json") out.format = Format::json;
        else throw ConfigError("format", "expected csv or json");
    }
    return out;
}

std::string emit_csv(const std::vector<Record>& records)
{
    if (records.empty()) throw Error("emit_csv: no records");
    // header: union of the keys in first-seen order; absent cells stay empty
    std::vector<std::string> head;
    for (const auto& r : records) {
        for (const auto& [k, v] : r.fields) {
            if (std::find(head.begin(), head.end(), k) == head.end()) head.push_back(k);
        }
    }
    std::string text;
    for (std::size_t i = 0; i < head.size(); ++i) text += (i ? "," : "") + head[i];
    text += '\n';
    for (const auto& r : records) {
        for (std::size_t i = 0; i < head.size(); ++i) {
            if (i) text += ',';
            for (const auto& [k, v] : r.fields) {
                if (k == head[i]) {
                    text += csv_cell(v);
                    break;
                }
            }
        }
        text += '\n';
    }
    return text;
}

std::string emit_json(const std::vector<Record>& records)
{
    if (records.empty()) throw Error("emit_json: no records");
    json doc;
    doc["schema"] = kSchema;
    doc["records"] = json::array();
    for (const auto& r : records) {
        json o = json::object();
        for (const auto& [k, v] : r.fields) o[k] = field_json(v);
        doc["records"].push_back(std::move(o));
    }
    return doc.dump(2) + "\n";
}

std::vector<Record> parse_json(const std::string& text)
{
    const auto doc = json::parse(text);
    if (!doc.contains("schema") || doc.at("schema") != kSchema) throw Error("parse_json: unknown schema");
    std::vector<Record> out;
    for (const auto& o : doc.at("records")) {
        Record r;
        for (const auto& [k, v] : o.items()) {
            if (v.is_boolean()) r.add(k, v.get<bool>());
            else if (v.is_number_integer()) r.add(k, v.get<std::int64_t>());
            else if (v.is_number()) r.add(k, v.get<double>());
            else if (v.is_string()) {
                const auto s = v.get<std::string>();
                if (s == "inf") r.add(k, std::numeric_limits<double>::infinity());
                else if (s == "-inf") r.add(k, -std::numeric_limits<double>::infinity());
                else r.add(k, s);
            } else {
                throw Error("parse_json: unsupported value for key " + k);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"bphi: B(phi) norms, conjugates and certified tail bounds"};
    app.require_subcommand(1, 1);

    struct Options {
        std::string config_path, out, format, phi, dist, space, x, n_set, function, eps, box;
        std::int64_t n = -1, reps = -1, kmax = -1;
        std::int64_t seed = -1;
        double tol = -1.0;
    } o;

    const std::vector<std::string> names{"conjugate", "norm",        "tailbound",   "sumbound",
                                         "characterize", "equivalence", "verify-suite"};
    const std::map<std::string, std::string> about{
        {"conjugate", "numerical Young-Fenchel conjugate at a list of points"},
        {"norm", "B(phi), moment and Luxemburg norms of a sample"},
        {"tailbound", "Chernov tail bounds against Monte Carlo tails"},
        {"sumbound", "bounds for normalized sums against Monte Carlo tails"},
        {"characterize", "finite-difference monotonicity verdicts"},
        {"equivalence", "the three norms of one sample and their ratios"},
        {"verify-suite", "bound domination over distributions x Young functions"}};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("config", o.config_path, "JSON config file");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--format", o.format, "csv or json");
        sub->add_option("--seed", o.seed, "random seed (default: BPHI_SEED or the config)");
        if (name == "norm" || name == "tailbound" || name == "sumbound" || name == "equivalence" ||
            name == "conjugate") {
            sub->add_option("--phi", o.phi, "Young function spec");
        }
        if (name == "norm" || name == "tailbound" || name == "sumbound" || name == "equivalence") {
            sub->add_option("--dist", o.dist, "distribution spec");
            sub->add_option("--tol", o.tol, "relative bisection tolerance");
        }
        if (name == "norm" || name == "equivalence") sub->add_option("--n", o.n, "sample size");
        if (name == "norm") sub->add_option("--space", o.space, "bphi, gls, orlicz or all");
        if (name == "tailbound" || name == "sumbound" || name == "verify-suite") {
            sub->add_option("--x", o.x, "points: 'from:to:step' or 't1,t2,...' (x = t * 1)");
            sub->add_option("--reps", o.reps, "Monte Carlo replicates");
        }
        if (name == "sumbound") sub->add_option("--n-set", o.n_set, "comma-separated summand counts");
        if (name == "characterize") {
            sub->add_option("--function", o.function, "function spec");
            sub->add_option("--eps", o.eps, "sign pattern such as +- or 1,-1");
            sub->add_option("--kmax", o.kmax, "largest total difference order");
            sub->add_option("--box", o.box, "'lo,hi' cube");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::string experiment = app.get_subcommands().front()->get_name();

    try {
        json config = json::object();
        if (!o.config_path.empty()) {
            std::ifstream in(o.config_path);
            if (!in) throw IoError("cannot read config '" + o.config_path + "'");
            try {
                config = json::parse(in);
            } catch (const json::parse_error& e) {
                throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
            }
        }
        if (const char* env = std::getenv("BPHI_SEED"); env && !config.contains("seed")) {
            try {
                config["seed"] = std::stoll(env);
            } catch (const std::exception&) {
                throw ConfigError("BPHI_SEED", "expected an integer");
            }
        }
        if (o.seed >= 0) config["seed"] = o.seed;
        if (!o.phi.empty()) config["phi"] = o.phi;
        if (!o.dist.empty()) config["dist"] = o.dist;
        if (!o.space.empty()) config["space"] = o.space;
        if (!o.function.empty()) config["function"] = o.function;
        if (!o.eps.empty()) config["eps"] = o.eps;
        if (!o.format.empty()) config["format"] = o.format;
        if (o.n >= 0) config["n"] = o.n;
        if (o.reps >= 0) config["reps"] = o.reps;
        if (o.kmax >= 0) config["kmax"] = o.kmax;
        if (o.tol >= 0.0) config["tol"] = o.tol;
        auto split = [](const std::string& s) {
            std::vector<std::string> parts;
            std::stringstream ss(s);
            std::string p;
            while (std::getline(ss, p, ',')) parts.push_back(p);
            return parts;
        };
        auto to_double = [](const std::string& s, const char* key) {
            try {
                std::size_t used = 0;
                const double v = std::stod(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return v;
            } catch (const std::exception&) {
                throw ConfigError(key, "expected a number, got '" + s + "'");
            }
        };
        if (!o.x.empty()) {
            if (o.x.find(':') != std::string::npos) {
                std::vector<double> v;
                std::stringstream ss(o.x);
                std::string p;
                while (std::getline(ss, p, ':')) v.push_back(to_double(p, "x"));
                if (v.size() != 3) throw ConfigError("x", "expected from:to:step");
                config["x"] = json{{"from", v[0]}, {"to", v[1]}, {"step", v[2]}};
            } else {
                json arr = json::array();
                for (const auto& p : split(o.x)) arr.push_back(to_double(p, "x"));
                config["x"] = arr;
            }
        }
        if (!o.n_set.empty()) {
            json arr = json::array();
            for (const auto& p : split(o.n_set)) arr.push_back(static_cast<std::int64_t>(to_double(p, "n_set")));
            config["n_set"] = arr;
        }
        if (!o.box.empty()) {
            const auto parts = split(o.box);
            if (parts.size() != 2) throw ConfigError("box", "expected lo,hi");
            config["box"] = json::array({to_double(parts[0], "box"), to_double(parts[1], "box")});
        }

        const auto result = run(experiment, config);
        const std::string text = result.format == Format::json ? emit_json(result.records) : emit_csv(result.records);
        write_output(o.out.empty() ? Config(config).text("out", "") : o.out, text);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "bphi " << experiment << ": " << result.records.size() << " records, "
                  << (result.violation ? "VIOLATION" : "all verdicts pass") << ", wall " << secs << " s\n";
        return result.violation ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.what() << '\n';
        return 2;
    } catch (const SpecError& e) {
        std::cerr << "config error at " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace bphi::cli
