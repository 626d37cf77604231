#include "wassheat/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "wassheat/calculus.hpp"
#include "wassheat/coupling.hpp"
#include "wassheat/heat_flow.hpp"
#include "wassheat/product_measure.hpp"

namespace wassheat {

namespace {

struct ScenarioSchema {
    std::vector<const char*> required;
    std::vector<const char*> optional;
};

const std::map<std::string, ScenarioSchema>& scenario_schemas() {
    static const std::map<std::string, ScenarioSchema> table = {
        {"eigencheck", {{}, {"cases"}}},
        {"heat", {{"coeffs", "measure"}, {"beta", "eps", "t", "paths", "zmax"}}},
        {"ito", {{"coeffs", "measure"}, {"beta", "eps", "s", "r", "paths", "steps"}}},
        {"recover", {{"functional", "k", "points"}, {"rtol"}}},
        {"ibp-spectral", {{"coeffs"}, {"coeffs_b", "tol"}}},
        {"pkr-duality", {{"phi", "psi"}, {"k", "R", "samples", "zmax"}}},
        {"pkr-ibp", {{"phi", "psi"}, {"k", "R", "samples", "zmax"}}},
        {"taylor", {{"kernel", "left", "right"}, {}}},
        {"w2", {{"left", "right"}, {"expect", "rtol"}}},
    };
    return table;
}

double num_or(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("config: \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

int int_or(const Json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(std::string("config: \"") + key + "\" must be an integer");
    return j.at(key).get<int>();
}

std::string str_at(const Json& j, const char* key) {
    if (!j.at(key).is_string())
        throw ConfigError(std::string("config: \"") + key + "\" must be a string");
    return j.at(key).get<std::string>();
}

// Domain constraints shared by parse_config (throwing) and validate_config
// (collecting). Returns human-readable violations.
std::vector<std::string> domain_violations(const std::string& scenario, const Json& j) {
    std::vector<std::string> out;
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) out.push_back(msg);
    };
    try {
        if (scenario == "eigencheck") {
            check(int_or(j, "cases", 100) >= 1, "cases must be >= 1");
        } else if (scenario == "heat") {
            check(num_or(j, "beta", 1.0) > 0.0, "beta must be > 0");
            check(num_or(j, "eps", 0.0) >= 0.0, "eps must be >= 0");
            check(num_or(j, "t", 0.5) >= 0.0, "t must be >= 0");
            check(int_or(j, "paths", 10000) >= 2, "paths must be >= 2");
            check(num_or(j, "zmax", 3.0) > 0.0, "zmax must be > 0");
        } else if (scenario == "ito") {
            check(num_or(j, "beta", 1.0) > 0.0, "beta must be > 0");
            check(num_or(j, "eps", 0.0) >= 0.0, "eps must be >= 0");
            const double s = num_or(j, "s", 0.1), r = num_or(j, "r", 0.5);
            check(s > 0.0 && r > s, "need 0 < s < r");
            check(int_or(j, "paths", 10000) >= 2, "paths must be >= 2");
            check(int_or(j, "steps", 128) >= 2, "steps must be >= 2");
        } else if (scenario == "recover") {
            const int k = int_or(j, "k", 1);
            check(k >= 1, "k must be >= 1");
            check(k <= kMaxOkArity,
                  "k = " + std::to_string(k) + " trips the Vandermonde/2^k guard (max " +
                      std::to_string(kMaxOkArity) + "; run refused)");
            check(num_or(j, "rtol", 1e-9) > 0.0, "rtol must be > 0");
        } else if (scenario == "ibp-spectral") {
            check(num_or(j, "tol", 1e-12) > 0.0, "tol must be > 0");
        } else if (scenario == "pkr-duality" || scenario == "pkr-ibp") {
            const int k = int_or(j, "k", 1);
            check(k >= 1, "k must be >= 1");
            check(k <= 5, "k = " + std::to_string(k) +
                              " trips the signed-term guard ((2^k-1)^2 terms; max 5)");
            check(num_or(j, "R", 1.0) > 0.0, "R must be > 0");
            check(int_or(j, "samples", 100000) >= 2, "samples must be >= 2");
            check(num_or(j, "zmax", 3.0) > 0.0, "zmax must be > 0");
        } else if (scenario == "w2") {
            check(num_or(j, "rtol", 1e-9) > 0.0, "rtol must be > 0");
        }
    } catch (const ConfigError& e) {
        out.push_back(e.what());
    }
    return out;
}

DiscreteMeasure load_atomic_measure(const std::string& path) {
    const SmoothedMeasure m = load_measure(path);
    if (m.variance > 0.0)
        throw ConfigError(path + ": this scenario requires a purely atomic measure "
                                 "(variance must be absent or 0)");
    return m.base;
}

double rel_err_of(double abs_err, const cplx& lhs, const cplx& rhs) {
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return (scale > 0.0) ? abs_err / scale : 0.0;
}

CheckRow make_row(std::string id, cplx lhs, cplx rhs, double tol, double stderr_ = 0.0,
                  double z = 0.0) {
    CheckRow row;
    row.id = std::move(id);
    row.lhs = lhs;
    row.rhs = rhs;
    row.abs_err = std::abs(lhs - rhs);
    row.rel_err = rel_err_of(row.abs_err, lhs, rhs);
    row.stderr_ = stderr_;
    row.z = z;
    row.pass = row.abs_err <= tol;
    return row;
}

// ------------------------------------------------------------------ scenarios

void run_eigencheck(const ExperimentConfig& cfg, Report& rep) {
    const int cases = int_or(cfg.raw, "cases", 100);
    RngStream gen(cfg.seed, 0);
    for (int i = 0; i < cases; ++i) {
        const int k = 1 + std::min(3, static_cast<int>(gen.uniform() * 4.0));
        const int d = 1 + std::min(2, static_cast<int>(gen.uniform() * 3.0));
        const double eps = (gen.uniform() < 0.5) ? 0.0 : 0.5;
        Mat xi(k, d);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < d; ++c) xi(r, c) = 1.5 * (2.0 * gen.uniform() - 1.0);
        const int n = 1 + std::min(5, static_cast<int>(gen.uniform() * 6.0));
        Mat atoms(n, d);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < d; ++c) atoms(r, c) = 2.0 * gen.uniform() - 1.0;
        Vec w(n);
        for (int r = 0; r < n; ++r) w[r] = 0.1 + gen.uniform();
        const DiscreteMeasure m = make_discrete(atoms, w);

        const ExponentialKernel phi(xi);
        const double lam = lambda_sq(xi, eps);
        const cplx lhs = laplacian_w(phi, m, eps);
        const cplx rhs = -lam * eval_F(phi, m);
        char id[64];
        std::snprintf(id, sizeof(id), "case%03d-k%d-d%d-eps%g", i, k, d, eps);
        rep.rows.push_back(make_row(id, lhs, rhs, 1e-10 * (1.0 + lam)));
    }
}

void run_heat(const ExperimentConfig& cfg, Report& rep) {
    const SpectralCoefficients A = load_coefficients(str_at(cfg.raw, "coeffs"));
    const DiscreteMeasure m = load_atomic_measure(str_at(cfg.raw, "measure"));
    FlowParams p{num_or(cfg.raw, "beta", 1.0), num_or(cfg.raw, "eps", 0.0)};
    const double t = num_or(cfg.raw, "t", 0.5);
    const int paths = int_or(cfg.raw, "paths", 10000);
    const double zmax = num_or(cfg.raw, "zmax", 3.0);

    for (const SemigroupCheckRow& src : semigroup_agreement(A, m, p, t, paths, cfg.seed)) {
        HeatRow row;
        row.id = src.id;
        row.closed_form = src.closed_form;
        row.mc_mean = src.mc_mean;
        row.mc_stderr = src.stderr_;
        row.z = src.z;
        row.n_paths = src.n_paths;
        row.pass = src.z <= zmax;
        rep.heat_rows.push_back(std::move(row));
    }
}

void run_ito(const ExperimentConfig& cfg, Report& rep) {
    const SpectralCoefficients A = load_coefficients(str_at(cfg.raw, "coeffs"));
    const DiscreteMeasure m = load_atomic_measure(str_at(cfg.raw, "measure"));
    FlowParams p{num_or(cfg.raw, "beta", 1.0), num_or(cfg.raw, "eps", 0.0)};
    const double s = num_or(cfg.raw, "s", 0.1);
    const double r = num_or(cfg.raw, "r", 0.5);
    const int paths = int_or(cfg.raw, "paths", 10000);
    const int steps = int_or(cfg.raw, "steps", 128);

    const PathwiseStats st = ito_residual(A, m, p, s, r, paths, steps, cfg.seed);
    CheckRow row;
    row.id = "ito-residual";
    row.lhs = st.mean;
    row.rhs = cplx{0.0, 0.0};
    row.abs_err = std::abs(st.mean);
    row.rel_err = 0.0;
    row.stderr_ = st.stderr_;
    row.z = st.z;
    row.pass = std::abs(st.mean) <= 3.0 * st.stderr_ + st.bias_estimate;
    rep.rows.push_back(std::move(row));

    CheckRow bias;  // informational: Euler bias proxy from step-halving
    bias.id = "euler-bias";
    bias.lhs = cplx{st.bias_estimate, 0.0};
    bias.pass = true;
    rep.rows.push_back(std::move(bias));
}

void run_recover(const ExperimentConfig& cfg, Report& rep) {
    const Json fj = parse_json_file(str_at(cfg.raw, "functional"));
    const GradedFunctional F = functional_from_json(fj);
    const int k = int_or(cfg.raw, "k", 1);
    if (k < 1 || k > F.max_degree)
        throw ConfigError("recover: k must be in [1, max_degree]");
    const double rtol = num_or(cfg.raw, "rtol", 1e-9);

    KernelPtr truth;  // known kernel of that degree, when present
    int d = -1;
    for (const auto& [deg, ker] : F.known_kernels) {
        if (deg == k) truth = ker;
        d = ker->dim();
    }
    if (d < 0) throw ConfigError("recover: functional file declares no kernels");

    const auto pts = points_from_json(parse_json_file(str_at(cfg.raw, "points")), k, d);
    for (size_t i = 0; i < pts.size(); ++i) {
        const cplx lhs = recover_kernel(F, k, pts[i]);
        const cplx rhs = truth ? truth->value(pts[i]) : cplx{0.0, 0.0};
        char id[32];
        std::snprintf(id, sizeof(id), "point-%03zu", i);
        rep.rows.push_back(make_row(id, lhs, rhs, rtol * (1.0 + std::abs(rhs))));
    }
}

void run_ibp_spectral(const ExperimentConfig& cfg, Report& rep) {
    const SpectralCoefficients A = load_coefficients(str_at(cfg.raw, "coeffs"));
    const bool self = !cfg.raw.contains("coeffs_b");
    const SpectralCoefficients B = self ? A : load_coefficients(str_at(cfg.raw, "coeffs_b"));
    const double tol = num_or(cfg.raw, "tol", 1e-12);

    const auto [lhs, rhs] = ibp_check(A, B);
    rep.rows.push_back(make_row("ibp", lhs, rhs, tol * (1.0 + std::abs(lhs))));

    if (self) {  // -<lap F; F> equals the mean-gradient norm, a nonnegative real
        const auto mg = mean_gradient_coefficients(A);
        const cplx nrm = hs_inner_vector(mg, mg, 0.0);
        CheckRow row = make_row("self-identity", -lhs, nrm, tol * (1.0 + std::abs(lhs)));
        row.pass = row.pass && (-lhs).real() >= -tol;
        rep.rows.push_back(std::move(row));
    }
}

void run_pkr(const ExperimentConfig& cfg, Report& rep) {
    const auto phi = load_kernel(str_at(cfg.raw, "phi"));
    const auto psi = load_kernel(str_at(cfg.raw, "psi"));
    BallProductSpec spec;
    spec.k = int_or(cfg.raw, "k", phi->arity());
    spec.dim = phi->dim();
    spec.R = num_or(cfg.raw, "R", 1.0);
    if (phi->arity() != spec.k || psi->arity() != spec.k)
        throw ConfigError("pkr: kernel arity does not match k");
    if (psi->dim() != spec.dim) throw ConfigError("pkr: kernel dimensions differ");
    const int samples = int_or(cfg.raw, "samples", 100000);
    const double zmax = num_or(cfg.raw, "zmax", 3.0);

    CheckRow row;
    if (cfg.scenario == "pkr-duality") {
        const DualityResult dr = duality_check(*phi, *psi, spec, samples, cfg.seed);
        row.id = "pkr-duality";
        row.lhs = dr.quadrature;
        row.rhs = dr.mc;
        row.stderr_ = dr.stderr_;
        row.z = dr.z;
    } else {
        const IbpMeasureResult ir = ibp_measure_check(*phi, *psi, spec, samples, cfg.seed);
        row.id = "pkr-ibp";
        row.lhs = ir.lhs;
        row.rhs = ir.rhs;
        row.stderr_ = ir.diff_stderr;
        row.z = ir.z;
    }
    row.abs_err = std::abs(row.lhs - row.rhs);
    row.rel_err = rel_err_of(row.abs_err, row.lhs, row.rhs);
    row.pass = row.z <= zmax;
    rep.rows.push_back(std::move(row));
}

void run_taylor(const ExperimentConfig& cfg, Report& rep) {
    const auto ker = load_kernel(str_at(cfg.raw, "kernel"));
    const DiscreteMeasure left = load_atomic_measure(str_at(cfg.raw, "left"));
    const DiscreteMeasure right = load_atomic_measure(str_at(cfg.raw, "right"));
    const OptimalCouplingResult oc = optimal_coupling(left, right);
    const TaylorFirstOrder t = taylor_first_order(*ker, left, right, oc.plan);

    CheckRow row;
    row.id = "taylor-remainder";
    row.lhs = cplx{t.remainder, 0.0};
    row.rhs = cplx{t.bound, 0.0};
    row.abs_err = t.remainder;
    row.rel_err = (t.bound > 0.0) ? t.remainder / t.bound : 0.0;
    row.pass = t.within_bound;
    rep.rows.push_back(std::move(row));
}

void run_w2(const ExperimentConfig& cfg, Report& rep) {
    const DiscreteMeasure left = load_atomic_measure(str_at(cfg.raw, "left"));
    const DiscreteMeasure right = load_atomic_measure(str_at(cfg.raw, "right"));
    const double w2 = w2_distance(left, right);

    CheckRow row;
    row.id = "w2";
    row.lhs = cplx{w2, 0.0};
    row.pass = true;
    if (cfg.raw.contains("expect")) {
        const double expect = num_or(cfg.raw, "expect", 0.0);
        const double rtol = num_or(cfg.raw, "rtol", 1e-9);
        row.rhs = cplx{expect, 0.0};
        row.abs_err = std::abs(w2 - expect);
        row.rel_err = rel_err_of(row.abs_err, row.lhs, row.rhs);
        row.pass = row.abs_err <= rtol * (1.0 + std::abs(expect));
    } else {
        row.rhs = row.lhs;
    }
    rep.rows.push_back(std::move(row));
}

}  // namespace

bool Report::all_pass() const {
    for (const CheckRow& r : rows)
        if (!r.pass) return false;
    for (const HeatRow& r : heat_rows)
        if (!r.pass) return false;
    return true;
}

ExperimentConfig parse_config(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
        j.at("schema_version").get<int>() != kConfigSchemaVersion)
        throw ConfigError("config: \"schema_version\" must be present and equal to " +
                          std::to_string(kConfigSchemaVersion));
    if (!j.contains("scenario")) throw ConfigError("config: missing \"scenario\"");
    const std::string scenario = str_at(j, "scenario");
    const auto& table = scenario_schemas();
    const auto it = table.find(scenario);
    if (it == table.end()) throw ConfigError("config: unknown scenario \"" + scenario + "\"");

    std::vector<const char*> required = it->second.required;
    std::vector<const char*> optional = it->second.optional;
    optional.insert(optional.end(), {"schema_version", "scenario", "seed", "out"});
    {
        std::set<std::string> allowed(optional.begin(), optional.end());
        for (const char* key : required) {
            allowed.insert(key);
            if (!j.contains(key))
                throw ConfigError("config(" + scenario + "): missing key \"" + key + "\"");
        }
        for (auto kv = j.begin(); kv != j.end(); ++kv)
            if (!allowed.count(kv.key()))
                throw ConfigError("config(" + scenario + "): unknown key \"" + kv.key() + "\"");
    }

    const auto violations = domain_violations(scenario, j);
    if (!violations.empty()) throw ConfigError("config(" + scenario + "): " + violations.front());

    ExperimentConfig out;
    out.scenario = scenario;
    out.raw = j;
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw ConfigError("config: \"seed\" must be a nonnegative integer");
        const int64_t s = j.at("seed").get<int64_t>();
        if (s < 0) throw ConfigError("config: \"seed\" must be a nonnegative integer");
        out.seed = static_cast<uint64_t>(s);
    }
    if (j.contains("out") && !j.at("out").is_string())
        throw ConfigError("config: \"out\" must be a string");
    return out;
}

Diagnostics validate_config(const Json& j) {
    Diagnostics out;
    ExperimentConfig cfg;
    try {
        cfg = parse_config(j);
    } catch (const ConfigError& e) {
        out.errors.push_back(e.what());
        // Even when structure fails, surface all domain violations we can.
        if (j.is_object() && j.contains("scenario") && j.at("scenario").is_string()) {
            for (const auto& v : domain_violations(j.at("scenario").get<std::string>(), j))
                if (!out.errors.front().ends_with(v)) out.errors.push_back(v);
        }
        return out;
    }
    if (!j.contains("seed"))
        out.warnings.push_back("seed missing; defaulted to " + std::to_string(kDefaultSeed));

    // Referenced files must open and parse.
    for (const char* key : {"coeffs", "coeffs_b", "measure", "functional", "points", "phi",
                            "psi", "kernel", "left", "right"}) {
        if (!cfg.raw.contains(key)) continue;
        try {
            parse_json_file(cfg.raw.at(key).get<std::string>());
        } catch (const Error& e) {
            out.errors.push_back(e.what());
        }
    }

    // Tensor-sum cost guard: n^k tuples per Laplacian term.
    if (cfg.scenario == "heat" || cfg.scenario == "ito") {
        try {
            const SpectralCoefficients A = load_coefficients(str_at(cfg.raw, "coeffs"));
            const DiscreteMeasure m = load_atomic_measure(str_at(cfg.raw, "measure"));
            const double cost = std::pow(static_cast<double>(std::max(1, m.size())),
                                         std::max(1, A.max_degree()));
            if (cost > kTensorGuard)
                out.warnings.push_back("atoms^degree = " + std::to_string(cost) +
                                       " exceeds the tensor guard " + std::to_string(kTensorGuard));
        } catch (const Error&) {
            // file problems already reported above
        }
    }
    return out;
}

Report run_scenario(const ExperimentConfig& cfg) {
    Report rep;
    rep.scenario = cfg.scenario;
    rep.inputs = cfg.raw;
    rep.seed = cfg.seed;
    rep.version = kVersion;

    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.scenario == "eigencheck") run_eigencheck(cfg, rep);
    else if (cfg.scenario == "heat") run_heat(cfg, rep);
    else if (cfg.scenario == "ito") run_ito(cfg, rep);
    else if (cfg.scenario == "recover") run_recover(cfg, rep);
    else if (cfg.scenario == "ibp-spectral") run_ibp_spectral(cfg, rep);
    else if (cfg.scenario == "pkr-duality" || cfg.scenario == "pkr-ibp") run_pkr(cfg, rep);
    else if (cfg.scenario == "taylor") run_taylor(cfg, rep);
    else if (cfg.scenario == "w2") run_w2(cfg, rep);
    else throw ConfigError("unknown scenario \"" + cfg.scenario + "\"");
    const auto t1 = std::chrono::steady_clock::now();
    rep.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rep;
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string report_csv(const Report& rep) {
    std::ostringstream os;
    if (rep.scenario == "heat") {
        os << "check_id,closed_form_re,closed_form_im,mc_mean_re,mc_mean_im,"
              "mc_stderr,z_score,n_paths,runtime_ms\n";
        for (const HeatRow& r : rep.heat_rows)
            os << r.id << ',' << g17(r.closed_form.real()) << ',' << g17(r.closed_form.imag())
               << ',' << g17(r.mc_mean.real()) << ',' << g17(r.mc_mean.imag()) << ','
               << g17(r.mc_stderr) << ',' << g17(r.z) << ',' << r.n_paths << ','
               << g17(rep.runtime_ms) << '\n';
    } else {
        os << "check_id,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,stderr,z,pass\n";
        for (const CheckRow& r : rep.rows)
            os << r.id << ',' << g17(r.lhs.real()) << ',' << g17(r.lhs.imag()) << ','
               << g17(r.rhs.real()) << ',' << g17(r.rhs.imag()) << ',' << g17(r.abs_err) << ','
               << g17(r.rel_err) << ',' << g17(r.stderr_) << ',' << g17(r.z) << ','
               << (r.pass ? 1 : 0) << '\n';
    }
    return os.str();
}

Json report_json(const Report& rep) {
    Json j;
    j["scenario"] = rep.scenario;
    j["version"] = rep.version;
    j["seed"] = rep.seed;
    j["runtime_ms"] = rep.runtime_ms;
    j["inputs"] = rep.inputs;
    j["all_pass"] = rep.all_pass();
    Json checks = Json::array();
    for (const CheckRow& r : rep.rows) {
        checks.push_back(Json{{"check_id", r.id},
                              {"lhs_re", r.lhs.real()},
                              {"lhs_im", r.lhs.imag()},
                              {"rhs_re", r.rhs.real()},
                              {"rhs_im", r.rhs.imag()},
                              {"abs_err", r.abs_err},
                              {"rel_err", r.rel_err},
                              {"stderr", r.stderr_},
                              {"z", r.z},
                              {"pass", r.pass}});
    }
    for (const HeatRow& r : rep.heat_rows) {
        checks.push_back(Json{{"check_id", r.id},
                              {"closed_form_re", r.closed_form.real()},
                              {"closed_form_im", r.closed_form.imag()},
                              {"mc_mean_re", r.mc_mean.real()},
                              {"mc_mean_im", r.mc_mean.imag()},
                              {"mc_stderr", r.mc_stderr},
                              {"z_score", r.z},
                              {"n_paths", r.n_paths},
                              {"pass", r.pass}});
    }
    j["checks"] = std::move(checks);
    return j;
}

void write_report_files(const Report& rep, const std::string& csv_path) {
    {
        std::ofstream out(csv_path);
        if (!out) throw ConfigError("cannot write " + csv_path);
        out << report_csv(rep);
    }
    std::string json_path = csv_path;
    const size_t dot = json_path.find_last_of('.');
    const size_t slash = json_path.find_last_of("/\\");
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        json_path.resize(dot);
    json_path += ".json";
    std::ofstream out(json_path);
    if (!out) throw ConfigError("cannot write " + json_path);
    out << report_json(rep).dump(2) << "\n";
}

GradedFunctional functional_from_json(const Json& j) {
    require_keys(j, {"kernels"}, {"max_degree"}, "functional");
    if (!j.at("kernels").is_array() || j.at("kernels").empty())
        throw ConfigError("functional.kernels: expected nonempty array");
    std::vector<std::pair<int, KernelPtr>> kernels;
    for (const Json& kj : j.at("kernels")) {
        require_keys(kj, {"degree", "kernel"}, {}, "functional.kernels[]");
        const int deg = kj.at("degree").get<int>();
        KernelPtr ker = kernel_from_json(kj.at("kernel"));
        if (ker->arity() != deg)
            throw ConfigError("functional: kernel arity != declared degree " +
                              std::to_string(deg));
        kernels.emplace_back(deg, std::move(ker));
    }
    GradedFunctional F = make_graded(std::move(kernels));
    if (j.contains("max_degree")) {
        const int n = j.at("max_degree").get<int>();
        if (n < F.max_degree)
            throw ConfigError("functional: max_degree smaller than a declared kernel degree");
        F.max_degree = n;
    }
    return F;
}

std::vector<Mat> points_from_json(const Json& j, int k, int d) {
    require_keys(j, {"points"}, {}, "points");
    if (!j.at("points").is_array() || j.at("points").empty())
        throw ConfigError("points: expected nonempty array");
    std::vector<Mat> out;
    for (const Json& pj : j.at("points")) {
        Mat x = mat_from_json(pj, "points[]");
        if (static_cast<int>(x.rows()) != k || static_cast<int>(x.cols()) != d)
            throw ConfigError("points: tuple shape must be " + std::to_string(k) + "x" +
                              std::to_string(d));
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace wassheat
