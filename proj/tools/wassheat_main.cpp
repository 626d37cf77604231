// ---------------------------------------------------------------------------
// wassheat: command line front-end for the experiment runner.
//
// Every scenario subcommand assembles a flat JSON config from the flags the
// user passed (runner defaults cover the rest) or loads one wholesale via
// --config; `validate` checks a config file without running it.
//
// Exit codes: 0 all checks pass, 1 numeric check failure, 2 config error.
// ---------------------------------------------------------------------------
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <wassheat/runner.hpp>

namespace ws = wassheat;

namespace {

struct SubcommandState {
    CLI::App* cmd = nullptr;
    ws::Json j;
    std::string config_path;

    // flag storage (only copied into j when the flag was actually given)
    std::string coeffs, coeffs_b, measure, functional, points, phi, psi, kernel;
    std::string left, right, mode, out;
    double beta = 0, eps = 0, t = 0, s = 0, r = 0, R = 0, zmax = 0, rtol = 0, tol = 0,
           expect = 0;
    int paths = 0, steps = 0, samples = 0, cases = 0, k = 0;
    uint64_t seed = 0;
};

void copy_set_flags(SubcommandState& st) {
    CLI::App* cmd = st.cmd;
    auto given = [cmd](const char* flag) {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    auto set_str = [&](const char* flag, const char* key, const std::string& v) {
        if (given(flag)) st.j[key] = v;
    };
    auto set_num = [&](const char* flag, const char* key, double v) {
        if (given(flag)) st.j[key] = v;
    };
    auto set_int = [&](const char* flag, const char* key, int v) {
        if (given(flag)) st.j[key] = v;
    };
    set_str("--coeffs", "coeffs", st.coeffs);
    set_str("--coeffs-b", "coeffs_b", st.coeffs_b);
    set_str("--measure", "measure", st.measure);
    set_str("--functional", "functional", st.functional);
    set_str("--points", "points", st.points);
    set_str("--phi", "phi", st.phi);
    set_str("--psi", "psi", st.psi);
    set_str("--kernel", "kernel", st.kernel);
    set_str("--left", "left", st.left);
    set_str("--right", "right", st.right);
    set_str("--out", "out", st.out);
    set_num("--beta", "beta", st.beta);
    set_num("--eps", "eps", st.eps);
    set_num("--t", "t", st.t);
    set_num("--s", "s", st.s);
    set_num("--r", "r", st.r);
    set_num("--R", "R", st.R);
    set_num("--zmax", "zmax", st.zmax);
    set_num("--rtol", "rtol", st.rtol);
    set_num("--tol", "tol", st.tol);
    set_num("--expect", "expect", st.expect);
    set_int("--paths", "paths", st.paths);
    set_int("--steps", "steps", st.steps);
    set_int("--samples", "samples", st.samples);
    set_int("--cases", "cases", st.cases);
    set_int("--k", "k", st.k);
    if (given("--seed")) st.j["seed"] = st.seed;
}

bool non_config_flags_given(const CLI::App* cmd) {
    for (const CLI::Option* opt : cmd->get_options()) {
        const std::string name = opt->get_name();
        if (name == "--config" || name == "--help" || name == "-h,--help") continue;
        if (opt->count() > 0) return true;
    }
    return false;
}

int run_from_json(const ws::Json& cfg_json) {
    const ws::ExperimentConfig cfg = ws::parse_config(cfg_json);
    const ws::Report rep = ws::run_scenario(cfg);

    if (cfg.raw.contains("out"))
        ws::write_report_files(rep, cfg.raw.at("out").get<std::string>());
    else
        std::cout << ws::report_csv(rep);

    if (cfg.scenario == "w2" && !rep.rows.empty())
        std::cerr << "w2 = " << ws::g17(rep.rows.front().lhs.real()) << "\n";

    int total = 0, passed = 0;
    for (const ws::CheckRow& r : rep.rows) {
        ++total;
        passed += r.pass ? 1 : 0;
    }
    for (const ws::HeatRow& r : rep.heat_rows) {
        ++total;
        passed += r.pass ? 1 : 0;
    }
    std::cerr << rep.scenario << ": " << passed << "/" << total << " checks passed\n";
    if (!rep.all_pass()) {
        if (rep.scenario == "heat")
            std::cerr << "hint: z-scores above the threshold usually mean an undersampled "
                         "Monte Carlo run; raise --paths\n";
        return 1;
    }
    return 0;
}

int run_subcommand(SubcommandState& st, const std::string& scenario) {
    if (!st.config_path.empty()) {
        if (non_config_flags_given(st.cmd))
            throw ws::ConfigError("--config cannot be combined with other flags");
        const ws::Json file_cfg = ws::parse_json_file(st.config_path);
        if (!file_cfg.is_object() || !file_cfg.contains("scenario") ||
            file_cfg.at("scenario") != st.j.at("scenario"))
            throw ws::ConfigError(st.config_path + ": scenario does not match the \"" +
                                  scenario + "\" subcommand");
        return run_from_json(file_cfg);
    }
    copy_set_flags(st);
    return run_from_json(st.j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wassheat: calculus and heat-flow checks on spaces of measures"};
    app.require_subcommand(1);

    std::map<std::string, SubcommandState> states;
    auto add_scenario = [&](const std::string& name, const std::string& scenario,
                            const std::string& desc) -> SubcommandState& {
        SubcommandState& st = states[name];
        st.cmd = app.add_subcommand(name, desc);
        st.j["schema_version"] = ws::kConfigSchemaVersion;
        st.j["scenario"] = scenario;
        st.cmd->add_option("--seed", st.seed, "master RNG seed");
        st.cmd->add_option("--out", st.out, "CSV output path (JSON report written next to it)");
        st.cmd->add_option("--config", st.config_path, "load the full config from a JSON file");
        return st;
    };

    {
        auto& st = add_scenario("eigencheck", "eigencheck",
                                "random-battery eigenfunction identity check");
        st.cmd->add_option("--cases", st.cases, "number of random cases (default 100)");
    }
    {
        auto& st = add_scenario("heat", "heat", "semigroup closed form vs Monte Carlo");
        st.cmd->add_option("--coeffs", st.coeffs, "spectral coefficients JSON");
        st.cmd->add_option("--measure", st.measure, "measure JSON (atomic)");
        st.cmd->add_option("--beta", st.beta, "noise intensity (default 1)");
        st.cmd->add_option("--eps", st.eps, "smoothing rate (default 0)");
        st.cmd->add_option("--t", st.t, "time horizon (default 0.5)");
        st.cmd->add_option("--paths", st.paths, "Monte Carlo paths (default 10000)");
        st.cmd->add_option("--zmax", st.zmax, "z-score pass threshold (default 3)");
    }
    {
        auto& st = add_scenario("ito", "ito", "pathwise drift-corrected increment check");
        st.cmd->add_option("--coeffs", st.coeffs, "spectral coefficients JSON");
        st.cmd->add_option("--measure", st.measure, "measure JSON (atomic)");
        st.cmd->add_option("--beta", st.beta, "noise intensity (default 1)");
        st.cmd->add_option("--eps", st.eps, "smoothing rate (default 0)");
        st.cmd->add_option("--s", st.s, "interval start (default 0.1)");
        st.cmd->add_option("--r", st.r, "interval end (default 0.5)");
        st.cmd->add_option("--paths", st.paths, "Monte Carlo paths (default 10000)");
        st.cmd->add_option("--steps", st.steps, "Euler steps (default 128)");
    }
    {
        auto& st = add_scenario("recover", "recover",
                                "kernel recovery from a graded functional");
        st.cmd->add_option("--functional", st.functional, "graded functional JSON");
        st.cmd->add_option("--k", st.k, "degree to recover");
        st.cmd->add_option("--points", st.points, "evaluation tuples JSON");
        st.cmd->add_option("--rtol", st.rtol, "relative tolerance (default 1e-9)");
    }
    {
        auto& st = add_scenario("ibp-spectral", "ibp-spectral",
                                "spectral integration by parts");
        st.cmd->add_option("--coeffs", st.coeffs, "spectral coefficients JSON (left)");
        st.cmd->add_option("--coeffs-b", st.coeffs_b,
                           "right operand JSON (defaults to the left one)");
        st.cmd->add_option("--tol", st.tol, "tolerance scale (default 1e-12)");
    }
    {
        auto& st = add_scenario("pkr", "pkr-duality",
                                "signed product-measure checks (duality / ibp)");
        st.cmd->add_option("--phi", st.phi, "first kernel JSON");
        st.cmd->add_option("--psi", st.psi, "second kernel JSON");
        st.cmd->add_option("--k", st.k, "arity (default: kernel arity)");
        st.cmd->add_option("--R", st.R, "ball radius (default 1)");
        st.cmd->add_option("--samples", st.samples, "Monte Carlo samples (default 100000)");
        st.cmd->add_option("--zmax", st.zmax, "z-score pass threshold (default 3)");
        st.cmd->add_option("--mode", st.mode, "duality | ibp (default duality)")
            ->check(CLI::IsMember({"duality", "ibp"}));
    }
    {
        auto& st = add_scenario("taylor", "taylor",
                                "first-order expansion remainder vs Hessian bound");
        st.cmd->add_option("--kernel", st.kernel, "kernel JSON (needs a Hessian bound)");
        st.cmd->add_option("--left", st.left, "base measure JSON");
        st.cmd->add_option("--right", st.right, "target measure JSON");
    }
    {
        auto& st = add_scenario("w2", "w2", "2-Wasserstein distance between two measures");
        st.cmd->add_option("--left", st.left, "first measure JSON");
        st.cmd->add_option("--right", st.right, "second measure JSON");
        st.cmd->add_option("--expect", st.expect, "expected distance (turns on pass/fail)");
        st.cmd->add_option("--rtol", st.rtol, "tolerance for --expect (default 1e-9)");
    }

    std::string validate_path;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "check a config file without running it");
    validate_cmd->add_option("--config", validate_path, "config JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate_cmd->parsed()) {
            const ws::Diagnostics diag = ws::validate_config(ws::parse_json_file(validate_path));
            for (const std::string& w : diag.warnings) std::cout << "warning: " << w << "\n";
            for (const std::string& e : diag.errors) std::cout << "error: " << e << "\n";
            if (diag.errors.empty() && diag.warnings.empty()) std::cout << "config ok\n";
            return diag.errors.empty() ? 0 : 2;
        }
        for (auto& [name, st] : states) {
            if (st.cmd->parsed()) {
                if (name == "pkr" && st.cmd->count("--mode") && st.mode == "ibp")
                    st.j["scenario"] = "pkr-ibp";
                return run_subcommand(st, st.j.at("scenario").get<std::string>());
            }
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const ws::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ws::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
