#pragma once

// ---------------------------------------------------------------------------
// Configuration-driven experiment runner: binds the calculus / spectral /
// heat-flow / reconstruction / product-measure modules to flat JSON configs,
// executes one named scenario, and emits CSV + JSON reports.
//
// Config contract (fail-closed): a flat JSON object with
//   "schema_version": 1               (required)
//   "scenario": <id>                  (required)
//   "seed": <uint>                    (optional, defaulted)
//   "out": <csv path>                 (optional)
// plus scenario-specific keys; unknown keys are rejected.
//
// Exit-code contract enforced by the CLI wrapper:
//   0 = all checks pass, 1 = numeric check failure, 2 = config error.
// ---------------------------------------------------------------------------

#include <string>
#include <vector>

#include "wassheat/reconstruction.hpp"
#include "wassheat/serialize.hpp"

namespace wassheat {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr uint64_t kDefaultSeed = 12345;

// One row of a generic check report (every scenario except `heat`).
struct CheckRow {
    std::string id;
    cplx lhs{0.0, 0.0};
    cplx rhs{0.0, 0.0};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double stderr_ = 0.0;
    double z = 0.0;
    bool pass = false;
};

// One row of the heat-scenario report (closed form vs Monte Carlo).
struct HeatRow {
    std::string id;
    cplx closed_form{0.0, 0.0};
    cplx mc_mean{0.0, 0.0};
    double mc_stderr = 0.0;
    double z = 0.0;
    int n_paths = 0;
    bool pass = false;
};

struct Report {
    std::string scenario;
    Json inputs;  // echo of the parsed config
    uint64_t seed = 0;
    std::string version;
    double runtime_ms = 0.0;
    std::vector<CheckRow> rows;
    std::vector<HeatRow> heat_rows;  // populated by the heat scenario only

    bool all_pass() const;
};

struct ExperimentConfig {
    std::string scenario;
    uint64_t seed = kDefaultSeed;
    Json raw;  // full validated config
};

// Structural + domain validation; throws ConfigError on the first violation.
ExperimentConfig parse_config(const Json& j);

// Non-throwing validation: collects hard errors and warnings (defaulted seed,
// guard limits that the run would trip) without executing anything.
struct Diagnostics {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};
Diagnostics validate_config(const Json& j);

Report run_scenario(const ExperimentConfig& cfg);

// CSV emission. The heat scenario uses the wide Monte Carlo schema
//   check_id,closed_form_re,closed_form_im,mc_mean_re,mc_mean_im,
//   mc_stderr,z_score,n_paths,runtime_ms
// (runtime_ms = whole-scenario wall time, the one non-deterministic column);
// every other scenario uses
//   check_id,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,stderr,z,pass
// with doubles printed via "%.17g" so reruns are byte-identical.
std::string report_csv(const Report& rep);
Json report_json(const Report& rep);

// Writes the CSV to `csv_path` and the JSON report next to it (extension
// replaced by .json, or appended when there is none).
void write_report_files(const Report& rep, const std::string& csv_path);

// "%.17g" double formatting shared by all emitters.
std::string g17(double v);

// Graded-functional input file: {"kernels":[{"degree":k,"kernel":{...}},...],
// "max_degree": N?}.
GradedFunctional functional_from_json(const Json& j);

// Tuple list input file: {"points": [ <k x d array>, ... ]}.
std::vector<Mat> points_from_json(const Json& j, int k, int d);

}  // namespace wassheat
