// ---------------------------------------------------------------------------
// heat_flow.hpp
// Smoothed common-noise flow on measures and the induced heat semigroup on
// graded spectral functionals.
//
// State at time t with Brownian value w (= W_t):
//   sigma_t[m] = (id + sqrt(2 beta) w)_# ( G_{eps t} * m ),
// i.e. Gaussian smoothing with per-coordinate variance 2*eps*t followed by a
// common translation. On spectral coefficients the expectation over w acts
// degreewise as multiplication by
//   exp( -t * 4 pi^2 ( beta |sum_j xi_j|^2 + eps sum_j |xi_j|^2 ) ),
// the closed-form semigroup; its generator is beta times the perturbed
// Laplacian with ratio eps/beta.
// ---------------------------------------------------------------------------
#pragma once

#include <string>

#include "wassheat/parallel.hpp"
#include "wassheat/spectral.hpp"

namespace wassheat {

struct FlowParams {
    double beta = 1.0;  // common-noise intensity, > 0
    double eps = 0.0;   // smoothing rate, >= 0
};

void validate(const FlowParams& p);

SmoothedMeasure flow_state(const DiscreteMeasure& m, FlowParams p, double t, const Vec& w);

// 4 pi^2 (beta |sum_j xi_j|^2 + eps sum_j |xi_j|^2) = beta * lambda_sq(xi, eps/beta)
double generator_factor(const Mat& xi, FlowParams p);

SpectralCoefficients semigroup_closed_form(const SpectralCoefficients& A, FlowParams p, double t);

// values *= -generator_factor (time derivative of the closed form).
SpectralCoefficients apply_heat_generator(const SpectralCoefficients& A, FlowParams p);

struct McStats {
    cplx mean{0.0, 0.0};
    double stderr_ = 0.0;
    int n = 0;
};
McStats reduce_paths(const std::vector<cplx>& vals);

// E[ F_A( sigma_t[m] ) ] by Monte Carlo over the common noise. One RNG
// stream per path; thread count never changes the result.
McStats mc_expectation(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                       double t, int n_paths, uint64_t seed);

// Closed form vs Monte Carlo, overall and per degree.
struct SemigroupCheckRow {
    std::string id;
    cplx closed_form{0.0, 0.0};
    cplx mc_mean{0.0, 0.0};
    double stderr_ = 0.0;
    double z = 0.0;
    int n_paths = 0;
};
std::vector<SemigroupCheckRow> semigroup_agreement(const SpectralCoefficients& A,
                                                   const DiscreteMeasure& m, FlowParams p,
                                                   double t, int n_paths, uint64_t seed);

// | dV/dt - generator V | at time t via centered differences with step dt;
// the residual is O(dt^2), so halving dt must shrink it ~4x.
double heat_residual(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                     double t, double dt);

// Pathwise defect of the semimartingale expansion of V(t, sigma_t) over
// [s, r] with an n_steps left-point time grid: the drift part is
// 2 * (generator V)(t, sigma_t), and after subtracting it the remainder is a
// martingale, so the path mean must vanish within 3 stderr + O(dt) bias.
// bias_estimate re-runs the same Brownian paths on an n_steps/2 grid.
struct PathwiseStats {
    cplx mean{0.0, 0.0};
    double stderr_ = 0.0;
    double z = 0.0;
    double bias_estimate = 0.0;
    int n_paths = 0;
    int n_steps = 0;
};
PathwiseStats ito_residual(const SpectralCoefficients& A, const DiscreteMeasure& m, FlowParams p,
                           double s, double r, int n_paths, int n_steps, uint64_t seed);

// ---------------------------------------------------------------------------
// Weak-form check against closed-form test integrands. For time-independent
// phi the flow satisfies
//   int phi d sigma_r - int phi d sigma_s
//     = martingale + (eps + beta) int_s^r int (lap phi) d sigma_t dt,
// and each enumerated phi has closed-form Gaussian-mixture integrals.
// ---------------------------------------------------------------------------
struct TestFunction {
    enum class Kind { Constant, Linear, SquaredNorm, Exponential, Gaussian } kind;
    Vec vec;             // Linear: l; Exponential: xi; Gaussian: center
    double alpha = 1.0;  // Gaussian decay rate, > 0
};

cplx tf_integral(const TestFunction& tf, const SmoothedMeasure& m);
cplx tf_laplacian_integral(const TestFunction& tf, const SmoothedMeasure& m);

PathwiseStats weak_form_check(const TestFunction& tf, const DiscreteMeasure& m, FlowParams p,
                              double s, double r, int n_paths, int n_steps, uint64_t seed);

}  // namespace wassheat
