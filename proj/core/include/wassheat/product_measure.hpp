// ---------------------------------------------------------------------------
// product_measure.hpp
// Signed product measures on pairs of empirical measures drawn from a ball,
// and the duality / integration-by-parts checks they support.
//
// With x = (x_1,...,x_k) Lebesgue on B_R^k and m_{x_I} the uniform empirical
// measure on the slots in I, define the signed combination
//   P^{k,R} = (k^2/(k!)^3) sum_{r,p} (-1)^(r+p) r^k p^k
//             sum_{|I|=r, |J|=p} (m_{x_I}, m_{x_J})_# Lebesgue.
// All integrals here are UNNORMALIZED: the Monte Carlo mean over uniform
// ball tuples is multiplied by vol(B_R)^k.
// ---------------------------------------------------------------------------
#pragma once

#include <functional>

#include "wassheat/calculus.hpp"
#include "wassheat/rng.hpp"

namespace wassheat {

struct BallProductSpec {
    int k = 2;
    int dim = 1;
    double R = 1.0;
};

void validate(const BallProductSpec& spec);  // k in [1,5], dim >= 1, R > 0

double ball_volume(int d, double R);

// k iid uniform draws from the closed ball, one per row.
Mat sample_ball_tuple(const BallProductSpec& spec, RngStream& rng);

using SingleFunctional = std::function<cplx(const DiscreteMeasure&)>;
using PairFunctional = std::function<cplx(const DiscreteMeasure&, const DiscreteMeasure&)>;

struct McIntegral {
    cplx value{0.0, 0.0};
    double stderr_ = 0.0;
    int n = 0;
};

// int H(m_{x_I}, m_{x_J}) dP^{I,J,R} for fixed index sets (0-based slots).
McIntegral integrate_PIJ(const PairFunctional& H, const std::vector<int>& I,
                         const std::vector<int>& J, const BallProductSpec& spec, int n_samples,
                         uint64_t seed);

// Full signed combination for a generic pair functional.
McIntegral integrate_PkR(const PairFunctional& H, const BallProductSpec& spec, int n_samples,
                         uint64_t seed);

// Product integrands H(m1, m2) = f(m1) g(m2) factor per sample; this path
// evaluates each subset once per side instead of (2^k)^2 pair calls.
McIntegral integrate_PkR_product(const SingleFunctional& f, const SingleFunctional& g,
                                 const BallProductSpec& spec, int n_samples, uint64_t seed);

// <F_phi ; F_psi>_{H0} two ways: (1/k!) int_{B_R^k} phi conj(psi) dx by
// tensor Gauss-Legendre (kernels must vanish outside the ball: their
// declared support radius must be <= R, else SupportExceedsBall), vs the
// P^{k,R} Monte Carlo of F_phi[m1] F_psi[m2].
struct DualityResult {
    cplx quadrature{0.0, 0.0};
    cplx mc{0.0, 0.0};
    double stderr_ = 0.0;
    double z = 0.0;
    int n_samples = 0;
};
DualityResult duality_check(const SymmetricKernel& phi, const SymmetricKernel& psi,
                            const BallProductSpec& spec, int n_samples, uint64_t seed);

// D2(m1, m2) = <mean_gradient(phi, m1), mean_gradient(psi, m2)> (bilinear).
cplx d2_bilinear(const SymmetricKernel& phi, const SymmetricKernel& psi,
                 const DiscreteMeasure& m1, const DiscreteMeasure& m2);

// Integration by parts against the signed product measure:
//   - int lap_w F_phi[m1] F_psi[m2] dP^{k,R}  ==  int D2(m1, m2) dP^{k,R}.
// Common random numbers; z is on the per-sample difference.
struct IbpMeasureResult {
    cplx lhs{0.0, 0.0};
    cplx rhs{0.0, 0.0};
    double diff_stderr = 0.0;
    double z = 0.0;
    int n_samples = 0;
};
IbpMeasureResult ibp_measure_check(const SymmetricKernel& phi, const SymmetricKernel& psi,
                                   const BallProductSpec& spec, int n_samples, uint64_t seed);

// Gauss-Legendre nodes/weights on [-1, 1].
std::pair<Vec, Vec> gauss_legendre(int n);

}  // namespace wassheat
