// ---------------------------------------------------------------------------
// reconstruction.hpp
// Recovering interaction kernels from measure functionals.
//
// Building blocks:
//  * apply_Ok: the inclusion-exclusion operator over empirical sub-measures,
//      O_k(F)(x) = (1/k!) sum_{r=1..k} (-1)^(k-r) r^k sum_{|I|=r} F(m_{x_I}),
//    which maps F_Phi (arity-k Phi) to Phi/k exactly.
//  * extension_F_lambda: the dilation m -> sum_k lambda^k F_k[m]/k!
//    realized either through known kernels or through evaluation at the
//    mixture lambda*m + (1-lambda)*delta_y with y pushed to infinity.
//  * project_pi_k: degree extraction from the lambda-polynomial by a
//    Vandermonde solve on lambda_j = j/(N+1).
//  * recover_kernel: Phi_k = k * k! * O_k( project_pi_k(F) ).
// ---------------------------------------------------------------------------
#pragma once

#include <functional>

#include "wassheat/kernels.hpp"
#include "wassheat/measure.hpp"

namespace wassheat {

inline constexpr int kMaxSubsetGround = 20;  // subsets_of_size ground-set cap
inline constexpr int kMaxOkArity = 12;       // 2^k empirical evaluations

// Size-r subsets of {0,...,n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(int n, int r);

// Uniform empirical measure on the selected rows.
DiscreteMeasure empirical_from_index(const Mat& points, const std::vector<int>& idx);

using MeasureFunctional = std::function<cplx(const DiscreteMeasure&)>;

cplx apply_Ok(const MeasureFunctional& F, const Mat& x);

struct GradedFunctional {
    MeasureFunctional evaluate;
    int max_degree = 0;  // polynomial degree of the lambda extension, >= 1
    // degree -> kernel when known; enables the exact extension path
    std::vector<std::pair<int, KernelPtr>> known_kernels;
};

// F = sum_k (1/k!) F_{Phi_k} from explicit kernels.
GradedFunctional make_graded(std::vector<std::pair<int, KernelPtr>> kernels);

struct ExtensionOptions {
    double y_far = 0.0;             // 0 = choose from kernel support + measure diameter
    double stabilization_rtol = 1e-8;
    int max_doublings = 40;
    bool force_mixture_path = false;  // ignore known kernels (used by tests)
};

cplx extension_F_lambda(const GradedFunctional& F, double lambda, const DiscreteMeasure& m,
                        const ExtensionOptions& opt = {});

// Coefficient of lambda^k of the extension polynomial at measure m
// (equal to F_{Phi_k}[m] / k! when F is a graded sum).
cplx project_pi_k(const GradedFunctional& F, int k, const DiscreteMeasure& m,
                  const ExtensionOptions& opt = {});

// Pointwise kernel recovery at the tuple x (k x d).
cplx recover_kernel(const GradedFunctional& F, int k, const Mat& x,
                    const ExtensionOptions& opt = {});

// d = 1 demo-grade inverse transform on a trapezoid lattice over [-L,L]^k:
//   a(xi) = int Phi(x) exp(+2 pi i <xi, x>) dx,
// one value per requested frequency tuple (each k x 1). Arity k <= 2.
VecC lattice_fourier_coefficients(const SymmetricKernel& phi, double L, int n_per_axis,
                                  const std::vector<Mat>& xi_nodes);

}  // namespace wassheat
