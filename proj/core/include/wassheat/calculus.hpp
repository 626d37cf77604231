// ---------------------------------------------------------------------------
// calculus.hpp
// Calculus of kernel-averaged functionals on discrete measures.
//
// For a symmetric kernel Phi of arity k,
//   F_Phi[m] = (1/k) * integral of Phi over m^(tensor k)
// realized as exact nested sums over atom tuples. Gradients, the two Hessian
// pieces, the Hessian quadratic form and the (perturbed) partial Laplacian
// all reduce to tensor sums of kernel derivative blocks:
//   grad_w      A_m(x1)        = int grad1 Phi(x1, ...) dm^(k-1)
//   grad_grad_w Atil(x1)       = int hess11 Phi(x1, ...) dm^(k-1)
//   hess_offdiag A_mm(x1,x2)   = 0 (k=1), hess12(x1,x2) (k=2),
//                                (k-1) int hess12(x1,x2,...) dm^(k-2) (k>=3)
//   laplacian_w                = F_{Theta_eps}[m],
//     Theta_eps = (1+eps) sum_j tr H_jj + sum_{j != l} tr H_jl.
// ---------------------------------------------------------------------------
#pragma once

#include "wassheat/kernels.hpp"
#include "wassheat/measure.hpp"

namespace wassheat {

inline constexpr double kTensorGuard = 1e7;  // max #tuples in one nested sum

// Throws TensorGuardExceeded when n^p > kTensorGuard.
void check_tensor_guard(int n, int p);

cplx eval_F(const SymmetricKernel& phi, const DiscreteMeasure& m);

// Wasserstein gradient of F_Phi at m, evaluated at the point x1.
VecC grad_w(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1);

// Spatial derivative of the gradient field (the "diagonal" Hessian piece).
MatC grad_grad_w(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1);

// Off-diagonal Hessian piece A_mm(x1, x2).
MatC hess_offdiag(const SymmetricKernel& phi, const DiscreteMeasure& m, const Vec& x1,
                  const Vec& x2);

// Gradient field averaged against the measure: sum_i w_i grad_w(phi, m, x_i).
VecC mean_gradient(const SymmetricKernel& phi, const DiscreteMeasure& m);

// Hess F_Phi[m](zeta1, zeta2) for vector fields given by their values at the
// atoms of m (rows of zeta1/zeta2, each n x d, real):
//   sum_i w_i <Atil(x_i) zeta1(x_i), zeta2(x_i)>
//   + sum_{i,j} w_i w_j <A_mm(x_i, x_j) zeta1(x_j), zeta2(x_i)>.
cplx hess_quadratic_form(const SymmetricKernel& phi, const DiscreteMeasure& m, const Mat& zeta1,
                         const Mat& zeta2);

// Perturbed partial Laplacian via direct Theta_eps tensor assembly.
cplx laplacian_w(const SymmetricKernel& phi, const DiscreteMeasure& m, double eps);

// Same object through the trace decomposition
//   (1+eps) sum_i w_i tr Atil(x_i) + sum_{i,j} w_i w_j tr A_mm(x_i, x_j).
// Kept as an independent code path; the two must agree to ~1e-11 relative.
cplx laplacian_w_decomposed(const SymmetricKernel& phi, const DiscreteMeasure& m, double eps);

// Laplacian at the uniform empirical measure of N points (rows of `points`).
//   Symbolic:         trace decomposition at m_x.
//   FiniteDifference: sum_{j,l,c} d^2 u / d(x_j)_c d(x_l)_c of
//                     u(x) = F_Phi[m_x] by central differences (step h),
//                     plus eps * (1/N) sum_j tr of the FD first-slot block.
enum class LaplacianMode { Symbolic, FiniteDifference };
cplx empirical_laplacian(const SymmetricKernel& phi, const Mat& points, double eps,
                         LaplacianMode mode, double h = 1e-4);

}  // namespace wassheat
