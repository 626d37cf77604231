// ---------------------------------------------------------------------------
// kernels.hpp
// Symmetric interaction kernels Phi : (R^d)^k -> C and their derivative
// blocks. "Symmetric" means invariant under permuting the k slot arguments;
// every family here either is symmetric by construction or is symmetrized
// explicitly over the k! slot permutations.
//
// Tuple convention: a tuple x = (x_1,...,x_k) is a k x d matrix, slot j in
// row j-1. Derivative blocks:
//   grad1(x)   = d/dx_1 Phi(x)                      (d-vector)
//   hess11(x)  = d^2/dx_1^2 Phi(x)                  (d x d)
//   hess12(x)  = [d^2 Phi / d(x_1)_a d(x_2)_b]_ab   (d x d, k >= 2)
// Blocks at other slot pairs follow from symmetry by row permutation, see
// grad_slot / hess_block below.
// ---------------------------------------------------------------------------
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wassheat/types.hpp"

namespace wassheat {

int constexpr kMaxArity = 8;  // symmetrization enumerates k! permutations

std::vector<std::vector<int>> all_permutations(int k);

class SymmetricKernel {
public:
    SymmetricKernel(int k, int d) : k_(k), d_(d) {
        if (k < 1) throw ArityGuardExceeded("kernel arity must be >= 1");
        if (d < 1) throw DimensionMismatch("kernel dimension must be >= 1");
    }
    virtual ~SymmetricKernel() = default;

    int arity() const { return k_; }
    int dim() const { return d_; }

    virtual cplx value(const Mat& x) const = 0;

    // Finite-difference defaults (central, h = 1e-5 * (1 + |x|_F)); families
    // with analytic derivatives override.
    virtual VecC grad1(const Mat& x) const;
    virtual MatC hess11(const Mat& x) const;
    virtual MatC hess12(const Mat& x) const;

    virtual bool is_real() const { return true; }

    // Declared upper bound for the operator norm of the full (kd x kd)
    // Hessian, when the family has one. Consumed by Taylor remainder bounds.
    std::optional<double> sup_hess() const { return sup_hess_; }

    // Radius R such that Phi(x) = 0 whenever any |x_j| > R (compactly
    // supported families only).
    std::optional<double> support_radius() const { return support_radius_; }

protected:
    void check_tuple(const Mat& x) const {
        if (static_cast<int>(x.rows()) != k_ || static_cast<int>(x.cols()) != d_)
            throw DimensionMismatch("tuple shape " + std::to_string(x.rows()) + "x" +
                                    std::to_string(x.cols()) + " != kernel " +
                                    std::to_string(k_) + "x" + std::to_string(d_));
    }
    double fd_step(const Mat& x) const { return 1e-5 * (1.0 + x.norm()); }

    int k_, d_;
    std::optional<double> sup_hess_;
    std::optional<double> support_radius_;
};

using KernelPtr = std::shared_ptr<const SymmetricKernel>;

// d/dx_{j} Phi(x) via symmetry (swap slot j into slot 1).
VecC grad_slot(const SymmetricKernel& phi, const Mat& x, int j);

// [d^2 Phi / d(x_j)_a d(x_l)_b]_ab via symmetry. j == l allowed.
MatC hess_block(const SymmetricKernel& phi, const Mat& x, int j, int l);

// ---------------------------------------------------------------------------
// exponential family:
//   Phi(x) = (1/k!) sum_sigma exp(-2 pi i sum_j <xi_sigma(j), x_j>)
// The symmetrized complex exponentials; eigenfunctions of the perturbed
// Laplacian once averaged against tensor powers of a measure.
// ---------------------------------------------------------------------------
class ExponentialKernel final : public SymmetricKernel {
public:
    ExponentialKernel(const Mat& xi);  // xi: k x d frequency rows

    cplx value(const Mat& x) const override;
    VecC grad1(const Mat& x) const override;
    MatC hess11(const Mat& x) const override;
    MatC hess12(const Mat& x) const override;
    bool is_real() const override { return false; }

    const Mat& frequencies() const { return xi_; }

private:
    template <typename Accum>
    void sum_over_permutations(const Mat& x, Accum&& accum) const;

    Mat xi_;
    std::vector<std::vector<int>> perms_;
};

// ---------------------------------------------------------------------------
// tensor_poly family: symmetrization of the monomial
//   raw(x) = prod_j prod_c (x_j)_c ^ E(j,c)
// sup_hess is declared only for total degree <= 2 (constant Hessian).
// ---------------------------------------------------------------------------
class TensorPolynomialKernel final : public SymmetricKernel {
public:
    TensorPolynomialKernel(const Eigen::MatrixXi& exponents);  // k x d

    cplx value(const Mat& x) const override;
    VecC grad1(const Mat& x) const override;
    MatC hess11(const Mat& x) const override;
    MatC hess12(const Mat& x) const override;

    const Eigen::MatrixXi& exponents() const { return expo_; }

private:
    double slot_product(const Mat& x, const std::vector<int>& sigma, int skip0,
                        int skip1 = -1) const;  // prod over slots not skipped
    Eigen::MatrixXi expo_;
    std::vector<std::vector<int>> perms_;
    int total_degree_;
};

// ---------------------------------------------------------------------------
// radial_difference family (k = 2): Phi(x_1, x_2) = f(x_1 - x_2), f even.
// Automatically w-harmonic: the slot-Laplacians cancel the cross traces.
// ---------------------------------------------------------------------------
class RadialDifferenceKernel final : public SymmetricKernel {
public:
    enum class Profile { Gauss, CosFreq, Quadratic, Quartic, InverseQuadratic };

    // scale: Gauss std dev; CosFreq frequency magnitude along axis 0.
    RadialDifferenceKernel(int d, Profile profile, double scale = 1.0);

    cplx value(const Mat& x) const override;
    VecC grad1(const Mat& x) const override;
    MatC hess11(const Mat& x) const override;
    MatC hess12(const Mat& x) const override;

    Profile profile() const { return profile_; }
    double scale() const { return scale_; }

private:
    double f(const Vec& z) const;
    Vec df(const Vec& z) const;
    Mat d2f(const Vec& z) const;

    Profile profile_;
    double scale_;
    Vec freq_;  // CosFreq only
};

// ---------------------------------------------------------------------------
// bump_product family:
//   Phi(x) = prod_j psi(x_j),
//   psi(y) = exp(-alpha |y|^2) * (1 - |y|^2/R^2)_+^4 * (1 + <tilt, y>)
// C^3 across |y| = R (boundary zero of order 4), support radius R. alpha > 0
// gives the taper-truncated Gaussian variant. Requires |tilt| * R < 1 so the
// affine factor stays positive on the support.
// ---------------------------------------------------------------------------
class BumpProductKernel final : public SymmetricKernel {
public:
    BumpProductKernel(int k, int d, double R, double alpha = 0.0,
                      const std::optional<Vec>& tilt = std::nullopt);

    cplx value(const Mat& x) const override;
    VecC grad1(const Mat& x) const override;
    MatC hess11(const Mat& x) const override;
    MatC hess12(const Mat& x) const override;

    double psi(const Vec& y) const;
    Vec psi_grad(const Vec& y) const;
    Mat psi_hess(const Vec& y) const;

    double radius() const { return R_; }
    double alpha() const { return alpha_; }
    const Vec& tilt() const { return tilt_; }

private:
    double R_, alpha_;
    Vec tilt_;
};

// ---------------------------------------------------------------------------
// generic callback kernel: caller-supplied symmetric value function, all
// derivatives by finite differences. Metadata (sup_hess, support radius)
// must be declared by the caller if known.
// ---------------------------------------------------------------------------
class GenericCallbackKernel final : public SymmetricKernel {
public:
    using Fn = std::function<cplx(const Mat&)>;
    GenericCallbackKernel(int k, int d, Fn fn,
                          std::optional<double> sup_hess = std::nullopt,
                          std::optional<double> support_radius = std::nullopt,
                          bool real_valued = true)
        : SymmetricKernel(k, d), fn_(std::move(fn)), real_(real_valued) {
        sup_hess_ = sup_hess;
        support_radius_ = support_radius;
    }
    cplx value(const Mat& x) const override { check_tuple(x); return fn_(x); }
    bool is_real() const override { return real_; }

private:
    Fn fn_;
    bool real_;
};

// Symmetrize an arbitrary callback over the k! slot permutations:
//   Phi(x) = (1/k!) sum_sigma raw(x_sigma(1),...,x_sigma(k)).
// Throws ArityGuardExceeded for k > 8.
KernelPtr symmetrize(int k, int d, GenericCallbackKernel::Fn raw,
                     std::optional<double> sup_hess = std::nullopt,
                     std::optional<double> support_radius = std::nullopt,
                     bool real_valued = true);

// Scale a kernel by a real constant (kernel algebra needed by the
// inclusion-exclusion recovery identities).
KernelPtr scale_kernel(KernelPtr phi, double factor);

}  // namespace wassheat
