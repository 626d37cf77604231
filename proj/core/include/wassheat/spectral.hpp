// ---------------------------------------------------------------------------
// spectral.hpp
// Graded spectral representation of measure functionals.
//
// A functional is stored degree by degree as quadrature data for
//   F[m] = sum_k (1/k!) * sum_nodes quad_w * a_k(xi) * E_xi^k[m],
// where xi is a k x d frequency tuple and
//   E_xi^k[m] = (1/k) * prod_j char_fn(m, xi_j)
// is the averaged symmetrized exponential. Under the perturbed Laplacian
// these are eigenfunctions:
//   lap_{w,eps} E_xi^k = -lambda_sq(xi, eps) * E_xi^k,
//   lambda_sq(xi, eps) = 4 pi^2 ( |sum_j xi_j|^2 + eps * sum_j |xi_j|^2 ).
// ---------------------------------------------------------------------------
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wassheat/measure.hpp"

namespace wassheat {

struct SpectralGrid {
    int degree = 0;           // arity k
    int dim = 0;              // d
    std::vector<Mat> nodes;   // quadrature nodes, each k x d
    Vec quad_weights;         // positive, one per node
    bool permutation_closed = false;  // informational; all evaluation paths
                                      // use slot-symmetrized moments anyway
    uint64_t grid_id = 0;     // content hash; equal ids <=> same grid bytes
};

SpectralGrid make_grid(int degree, int dim, std::vector<Mat> nodes, Vec quad_weights,
                       bool permutation_closed = false);

struct DegreeBlock {
    SpectralGrid grid;
    VecC values;  // a_k at the grid nodes
};

struct DecayDeclaration {
    double C = 0.0;
    double delta = 0.0;
};

struct SpectralCoefficients {
    std::map<int, DegreeBlock> degrees;
    std::optional<DecayDeclaration> decay;

    int max_degree() const { return degrees.empty() ? 0 : degrees.rbegin()->first; }
};

// Attach values to a grid (sizes must match).
DegreeBlock make_block(SpectralGrid grid, VecC values);

cplx eigenfunction(const Mat& xi, const DiscreteMeasure& m);
cplx eigenfunction(const Mat& xi, const SmoothedMeasure& m);

double lambda_sq(const Mat& xi, double eps);

cplx eval_superposition(const SpectralCoefficients& A, const DiscreteMeasure& m);
cplx eval_superposition(const SpectralCoefficients& A, const SmoothedMeasure& m);

// Coefficientwise action of the perturbed Laplacian: a -> -lambda_sq * a.
SpectralCoefficients apply_laplacian_spectral(const SpectralCoefficients& A, double eps);

// The averaged gradient  m |-> int grad_w F dm  is again a graded functional
// (one scalar functional per space component) with coefficients
//   c^n_k(xi) = -2 pi i (sum_j xi_j)_n a_k(xi).
std::vector<SpectralCoefficients> mean_gradient_coefficients(const SpectralCoefficients& A);

// Same object evaluated at a measure, as a d-vector.
VecC mean_gradient_spectral(const SpectralCoefficients& A, const DiscreteMeasure& m);
VecC mean_gradient_spectral(const SpectralCoefficients& A, const SmoothedMeasure& m);

// Sobolev-type pairing <A; B>_s = sum_k (1/k!) sum_nodes w a conj(b)
// (1 + lambda_sq(xi, 0))^s. Degrees present in both operands must share the
// grid (GridMismatch otherwise); one-sided degrees contribute zero.
cplx hs_inner(const SpectralCoefficients& A, const SpectralCoefficients& B, double s);
double hs_norm_sq(const SpectralCoefficients& A, double s);

// Componentwise pairing of vector-valued coefficient sets.
cplx hs_inner_vector(const std::vector<SpectralCoefficients>& A,
                     const std::vector<SpectralCoefficients>& B, double s);

// Integration by parts in spectral form. Returns
//   lhs = <lap_w F; G>_{H0}
//   rhs = -<mean_grad F; mean_grad G>_{H0 vector}
// which must agree to |lhs - rhs| <= 1e-12 (1 + |lhs|).
std::pair<cplx, cplx> ibp_check(const SpectralCoefficients& A, const SpectralCoefficients& B);

// ---------------------------------------------------------------------------
// Declared-decay verification. Bounds use the declared (C, delta):
//   uniform : int |a_k|                    <= C k!/k^delta
//   grad1   : int |a_k| |xi_1|, |xi_1|^2   <= C k!/k^(1+delta)
//   cross   : int |a_k| |xi_1||xi_2|       <= C k!/k^(2+delta)
//   third   : int |a_k| |xi_1|^3           <= C k!/k^(1+delta)
//             int |a_k| |xi_1|^2 |xi_2|    <= C k!/k^(3+delta)
//   strong3 : int |a_k|                    <= C k!/k^(3+delta)
// Slot moments are evaluated in symmetrized form, e.g. |xi_1| means the mean
// of |xi_j| over slots, so non-permutation-closed grids are handled too.
// ---------------------------------------------------------------------------
enum class DecayCondition { Uniform, Grad1, Cross, Third, Strong3 };

struct DecayDegreeRow {
    int degree = 0;
    double measured_a = 0.0, bound_a = 0.0;   // first integral of the condition
    double measured_b = 0.0, bound_b = 0.0;   // second integral (0/inf if unused)
    bool pass = false;
};

struct DecayReport {
    DecayCondition condition{};
    bool pass = false;
    std::vector<DecayDegreeRow> rows;
};

DecayReport decay_check(const SpectralCoefficients& A, DecayCondition condition);

}  // namespace wassheat
