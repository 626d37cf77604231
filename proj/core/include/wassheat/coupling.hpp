// ---------------------------------------------------------------------------
// coupling.hpp
// Exact optimal couplings between discrete measures under squared euclidean
// cost, the induced 2-Wasserstein distance, and the first/second order
// expansion objects built on a coupling.
//
// Solvers: equal-size uniform marginals use the O(n^3) assignment algorithm
// (potentials + augmenting paths); general weights use successive shortest
// paths on the bipartite transportation graph with Johnson potentials. Both
// are exact up to floating point rounding and fully deterministic (fixed
// scan order, strict < tie-breaks); the returned pair list is sorted by
// (left index, right index).
// ---------------------------------------------------------------------------
#pragma once

#include "wassheat/calculus.hpp"
#include "wassheat/measure.hpp"

namespace wassheat {

struct CouplingPair {
    int i = 0, j = 0;
    double mass = 0.0;
};

struct Coupling {
    std::vector<CouplingPair> pairs;  // sorted by (i, j), masses > 0
};

struct OptimalCouplingResult {
    Coupling plan;
    double cost = 0.0;  // sum mass * |a_i - b_j|^2
    double w2 = 0.0;    // sqrt(cost)
};

// Throws SizeGuardExceeded when size(m) * size(nu) > 1e6.
OptimalCouplingResult optimal_coupling(const DiscreteMeasure& m, const DiscreteMeasure& nu);

double w2_distance(const DiscreteMeasure& m, const DiscreteMeasure& nu);

// Marginal defect of a coupling against its two marginals (max abs error);
// couplings produced here keep this below 1e-10.
double marginal_defect(const Coupling& c, const DiscreteMeasure& m, const DiscreteMeasure& nu);

// First-order expansion check along a coupling gamma between m and nu:
//   remainder = |F[nu] - F[m] - sum_gamma mass <A_m(a_i), b_j - a_i>|
//   bound     = (C k / 2) W2(m,nu)^2,  C = declared sup |hess Phi|.
struct TaylorFirstOrder {
    cplx f_m, f_nu, linear_term;
    double remainder = 0.0;
    double bound = 0.0;
    double w2 = 0.0;
    bool within_bound = false;
};
TaylorFirstOrder taylor_first_order(const SymmetricKernel& phi, const DiscreteMeasure& m,
                                    const DiscreteMeasure& nu, const Coupling& gamma);

// Second-order transport object
//   P_gamma(x1, y1) = Atil[m](x1) (y1 - x1)
//                     + sum_gamma mass * A_mm(x1, a_i) (b_j - a_i).
VecC p_gamma(const SymmetricKernel& phi, const DiscreteMeasure& m, const DiscreteMeasure& nu,
             const Coupling& gamma, const Vec& x1, const Vec& y1);

}  // namespace wassheat
