#include "wassheat/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wassheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-14;  // below this a supply/demand/flow is spent

Mat cost_matrix(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    Mat c(m.size(), nu.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < nu.size(); ++j)
            c(i, j) = (m.atoms.row(i) - nu.atoms.row(j)).squaredNorm();
    return c;
}

// Classic O(n^3) assignment with potentials; returns row -> column.
std::vector<int> hungarian_assignment(const Mat& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Successive shortest paths for the transportation problem. Node ids:
// sources [0,n), sinks [n, n+n2). Potentials keep residual reduced costs
// nonnegative so plain Dijkstra stays valid after the first augmentation.
Mat ssp_transport(const Mat& cost, Vec supply, Vec demand) {
    const int n = static_cast<int>(supply.size());
    const int n2 = static_cast<int>(demand.size());
    const int V = n + n2;
    Mat flow = Mat::Zero(n, n2);
    Vec pi = Vec::Zero(V);
    std::vector<double> dist(V);
    std::vector<int> parent(V);
    std::vector<char> done(V);

    const int max_iter = 60 * V + 100;
    for (int iter = 0; iter < max_iter; ++iter) {
        bool any_supply = false;
        for (int i = 0; i < n; ++i) any_supply |= (supply[i] > kMassTol);
        if (!any_supply) return flow;

        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(parent.begin(), parent.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        for (int i = 0; i < n; ++i)
            if (supply[i] > kMassTol) dist[i] = 0.0;

        for (int step = 0; step < V; ++step) {
            int u = -1;
            double best = kInf;
            for (int w = 0; w < V; ++w)
                if (!done[w] && dist[w] < best) {
                    best = dist[w];
                    u = w;
                }
            if (u < 0) break;
            done[u] = 1;
            // Relax only nodes that are not finalized: revisiting a done node
            // (possible when roundoff drives a reduced cost slightly negative)
            // can splice a cycle into the parent chain, and the augmentation
            // walk below would never terminate. For the same reason reduced
            // costs are clamped at zero; mathematically they never drop below.
            if (u < n) {
                for (int j = 0; j < n2; ++j) {
                    if (done[n + j]) continue;
                    const double red = std::max(cost(u, j) + pi[u] - pi[n + j], 0.0);
                    const double alt = dist[u] + red;
                    if (alt < dist[n + j]) {
                        dist[n + j] = alt;
                        parent[n + j] = u;
                    }
                }
            } else {
                const int j = u - n;
                for (int i = 0; i < n; ++i) {
                    if (done[i] || flow(i, j) <= 0.0) continue;
                    const double red = std::max(-cost(i, j) + pi[u] - pi[i], 0.0);
                    const double alt = dist[u] + red;
                    if (alt < dist[i]) {
                        dist[i] = alt;
                        parent[i] = u;
                    }
                }
            }
        }

        int t = -1;
        double best = kInf;
        for (int j = 0; j < n2; ++j)
            if (demand[j] > kMassTol && dist[n + j] < best) {
                best = dist[n + j];
                t = n + j;
            }
        if (t < 0) throw Error("transport: no augmenting path (unbalanced marginals?)");

        const double dt = dist[t];
        for (int w = 0; w < V; ++w)
            if (dist[w] < kInf) pi[w] += std::min(dist[w], dt);

        // bottleneck along the parent chain
        double delta = demand[t - n];
        for (int w = t; parent[w] >= 0; w = parent[w]) {
            const int p = parent[w];
            if (p < n && w >= n) {
                if (parent[p] < 0) delta = std::min(delta, supply[p]);
            } else {
                delta = std::min(delta, flow(w, p - n));  // backward arc p(sink)->w(source)
            }
        }
        for (int w = t; parent[w] >= 0; w = parent[w]) {
            const int p = parent[w];
            if (p < n && w >= n)
                flow(p, w - n) += delta;
            else
                flow(w, p - n) -= delta;
        }
        int s = t;
        while (parent[s] >= 0) s = parent[s];
        supply[s] -= delta;
        demand[t - n] -= delta;
        if (supply[s] < kMassTol) supply[s] = 0.0;
        if (demand[t - n] < kMassTol) demand[t - n] = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n2; ++j)
                if (flow(i, j) != 0.0 && flow(i, j) < kMassTol) flow(i, j) = 0.0;
    }
    throw Error("transport: iteration cap hit");
}

}  // namespace

OptimalCouplingResult optimal_coupling(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    if (m.dim != nu.dim) throw DimensionMismatch("measure dims differ");
    const double pairs_count = static_cast<double>(m.size()) * static_cast<double>(nu.size());
    if (pairs_count > 1e6)
        throw SizeGuardExceeded(std::to_string(m.size()) + " x " + std::to_string(nu.size()));

    const Mat cost = cost_matrix(m, nu);
    OptimalCouplingResult out;

    const bool uniform_square = [&] {
        if (m.size() != nu.size()) return false;
        const double w = 1.0 / static_cast<double>(m.size());
        return (m.weights.array() - w).abs().maxCoeff() < 1e-15 &&
               (nu.weights.array() - w).abs().maxCoeff() < 1e-15;
    }();

    if (uniform_square) {
        const auto sigma = hungarian_assignment(cost);
        const double w = 1.0 / static_cast<double>(m.size());
        for (int i = 0; i < m.size(); ++i) out.plan.pairs.push_back({i, sigma[i], w});
    } else {
        const Mat flow = ssp_transport(cost, m.weights, nu.weights);
        for (int i = 0; i < m.size(); ++i)
            for (int j = 0; j < nu.size(); ++j)
                if (flow(i, j) > 0.0) out.plan.pairs.push_back({i, j, flow(i, j)});
    }

    std::sort(out.plan.pairs.begin(), out.plan.pairs.end(),
              [](const CouplingPair& a, const CouplingPair& b) {
                  return a.i != b.i ? a.i < b.i : a.j < b.j;
              });
    Kahan acc;
    for (const auto& p : out.plan.pairs) acc.add(p.mass * cost(p.i, p.j));
    out.cost = std::max(acc.value(), 0.0);
    out.w2 = std::sqrt(out.cost);
    return out;
}

double w2_distance(const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    return optimal_coupling(m, nu).w2;
}

double marginal_defect(const Coupling& c, const DiscreteMeasure& m, const DiscreteMeasure& nu) {
    Vec row = Vec::Zero(m.size()), col = Vec::Zero(nu.size());
    for (const auto& p : c.pairs) {
        if (p.i < 0 || p.i >= m.size() || p.j < 0 || p.j >= nu.size())
            throw IndexOutOfRange("coupling pair outside marginals");
        row[p.i] += p.mass;
        col[p.j] += p.mass;
    }
    return std::max((row - m.weights).cwiseAbs().maxCoeff(),
                    (col - nu.weights).cwiseAbs().maxCoeff());
}

TaylorFirstOrder taylor_first_order(const SymmetricKernel& phi, const DiscreteMeasure& m,
                                    const DiscreteMeasure& nu, const Coupling& gamma) {
    if (!phi.sup_hess())
        throw Error("taylor_first_order: kernel has no declared second-derivative bound");
    TaylorFirstOrder r;
    r.f_m = eval_F(phi, m);
    r.f_nu = eval_F(phi, nu);

    // gradient field of F at m, evaluated once per left atom that carries mass
    std::vector<VecC> grad_cache(m.size());
    std::vector<char> have(m.size(), 0);
    KahanC lin;
    Kahan cost;
    for (const auto& p : gamma.pairs) {
        if (!have[p.i]) {
            grad_cache[p.i] = grad_w(phi, m, m.atoms.row(p.i).transpose());
            have[p.i] = 1;
        }
        const Vec delta = (nu.atoms.row(p.j) - m.atoms.row(p.i)).transpose();
        lin.add(p.mass * grad_cache[p.i].cwiseProduct(delta.cast<cplx>()).sum());
        cost.add(p.mass * delta.squaredNorm());
    }
    r.linear_term = lin.value();
    r.w2 = std::sqrt(std::max(cost.value(), 0.0));
    r.remainder = std::abs(r.f_nu - r.f_m - r.linear_term);
    r.bound = 0.5 * (*phi.sup_hess()) * static_cast<double>(phi.arity()) * r.w2 * r.w2;
    r.within_bound = r.remainder <= r.bound + 1e-12;
    return r;
}

VecC p_gamma(const SymmetricKernel& phi, const DiscreteMeasure& m, const DiscreteMeasure& nu,
             const Coupling& gamma, const Vec& x1, const Vec& y1) {
    VecC out = grad_grad_w(phi, m, x1) * (y1 - x1).cast<cplx>();
    for (const auto& p : gamma.pairs) {
        const MatC Amm = hess_offdiag(phi, m, x1, m.atoms.row(p.i).transpose());
        const Vec delta = (nu.atoms.row(p.j) - m.atoms.row(p.i)).transpose();
        out += p.mass * (Amm * delta.cast<cplx>());
    }
    return out;
}

}  // namespace wassheat
