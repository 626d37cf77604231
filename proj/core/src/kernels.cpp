#include "wassheat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace wassheat {

std::vector<std::vector<int>> all_permutations(int k) {
    if (k > kMaxArity) throw ArityGuardExceeded("arity " + std::to_string(k) + " > 8");
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(idx);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

// ---------------------------------------------------------------------------
// finite-difference defaults
// ---------------------------------------------------------------------------

VecC SymmetricKernel::grad1(const Mat& x) const {
    check_tuple(x);
    const double h = fd_step(x);
    VecC g(d_);
    Mat xp = x, xm = x;
    for (int c = 0; c < d_; ++c) {
        xp(0, c) += h;
        xm(0, c) -= h;
        g[c] = (value(xp) - value(xm)) / (2.0 * h);
        xp(0, c) = x(0, c);
        xm(0, c) = x(0, c);
    }
    return g;
}

MatC SymmetricKernel::hess11(const Mat& x) const {
    check_tuple(x);
    const double h = fd_step(x);
    MatC out(d_, d_);
    Mat xp = x, xm = x;
    for (int c = 0; c < d_; ++c) {
        xp(0, c) += h;
        xm(0, c) -= h;
        out.col(c) = (grad1(xp) - grad1(xm)) / (2.0 * h);
        xp(0, c) = x(0, c);
        xm(0, c) = x(0, c);
    }
    // out(a,c) = d/d(x1)_c of grad1_a; symmetrize to kill the FD skew
    return 0.5 * (out + out.transpose().eval());
}

MatC SymmetricKernel::hess12(const Mat& x) const {
    check_tuple(x);
    if (k_ < 2) throw DimensionMismatch("hess12 needs arity >= 2");
    const double h = fd_step(x);
    MatC out(d_, d_);
    Mat xp = x, xm = x;
    for (int b = 0; b < d_; ++b) {
        xp(1, b) += h;
        xm(1, b) -= h;
        out.col(b) = (grad1(xp) - grad1(xm)) / (2.0 * h);  // row a, col b
        xp(1, b) = x(1, b);
        xm(1, b) = x(1, b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// symmetry-derived blocks
// ---------------------------------------------------------------------------

namespace {
// Permute slot rows so that requested slots land in rows 0 (and 1).
Mat rows_to_front(const Mat& x, int j, int l = -1) {
    const int k = static_cast<int>(x.rows());
    Mat y(x.rows(), x.cols());
    int row = (l >= 0) ? 2 : 1;
    y.row(0) = x.row(j);
    if (l >= 0) y.row(1) = x.row(l);
    for (int r = 0; r < k; ++r) {
        if (r == j || r == l) continue;
        y.row(row++) = x.row(r);
    }
    return y;
}
}  // namespace

VecC grad_slot(const SymmetricKernel& phi, const Mat& x, int j) {
    if (j < 0 || j >= phi.arity()) throw IndexOutOfRange("slot " + std::to_string(j));
    if (j == 0) return phi.grad1(x);
    return phi.grad1(rows_to_front(x, j));
}

MatC hess_block(const SymmetricKernel& phi, const Mat& x, int j, int l) {
    const int k = phi.arity();
    if (j < 0 || j >= k || l < 0 || l >= k)
        throw IndexOutOfRange("slot pair (" + std::to_string(j) + "," + std::to_string(l) + ")");
    if (j == l) return (j == 0) ? phi.hess11(x) : phi.hess11(rows_to_front(x, j));
    if (j == 0 && l == 1) return phi.hess12(x);
    return phi.hess12(rows_to_front(x, j, l));
}

// ---------------------------------------------------------------------------
// ExponentialKernel
// ---------------------------------------------------------------------------

ExponentialKernel::ExponentialKernel(const Mat& xi)
    : SymmetricKernel(static_cast<int>(xi.rows()), static_cast<int>(xi.cols())), xi_(xi) {
    if (!xi.allFinite()) throw NonFiniteInput("frequency rows must be finite");
    perms_ = all_permutations(k_);
    // Each permutation term is exp(-2 pi i <eta, X>) with |eta|^2 = sum_j |xi_j|^2,
    // whose full Hessian has operator norm 4 pi^2 |eta|^2; averaging keeps it.
    sup_hess_ = 4.0 * kPi * kPi * xi_.squaredNorm();
}

template <typename Accum>
void ExponentialKernel::sum_over_permutations(const Mat& x, Accum&& accum) const {
    for (const auto& sigma : perms_) {
        double phase = 0.0;
        for (int j = 0; j < k_; ++j) phase += xi_.row(sigma[j]).dot(x.row(j));
        phase *= -kTwoPi;
        accum(sigma, cplx(std::cos(phase), std::sin(phase)));
    }
}

cplx ExponentialKernel::value(const Mat& x) const {
    check_tuple(x);
    KahanC acc;
    sum_over_permutations(x, [&](const std::vector<int>&, cplx e) { acc.add(e); });
    return acc.value() / factorial(k_);
}

VecC ExponentialKernel::grad1(const Mat& x) const {
    check_tuple(x);
    VecC g = VecC::Zero(d_);
    const cplx minus_two_pi_i(0.0, -kTwoPi);
    sum_over_permutations(x, [&](const std::vector<int>& sigma, cplx e) {
        g += (minus_two_pi_i * e) * xi_.row(sigma[0]).transpose();
    });
    return g / factorial(k_);
}

MatC ExponentialKernel::hess11(const Mat& x) const {
    check_tuple(x);
    MatC h = MatC::Zero(d_, d_);
    const double c = -4.0 * kPi * kPi;
    sum_over_permutations(x, [&](const std::vector<int>& sigma, cplx e) {
        h += (c * e) * (xi_.row(sigma[0]).transpose() * xi_.row(sigma[0]));
    });
    return h / factorial(k_);
}

MatC ExponentialKernel::hess12(const Mat& x) const {
    check_tuple(x);
    if (k_ < 2) throw DimensionMismatch("hess12 needs arity >= 2");
    MatC h = MatC::Zero(d_, d_);
    const double c = -4.0 * kPi * kPi;
    sum_over_permutations(x, [&](const std::vector<int>& sigma, cplx e) {
        h += (c * e) * (xi_.row(sigma[0]).transpose() * xi_.row(sigma[1]));
    });
    return h / factorial(k_);
}

// ---------------------------------------------------------------------------
// TensorPolynomialKernel
// ---------------------------------------------------------------------------

namespace {
inline double pow_int(double x, int e) {
    double p = 1.0;
    for (int i = 0; i < e; ++i) p *= x;
    return p;
}

// Monomial of one slot and its first two derivatives along coordinate c.
inline double mono(const Eigen::RowVectorXd& y, const Eigen::RowVectorXi& e) {
    double p = 1.0;
    for (int c = 0; c < y.size(); ++c) p *= pow_int(y[c], e[c]);
    return p;
}
inline double mono_d1(const Eigen::RowVectorXd& y, const Eigen::RowVectorXi& e, int c) {
    if (e[c] == 0) return 0.0;
    double p = e[c] * pow_int(y[c], e[c] - 1);
    for (int cc = 0; cc < y.size(); ++cc)
        if (cc != c) p *= pow_int(y[cc], e[cc]);
    return p;
}
inline double mono_d2(const Eigen::RowVectorXd& y, const Eigen::RowVectorXi& e, int a, int b) {
    if (a == b) {
        if (e[a] < 2) return 0.0;
        double p = e[a] * (e[a] - 1) * pow_int(y[a], e[a] - 2);
        for (int cc = 0; cc < y.size(); ++cc)
            if (cc != a) p *= pow_int(y[cc], e[cc]);
        return p;
    }
    if (e[a] == 0 || e[b] == 0) return 0.0;
    double p = e[a] * e[b] * pow_int(y[a], e[a] - 1) * pow_int(y[b], e[b] - 1);
    for (int cc = 0; cc < y.size(); ++cc)
        if (cc != a && cc != b) p *= pow_int(y[cc], e[cc]);
    return p;
}
}  // namespace

TensorPolynomialKernel::TensorPolynomialKernel(const Eigen::MatrixXi& exponents)
    : SymmetricKernel(static_cast<int>(exponents.rows()), static_cast<int>(exponents.cols())),
      expo_(exponents) {
    if ((expo_.array() < 0).any()) throw NonFiniteInput("exponents must be >= 0");
    perms_ = all_permutations(k_);
    total_degree_ = expo_.sum();
    if (total_degree_ <= 1) {
        sup_hess_ = 0.0;
    } else if (total_degree_ == 2) {
        // Constant Hessian: assemble the kd x kd block matrix at x = 0 and
        // take its spectral norm. (Evaluating at 0 is safe: every block of a
        // total-degree-2 polynomial Hessian is a constant.)
        const Mat x0 = Mat::Zero(k_, d_);
        Mat H(k_ * d_, k_ * d_);
        for (int j = 0; j < k_; ++j)
            for (int l = 0; l < k_; ++l)
                H.block(j * d_, l * d_, d_, d_) = hess_block(*this, x0, j, l).real();
        Eigen::JacobiSVD<Mat> svd(H);
        sup_hess_ = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    }
    // degree >= 3: unbounded Hessian, sup_hess_ stays unset
}

double TensorPolynomialKernel::slot_product(const Mat& x, const std::vector<int>& sigma,
                                            int skip0, int skip1) const {
    double p = 1.0;
    for (int j = 0; j < k_; ++j) {
        if (j == skip0 || j == skip1) continue;
        p *= mono(x.row(j), expo_.row(sigma[j]));
    }
    return p;
}

cplx TensorPolynomialKernel::value(const Mat& x) const {
    check_tuple(x);
    Kahan acc;
    for (const auto& sigma : perms_) acc.add(slot_product(x, sigma, -1));
    return acc.value() / factorial(k_);
}

VecC TensorPolynomialKernel::grad1(const Mat& x) const {
    check_tuple(x);
    Vec g = Vec::Zero(d_);
    for (const auto& sigma : perms_) {
        const double rest = slot_product(x, sigma, 0);
        for (int c = 0; c < d_; ++c) g[c] += mono_d1(x.row(0), expo_.row(sigma[0]), c) * rest;
    }
    return (g / factorial(k_)).cast<cplx>();
}

MatC TensorPolynomialKernel::hess11(const Mat& x) const {
    check_tuple(x);
    Mat h = Mat::Zero(d_, d_);
    for (const auto& sigma : perms_) {
        const double rest = slot_product(x, sigma, 0);
        for (int a = 0; a < d_; ++a)
            for (int b = 0; b < d_; ++b)
                h(a, b) += mono_d2(x.row(0), expo_.row(sigma[0]), a, b) * rest;
    }
    return (h / factorial(k_)).cast<cplx>();
}

MatC TensorPolynomialKernel::hess12(const Mat& x) const {
    check_tuple(x);
    if (k_ < 2) throw DimensionMismatch("hess12 needs arity >= 2");
    Mat h = Mat::Zero(d_, d_);
    for (const auto& sigma : perms_) {
        const double rest = slot_product(x, sigma, 0, 1);
        for (int a = 0; a < d_; ++a)
            for (int b = 0; b < d_; ++b)
                h(a, b) += mono_d1(x.row(0), expo_.row(sigma[0]), a) *
                           mono_d1(x.row(1), expo_.row(sigma[1]), b) * rest;
    }
    return (h / factorial(k_)).cast<cplx>();
}

// ---------------------------------------------------------------------------
// RadialDifferenceKernel
// ---------------------------------------------------------------------------

RadialDifferenceKernel::RadialDifferenceKernel(int d, Profile profile, double scale)
    : SymmetricKernel(2, d), profile_(profile), scale_(scale) {
    if (!(scale > 0.0)) throw NonFiniteInput("scale must be > 0");
    if (profile == Profile::CosFreq) {
        freq_ = Vec::Zero(d);
        freq_[0] = scale;
    }
    // Full Hessian is [[H,-H],[-H,H]] with H = f''(z); operator norm 2|H|.
    switch (profile_) {
        case Profile::Gauss:            sup_hess_ = 2.0 / (scale_ * scale_); break;
        case Profile::CosFreq:          sup_hess_ = 8.0 * kPi * kPi * scale_ * scale_; break;
        case Profile::Quadratic:        sup_hess_ = 4.0; break;
        case Profile::Quartic:          break;  // unbounded
        case Profile::InverseQuadratic: sup_hess_ = 4.0; break;
    }
}

double RadialDifferenceKernel::f(const Vec& z) const {
    const double r2 = z.squaredNorm();
    switch (profile_) {
        case Profile::Gauss: return std::exp(-r2 / (2.0 * scale_ * scale_));
        case Profile::CosFreq: return std::cos(kTwoPi * freq_.dot(z));
        case Profile::Quadratic: return r2;
        case Profile::Quartic: return r2 * r2;
        case Profile::InverseQuadratic: return 1.0 / (1.0 + r2);
    }
    return 0.0;
}

Vec RadialDifferenceKernel::df(const Vec& z) const {
    const double r2 = z.squaredNorm();
    switch (profile_) {
        case Profile::Gauss: {
            const double s2 = scale_ * scale_;
            return (-std::exp(-r2 / (2.0 * s2)) / s2) * z;
        }
        case Profile::CosFreq:
            return (-kTwoPi * std::sin(kTwoPi * freq_.dot(z))) * freq_;
        case Profile::Quadratic: return 2.0 * z;
        case Profile::Quartic: return (4.0 * r2) * z;
        case Profile::InverseQuadratic: {
            const double u = 1.0 + r2;
            return (-2.0 / (u * u)) * z;
        }
    }
    return Vec::Zero(d_);
}

Mat RadialDifferenceKernel::d2f(const Vec& z) const {
    const double r2 = z.squaredNorm();
    const Mat I = Mat::Identity(d_, d_);
    switch (profile_) {
        case Profile::Gauss: {
            const double s2 = scale_ * scale_;
            const double e = std::exp(-r2 / (2.0 * s2));
            return e * (z * z.transpose() / (s2 * s2) - I / s2);
        }
        case Profile::CosFreq:
            return (-4.0 * kPi * kPi * std::cos(kTwoPi * freq_.dot(z))) *
                   (freq_ * freq_.transpose());
        case Profile::Quadratic: return 2.0 * I;
        case Profile::Quartic: return 4.0 * r2 * I + 8.0 * z * z.transpose();
        case Profile::InverseQuadratic: {
            const double u = 1.0 + r2;
            return -2.0 / (u * u) * I + 8.0 / (u * u * u) * (z * z.transpose());
        }
    }
    return Mat::Zero(d_, d_);
}

cplx RadialDifferenceKernel::value(const Mat& x) const {
    check_tuple(x);
    return f(x.row(0).transpose() - x.row(1).transpose());
}

VecC RadialDifferenceKernel::grad1(const Mat& x) const {
    check_tuple(x);
    return df(x.row(0).transpose() - x.row(1).transpose()).cast<cplx>();
}

MatC RadialDifferenceKernel::hess11(const Mat& x) const {
    check_tuple(x);
    return d2f(x.row(0).transpose() - x.row(1).transpose()).cast<cplx>();
}

MatC RadialDifferenceKernel::hess12(const Mat& x) const {
    check_tuple(x);
    return (-d2f(x.row(0).transpose() - x.row(1).transpose())).cast<cplx>();
}

// ---------------------------------------------------------------------------
// BumpProductKernel
// ---------------------------------------------------------------------------

BumpProductKernel::BumpProductKernel(int k, int d, double R, double alpha,
                                     const std::optional<Vec>& tilt)
    : SymmetricKernel(k, d), R_(R), alpha_(alpha) {
    if (!(R > 0.0)) throw NonFiniteInput("bump radius must be > 0");
    if (!(alpha >= 0.0)) throw NonFiniteInput("alpha must be >= 0");
    tilt_ = tilt ? *tilt : Vec::Zero(d);
    if (static_cast<int>(tilt_.size()) != d) throw DimensionMismatch("tilt dim != kernel dim");
    if (tilt_.norm() * R >= 1.0) throw NonFiniteInput("need |tilt|*R < 1");
    support_radius_ = R;

    // Per-factor bounds on support (|y| <= R, q = 1-|y|^2/R^2 in [0,1]):
    //   M0 >= |psi|, M1 >= |grad psi|, M2 >= |hess psi|op.
    const double cn = tilt_.norm();
    const double M0 = 1.0 + cn * R;
    const double M1 = M0 * (2.0 * alpha_ * R + 8.0 / R) + cn;
    const double M2 = M0 * (2.0 * alpha_ + 4.0 * alpha_ * alpha_ * R * R + 56.0 / (R * R) +
                            32.0 * alpha_) +
                      2.0 * cn * (2.0 * alpha_ * R + 8.0 / R);
    // Block row-sum bound for the full symmetric kd x kd Hessian.
    const double M0k1 = std::pow(M0, k_ - 1);
    const double M0k2 = (k_ >= 2) ? std::pow(M0, k_ - 2) : 0.0;
    sup_hess_ = M2 * M0k1 + (k_ - 1) * M1 * M1 * M0k2;
}

double BumpProductKernel::psi(const Vec& y) const {
    const double u = y.squaredNorm();
    const double q = 1.0 - u / (R_ * R_);
    if (q <= 0.0) return 0.0;
    const double B = q * q * q * q;
    return std::exp(-alpha_ * u) * B * (1.0 + tilt_.dot(y));
}

Vec BumpProductKernel::psi_grad(const Vec& y) const {
    const double u = y.squaredNorm();
    const double q = 1.0 - u / (R_ * R_);
    if (q <= 0.0) return Vec::Zero(d_);
    const double E = std::exp(-alpha_ * u);
    const double B = q * q * q * q;
    const double L = 1.0 + tilt_.dot(y);
    const Vec dB = (-8.0 / (R_ * R_) * q * q * q) * y;
    const Vec dE = (-2.0 * alpha_ * E) * y;
    return dE * (B * L) + E * L * dB + (E * B) * tilt_;
}

Mat BumpProductKernel::psi_hess(const Vec& y) const {
    const double u = y.squaredNorm();
    const double q = 1.0 - u / (R_ * R_);
    if (q <= 0.0) return Mat::Zero(d_, d_);
    const double R2 = R_ * R_;
    const double E = std::exp(-alpha_ * u);
    const double B = q * q * q * q;
    const double L = 1.0 + tilt_.dot(y);
    const Vec dE = (-2.0 * alpha_ * E) * y;
    const Vec dB = (-8.0 / R2 * q * q * q) * y;
    const Mat I = Mat::Identity(d_, d_);
    const Mat d2E = E * (4.0 * alpha_ * alpha_ * y * y.transpose() - 2.0 * alpha_ * I);
    const Mat d2B = (48.0 / (R2 * R2)) * q * q * y * y.transpose() - (8.0 / R2) * q * q * q * I;
    Mat H = d2E * (B * L) + d2B * (E * L);
    H += (dE * dB.transpose() + dB * dE.transpose()) * L;
    H += (dE * tilt_.transpose() + tilt_ * dE.transpose()) * B;
    H += (dB * tilt_.transpose() + tilt_ * dB.transpose()) * E;
    return H;
}

cplx BumpProductKernel::value(const Mat& x) const {
    check_tuple(x);
    double p = 1.0;
    for (int j = 0; j < k_; ++j) {
        p *= psi(x.row(j).transpose());
        if (p == 0.0) return 0.0;
    }
    return p;
}

VecC BumpProductKernel::grad1(const Mat& x) const {
    check_tuple(x);
    double rest = 1.0;
    for (int j = 1; j < k_; ++j) rest *= psi(x.row(j).transpose());
    return (rest * psi_grad(x.row(0).transpose())).cast<cplx>();
}

MatC BumpProductKernel::hess11(const Mat& x) const {
    check_tuple(x);
    double rest = 1.0;
    for (int j = 1; j < k_; ++j) rest *= psi(x.row(j).transpose());
    return (rest * psi_hess(x.row(0).transpose())).cast<cplx>();
}

MatC BumpProductKernel::hess12(const Mat& x) const {
    check_tuple(x);
    if (k_ < 2) throw DimensionMismatch("hess12 needs arity >= 2");
    double rest = 1.0;
    for (int j = 2; j < k_; ++j) rest *= psi(x.row(j).transpose());
    const Vec g0 = psi_grad(x.row(0).transpose());
    const Vec g1 = psi_grad(x.row(1).transpose());
    return (rest * (g0 * g1.transpose())).cast<cplx>();
}

// ---------------------------------------------------------------------------
// symmetrize / scale
// ---------------------------------------------------------------------------

namespace {
class SymmetrizedCallback final : public SymmetricKernel {
public:
    SymmetrizedCallback(int k, int d, GenericCallbackKernel::Fn raw,
                        std::optional<double> sup_hess, std::optional<double> support_radius,
                        bool real_valued)
        : SymmetricKernel(k, d), raw_(std::move(raw)), real_(real_valued) {
        perms_ = all_permutations(k);
        sup_hess_ = sup_hess;
        support_radius_ = support_radius;
    }
    cplx value(const Mat& x) const override {
        check_tuple(x);
        KahanC acc;
        Mat y(k_, d_);
        for (const auto& sigma : perms_) {
            for (int j = 0; j < k_; ++j) y.row(j) = x.row(sigma[j]);
            acc.add(raw_(y));
        }
        return acc.value() / factorial(k_);
    }
    bool is_real() const override { return real_; }

private:
    GenericCallbackKernel::Fn raw_;
    std::vector<std::vector<int>> perms_;
    bool real_;
};

class ScaledKernel final : public SymmetricKernel {
public:
    ScaledKernel(KernelPtr base, double factor)
        : SymmetricKernel(base->arity(), base->dim()), base_(std::move(base)), f_(factor) {
        if (auto s = base_->sup_hess()) sup_hess_ = std::abs(f_) * (*s);
        support_radius_ = base_->support_radius();
    }
    cplx value(const Mat& x) const override { return f_ * base_->value(x); }
    VecC grad1(const Mat& x) const override { return f_ * base_->grad1(x); }
    MatC hess11(const Mat& x) const override { return f_ * base_->hess11(x); }
    MatC hess12(const Mat& x) const override { return f_ * base_->hess12(x); }
    bool is_real() const override { return base_->is_real(); }

private:
    KernelPtr base_;
    double f_;
};
}  // namespace

KernelPtr symmetrize(int k, int d, GenericCallbackKernel::Fn raw, std::optional<double> sup_hess,
                     std::optional<double> support_radius, bool real_valued) {
    return std::make_shared<SymmetrizedCallback>(k, d, std::move(raw), sup_hess, support_radius,
                                                 real_valued);
}

KernelPtr scale_kernel(KernelPtr phi, double factor) {
    return std::make_shared<ScaledKernel>(std::move(phi), factor);
}

}  // namespace wassheat
