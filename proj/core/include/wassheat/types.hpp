// ---------------------------------------------------------------------------
// types.hpp
// Shared scalar/matrix aliases, error hierarchy and small numeric helpers
// used across the wassheat core library.
// ---------------------------------------------------------------------------
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wassheat {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;   // points-as-rows convention throughout
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

// ---------------------------------------------------------------------------
// Errors. Everything thrown by the library derives from Error so callers can
// catch one type; the concrete classes exist because tests and the CLI need
// to distinguish failure modes.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define WASSHEAT_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
    }

WASSHEAT_DEFINE_ERROR(EmptySupport);
WASSHEAT_DEFINE_ERROR(NegativeWeight);
WASSHEAT_DEFINE_ERROR(DegenerateWeightSum);
WASSHEAT_DEFINE_ERROR(DimensionMismatch);
WASSHEAT_DEFINE_ERROR(NegativeVariance);
WASSHEAT_DEFINE_ERROR(NonFiniteInput);
WASSHEAT_DEFINE_ERROR(SizeGuardExceeded);
WASSHEAT_DEFINE_ERROR(TensorGuardExceeded);
WASSHEAT_DEFINE_ERROR(ArityGuardExceeded);
WASSHEAT_DEFINE_ERROR(GridMismatch);
WASSHEAT_DEFINE_ERROR(IndexOutOfRange);
WASSHEAT_DEFINE_ERROR(IllConditioned);
WASSHEAT_DEFINE_ERROR(NotStabilized);
WASSHEAT_DEFINE_ERROR(SupportExceedsBall);
WASSHEAT_DEFINE_ERROR(ConfigError);

#undef WASSHEAT_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Numeric helpers
// ---------------------------------------------------------------------------

// Factorial as double; exact for n <= 22 (well past every arity guard here).
inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = (k < n - k) ? k : n - k;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * static_cast<double>(n - k + i) / static_cast<double>(i);
    return b;
}

// Compensated accumulator (Kahan-Babuska/Neumaier: unlike plain Kahan the
// carry survives terms larger than the running sum). Tensor loops sum up to
// 1e7 terms of mixed sign; plain summation loses 2-3 digits there, which
// matters against 1e-10 gates.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

struct KahanC {
    Kahan re, im;
    void add(cplx z) { re.add(z.real()); im.add(z.imag()); }
    cplx value() const { return {re.value(), im.value()}; }
};

inline bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace wassheat
