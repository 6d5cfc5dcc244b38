#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace casimir {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-300;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct FitResult {
    double amplitude = 0.0;
    double exponent = 0.0;
    double residual_rms = 0.0;
};

// integral of f(y)*exp(-y) over [lower, inf). The exponential weight is
// implicit: pass f = y^n to get Gamma(n+1) from lower = 0. Adaptive
// Gauss-Kronrod panels up to a cutoff L with e^{-L}*max|f| below tol.abs;
// the remainder beyond L is bounded analytically.
QuadratureResult integrate_expweighted(const std::function<double(double)>& f,
                                       double lower, Tolerance tol = {});

// Primed Matsubara sum: term(0)/2 + sum_{l>=1} term(l). term must decay at
// least exponentially beyond some l0. Truncation: the tail is estimated by
// integrating term over [l,inf) with the same quadrature and the sum stops
// once the estimate drops below tol.rel * |partial sum|.
QuadratureResult sum_matsubara(const std::function<double(double)>& term,
                               Tolerance tol = {});

// Central-difference df/dt with two Richardson levels. The base step is
// rel_step * max(|t|, scale); `scale` guards t near 0. Returns (value,
// error estimate from the last extrapolation difference).
std::pair<double, double> differentiate(const std::function<double(double)>& f,
                                        double t, double scale,
                                        double rel_step = 1e-3);

// Least-squares line in (ln t, ln v): v = amplitude * t^exponent. All
// t and v must be positive; residual_rms is the rms of ln-residuals.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points);

namespace detail {

// One non-adaptive 15-point Gauss-Kronrod panel on [a,b]; the error field
// is the |K15-G7| embedded estimate.
QuadratureResult gk15_panel(const std::function<double(double)>& f, double a,
                            double b);

// Barycentric Chebyshev-Lobatto interpolant on [a,b]. Kept continuous
// (values exact at endpoints) so piecewise chains have no jumps; derivative
// kinks at joints are harmless to the consumers below.
class ChebInterp {
  public:
    ChebInterp() = default;
    ChebInterp(const std::function<double(double)>& f, double a, double b,
               int n);
    double operator()(double x) const;
    double integral() const; // Clenshaw-Curtis on the stored values
    double lower() const { return a_; }
    double upper() const { return b_; }

  private:
    double a_ = 0.0, b_ = 1.0;
    std::vector<double> x_, fv_, w_;
};

} // namespace detail
} // namespace casimir
