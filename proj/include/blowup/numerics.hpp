#pragma once

// Small numerical toolbox: adaptive Gauss-Kronrod quadrature, alternating
// series acceleration, least-squares line fits, and the blow-up asymptote fit
// shared by the ODE and PDE integrators.

#include <functional>
#include <span>
#include <vector>

namespace blowup {

struct LinearFit {
    double intercept = 0;
    double slope = 0;
    double rms = 0;  // root mean square residual (absolute)
};

/// Least squares y ~ intercept + slope * x.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

struct QuadratureResult {
    double value = 0;
    double error_estimate = 0;
    bool converged = true;
    long evaluations = 0;
};

/// Adaptive Gauss(7)-Kronrod(15) on [a, b].
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double abs_tol = 1e-12, double rel_tol = 1e-12,
                                int max_depth = 48);

/// One non-adaptive 7-point Gauss panel on [a, b] (cheap building block for
/// oscillatory half-period sums).
double gauss7(const std::function<double(double)>& f, double a, double b);

/// Sum of an alternating-ish series by iterated averaging of partial sums
/// (van Wijngaarden). Terms must eventually decrease smoothly in magnitude.
double alternating_series_sum(std::span<const double> terms);

struct BlowupFit {
    double t_star = 0;   // fitted asymptote (same coordinate as the input ts)
    double gamma = 0;    // x ~ C (t_star - t)^{-gamma}
    double log_C = 0;
    double rms = 0;      // residual of log x vs the model
    bool ok = false;
};

/// Fit x(t) ~ C (t* - t)^{-gamma} on the given points (t strictly increasing,
/// x positive and growing). Scans t* > t.back() with a nested linear fit.
BlowupFit fit_blowup_asymptote(std::span<const double> ts, std::span<const double> xs);

/// log(integral of exp(h(s)) ds over [a,b]) by adaptive GK15 on the factored
/// integrand; stable when h reaches magnitudes far outside double range.
double log_integrate_exp(const std::function<double(double)>& h, double a, double b,
                         double rel_tol = 1e-10);

}  // namespace blowup
