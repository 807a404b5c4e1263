#pragma once

// The auxiliary scalar ODE x' = f(x) - (n/(alpha t)) x, x(t0) = x0 > 0, with
// finite-time blow-up detection, its y = t^{n/alpha} x companion, the Volterra
// integral-form residual, and the sampled blow-up-property sweep.
//
// Integration runs in log-time tau = ln t (dx/dtau = e^tau f(x) - (n/alpha) x):
// near-critical sources blow up at times like 1e25, which adaptive stepping in
// tau reaches in a few thousand steps while plain time stepping cannot.

#include <vector>

#include "blowup/nonlinearity.hpp"
#include "blowup/verdict.hpp"

namespace blowup {

struct OdeProblem {
    Nonlinearity f;
    double alpha = 2.0;
    int n = 1;
    double t0 = 1.0;
    double x0 = 1.0;

    void validate() const {
        CriticalExponent check(alpha, n);
        if (!(t0 > 0)) throw InvalidRange("t0 must be positive");
        if (!(x0 > 0)) throw InvalidRange("x0 must be positive");
    }
};

struct OdeBudget {
    double t_max = 1e6;
    double x_blowup = 1e8;
    double min_step = 1e-12;  // in tau
    double rtol = 1e-9;
    double atol = 1e-280;

    [[nodiscard]] OdeBudget halved() const {
        OdeBudget b = *this;
        b.rtol *= 0.5;
        b.atol *= 0.5;
        return b;
    }
};

struct DenseStep {
    double tau0 = 0, h = 0;
    double rc[5] = {0, 0, 0, 0, 0};  // continuous extension coefficients
};

struct OdeTrace {
    std::vector<double> tau;  // ln t, strictly increasing
    std::vector<double> x;    // positive throughout (x or y depending on path)
    std::vector<DenseStep> dense;
    long steps_accepted = 0;
    long steps_rejected = 0;
    bool in_y_coordinates = false;
    Verdict verdict;

    [[nodiscard]] double time(size_t i) const { return std::exp(tau[i]); }
    /// Dense-output evaluation at any tau inside the integrated range.
    [[nodiscard]] double value_at(double tau_query) const;
    void write_csv(std::ostream& os) const;  // t, x, step, order
};

OdeTrace integrate(const OdeProblem& prob, const OdeBudget& budget);

/// Integrates y(t) = t^{n/alpha} x(t), y' = y L(y t^{-n/alpha}); the returned
/// trace holds y. y is non-decreasing for f >= 0.
OdeTrace integrate_y(const OdeProblem& prob, const OdeBudget& budget);

struct VolterraResult {
    double max_residual = 0;
    size_t nodes_checked = 0;
    size_t nodes_excluded = 0;  // near-singularity nodes (x > 1e6) skipped
};

/// Residual of x(t) = (t/t0)^{-n/a} x0 + int_t0^t (t/s)^{-n/a} f(x(s)) ds
/// along the trace, quadrature on the dense output.
VolterraResult volterra_residual(const OdeTrace& trace, const OdeProblem& prob);

struct OdeSweepSample {
    std::vector<double> x0s;  // >= 4 decades
    std::vector<double> t0s;  // >= 2 decades
    void validate() const;
};

struct SweepCell {
    double x0 = 0, t0 = 0;
    Verdict verdict;
};

struct OdeSweepResult {
    Verdict verdict;
    std::vector<SweepCell> cells;
    bool anomaly = false;  // blow-up and global witnesses coexist (numerical)
};

/// BlowUp if every sampled run blows up; Global if any run is global (one
/// witness falsifies the property); Undetermined if any run is undetermined
/// and none is global.
OdeSweepResult ode_blowup_property(const Nonlinearity& f, double alpha, int n,
                                   const OdeSweepSample& sample, const OdeBudget& budget);

}  // namespace blowup
