#pragma once

// Evolution of u_t = Delta_alpha u + f(u) on periodic boxes (n = 1, 2) by
// Strang splitting with an exact pointwise nonlinear flow for power laws,
// blow-up detection, the Duhamel residual, the kernel moment functional and
// Jensen check, and the small-data supersolution iteration.

#include <ostream>
#include <vector>

#include "blowup/kernel.hpp"
#include "blowup/nonlinearity.hpp"
#include "blowup/ode.hpp"
#include "blowup/verdict.hpp"

namespace blowup {

struct PdeProblem {
    Nonlinearity f;
    KernelSpec spec;
    GridSpec grid;
    Field phi;

    void validate() const;
};

struct PdeBudget {
    double t_max = 10.0;
    double sup_blowup = 1e6;
    double dt_init = 1e-3;
    double dt_min = 1e-10;
    double tol = 1e-7;  // step-doubling relative error target
    long max_steps = 2000000;
    std::vector<double> snapshot_times;
    double domain_mass_fraction = 0.9999;
    bool check_domain = true;

    [[nodiscard]] PdeBudget refined() const {  // N doubling is the caller's job
        PdeBudget b = *this;
        b.dt_init *= 0.5;
        b.tol *= 0.125;
        return b;
    }
};

struct Snapshot {
    double t;
    Field u;
};

struct PdeTrace {
    std::vector<double> times, sup_norms, l1_norms, dts;
    std::vector<Snapshot> snapshots;
    std::vector<double> z_values;  // aligned with snapshots once computed
    Verdict verdict;
    long steps_accepted = 0;
    long steps_rejected = 0;
    long clamp_events = 0;
    std::string solver_note;

    void write_csv(std::ostream& os) const;  // t, sup, l1, z, dt
};

PdeTrace evolve(const PdeProblem& prob, const PdeBudget& budget);

/// Max over t_check of the relative sup-norm deviation of u(t) from
/// S(t)phi + int_0^t S(t-s) f(u(s)) ds, trapezoid over the stored snapshots.
double duhamel_residual(const PdeTrace& trace, const PdeProblem& prob,
                        std::span<const double> t_check);

/// z(t) = int K(x,t) u(x,t) dx on every stored snapshot with t > 0; fills
/// trace.z_values and returns the series.
std::vector<double> moment_functional(PdeTrace& trace, const PdeProblem& prob);

struct JensenResult {
    double lhs = 0;  // int K f(v) under the unit-normalized kernel weights
    double rhs = 0;  // f(int K v)
};

/// Jensen step for convex f; violation beyond 1e-10 (1 + |lhs|) throws
/// ConvexityViolation since the inequality is exact.
JensenResult jensen_check(const Field& snapshot, const PdeProblem& prob, double t);

struct SupersolutionResult {
    double rho = 0;   // admissible smallness bound on ||phi||_1 + ||phi||_inf
    double tau = 0;   // chosen with 2 ell(2) tau < 1
    bool supersolution_ok = false;  // F(w;phi) <= w pointwise
    bool monotone = false;          // iterates decrease pointwise
    std::vector<double> iterate_gaps;  // sup |u_{k+1} - u_k| per iteration
    double limit_gap = 0;              // sup gap between final iterate and evolve
};

/// Monotone iteration u_{k+1} = F(u_k; phi) from w = 2 S(t) phi on a uniform
/// time grid over [0, T]; requires the near-zero integral of u^{-p_a} ell(u)
/// to converge and the data to satisfy the computed smallness bound.
SupersolutionResult supersolution_iterate(const PdeProblem& prob, int iterations, double T,
                                          int time_nodes, const PdeBudget& budget);

struct PhiFamilyMember {
    std::string shape;  // "gaussian" or "plateau"
    double amplitude = 0;
    Field field;
};

Field make_gaussian_field(const GridSpec& grid, int n, double amplitude, double sigma,
                          double center = 0.0);
/// Mollified indicator of radius R: amplitude * 0.5 (1 + tanh((R - |x|)/w)).
Field make_plateau_field(const GridSpec& grid, int n, double amplitude, double radius,
                         double width);

struct PdeSweepResult {
    Verdict verdict;
    std::vector<std::pair<std::string, Verdict>> cells;  // label -> verdict
    bool anomaly = false;
};

/// Aggregation identical to ode_blowup_property over a phi family spanning
/// >= 4 decades of amplitude and two shapes.
PdeSweepResult pde_blowup_property(const Nonlinearity& f, const KernelSpec& spec,
                                   const GridSpec& grid,
                                   const std::vector<PhiFamilyMember>& family,
                                   const PdeBudget& budget);

}  // namespace blowup
