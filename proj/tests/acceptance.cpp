// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code; runtime budgets are
// asserted alongside the numerical checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "blowup/example4.hpp"
#include "blowup/kernel.hpp"
#include "blowup/logspace.hpp"
#include "blowup/nonlinearity.hpp"
#include "blowup/numerics.hpp"
#include "blowup/ode.hpp"
#include "blowup/pde.hpp"
#ifdef BLOWUP_HAVE_MPFR
#include "mpfr_oracle.hpp"
#endif

using namespace blowup;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

struct Criterion {
    const char* name;
    double budget_seconds;
    bool ok = true;
    std::vector<std::string> why;
    clock_type::time_point start = clock_type::now();

    Criterion(const char* name_, double budget_) : name(name_), budget_seconds(budget_) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            why.push_back(what);
        }
    }

    void finish() {
        const double elapsed =
            std::chrono::duration<double>(clock_type::now() - start).count();
        require(elapsed < budget_seconds,
                "runtime " + std::to_string(elapsed) + " s exceeds budget " +
                    std::to_string(budget_seconds) + " s");
        std::printf("[%s] %s (%.1f s)\n", ok ? "PASS" : "FAIL", name, elapsed);
        for (const std::string& w : why) std::printf("        - %s\n", w.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

struct CellRecord {
    std::string label;
    Outcome criterion;
    Outcome ode;
    bool ode_determined;
};
std::vector<CellRecord> g_matrix;  // feeds criterion 8

OdeSweepSample standard_sample() {
    OdeSweepSample s;
    s.x0s = {1e-2, 1e-1, 1.0, 1e1, 1e2};
    s.t0s = {0.1, 1.0, 10.0};
    return s;
}

void criterion_1() {
    Criterion c("criterion 1: power-law dichotomy boundary", 300.0);
    const std::pair<double, int> cells[] = {{2.0, 1}, {1.0, 1}, {1.0, 2}, {0.5, 1}};
    OdeBudget budget;
    budget.t_max = 1e30;  // tau-adaptive stepping makes deep horizons cheap

    for (auto [alpha, n] : cells) {
        const double pa = 1.0 + alpha / n;
        const std::string tag =
            "(alpha=" + std::to_string(alpha) + ", n=" + std::to_string(n) + ")";

        // Criterion verdict flips between p_alpha and p_alpha + 0.01.
        const Verdict at = classify(Nonlinearity::power_law(pa), alpha, n);
        const Verdict above = classify(Nonlinearity::power_law(pa + 0.01), alpha, n);
        const Verdict below = classify(Nonlinearity::power_law(pa - 0.01), alpha, n);
        c.require(at.is_blow_up(), tag + " classify(p_alpha) expected BlowUp, got " + at.str());
        c.require(above.is_global(),
                  tag + " classify(p_alpha + 0.01) expected Global, got " + above.str());
        c.require(below.is_blow_up(),
                  tag + " classify(p_alpha - 0.01) expected BlowUp, got " + below.str());

        // ODE sweeps agree at p_alpha +- 0.25.
        const OdeSweepResult sub = ode_blowup_property(Nonlinearity::power_law(pa - 0.25),
                                                       alpha, n, standard_sample(), budget);
        c.require(sub.verdict.is_blow_up(),
                  tag + " ODE sweep at p_alpha - 0.25 expected BlowUp, got " +
                      sub.verdict.str());
        g_matrix.push_back({tag + " p=pa-0.25", Outcome::BlowUp, sub.verdict.outcome,
                            !sub.verdict.is_undetermined()});

        const OdeSweepResult sup = ode_blowup_property(Nonlinearity::power_law(pa + 0.25),
                                                       alpha, n, standard_sample(), budget);
        c.require(sup.verdict.is_global(),
                  tag + " ODE sweep at p_alpha + 0.25 expected Global, got " +
                      sup.verdict.str());
        g_matrix.push_back({tag + " p=pa+0.25", Outcome::Global, sup.verdict.outcome,
                            !sup.verdict.is_undetermined()});

        // Critical case: horizon-limited Undetermined allowed only because the
        // criterion says BlowUp; a Global witness would falsify the dichotomy.
        const OdeSweepResult crit = ode_blowup_property(Nonlinearity::power_law(pa), alpha, n,
                                                        standard_sample(), budget);
        c.require(!crit.verdict.is_global(),
                  tag + " ODE sweep at p_alpha found a Global witness: " + crit.verdict.str());
        c.require(at.is_blow_up(), tag + " criterion must say BlowUp at p_alpha");
        g_matrix.push_back({tag + " p=pa", Outcome::BlowUp, crit.verdict.outcome,
                            !crit.verdict.is_undetermined()});
    }
    c.finish();
}

void criterion_2() {
    Criterion c("criterion 2: log-corrected boundary at beta = 1", 60.0);
    for (double alpha : {2.0, 1.0}) {
        const int n = 1;
        for (double beta : {0.5, 0.9, 1.0}) {
            const Verdict v = classify(Nonlinearity::log_corrected(alpha, n, beta, 0.01),
                                       alpha, n);
            c.require(v.is_blow_up(), "beta=" + std::to_string(beta) + " alpha=" +
                                          std::to_string(alpha) + " expected BlowUp, got " +
                                          v.str());
            g_matrix.push_back({"logcorr beta=" + std::to_string(beta), Outcome::BlowUp,
                                Outcome::Undetermined, false});
        }
        for (double beta : {1.1, 1.5}) {
            const Verdict v = classify(Nonlinearity::log_corrected(alpha, n, beta, 0.01),
                                       alpha, n);
            c.require(v.is_global(), "beta=" + std::to_string(beta) + " alpha=" +
                                         std::to_string(alpha) + " expected Global, got " +
                                         v.str());
            g_matrix.push_back({"logcorr beta=" + std::to_string(beta), Outcome::Global,
                                Outcome::Undetermined, false});
        }
    }
    c.finish();
}

void criterion_3() {
    Criterion c("criterion 3: distinguishing-example construction report", 60.0);
    ExampleParams sets[2];
    sets[0] = ExampleParams{};  // alpha=2, n=1, p=2, theta=1.75, q=0.75
    sets[1].alpha = 1.0;
    sets[1].n = 1;
    sets[1].p = 1.5;
    sets[1].theta = 2.5;
    sets[1].q = 0.75;

    for (ExampleParams& params : sets) {
        params.validate();
        const std::string tag = "(alpha=" + std::to_string(params.alpha) + ")";
        auto construction = build(params);
        const Nonlinearity f = Nonlinearity::stepwise(construction);

        // Ordering invariants on the stored data.
        const auto& iv = construction->intervals();
        bool ordered = true;
        for (size_t k = 0; k + 1 < iv.size(); ++k) {
            if (!iv[k].float_valid) break;
            if (!(iv[k].log_v < iv[k].log_u) || !(iv[k + 1].log_u <= iv[k].log_v))
                ordered = false;
        }
        c.require(ordered, tag + " interval ordering violated");

        // Joint continuity at 1e-10 (cancellation-free residuals, all indices).
        double worst = 0;
        for (int i = params.i_min; i <= params.i_max; ++i) {
            const JointResiduals jr = joint_continuity_residuals(params, i);
            worst = std::max({worst, std::fabs(jr.at_v), std::fabs(jr.at_u_next)});
        }
        c.require(worst <= 1e-10,
                  tag + " joint continuity residual " + std::to_string(worst));

        const ConvexityWindow w = check_convexity_window(params);
        c.require(w.holds_from == 1, tag + " convexity window starts at i=" +
                                         std::to_string(w.holds_from));
        const FMonotone fm = check_F_monotone(params);
        c.require(fm.limit_ratio > 1.0, tag + " F-monotone limit not above one");

        c.require(step3_divergence(params, 8) > 1e6,
                  tag + " step-3 partial sum at I=8 below 1e6");

        bool ratios_exact = true, members = true;
        for (int i = params.i_min; i < std::min(params.i_max, 20); ++i) {
            const DiagonalRatio dr = step4_diagonal_ratio(params, i);
            if (dr.log_ratio != -(2.0 * i + 1.0)) ratios_exact = false;
            if (i >= step4_membership_threshold(params) && !dr.member()) members = false;
        }
        c.require(ratios_exact, tag + " step-4 log ratio not exactly -(2i+1)");
        c.require(members, tag + " step-4 membership fails past its threshold");

        c.require(sugitani_liminf(f, params.alpha, params.n) == 0.0,
                  tag + " sugitani liminf nonzero");
        const Verdict v = classify(f, params.alpha, params.n);
        c.require(v.is_blow_up(), tag + " classify expected BlowUp, got " + v.str());

#ifdef BLOWUP_HAVE_MPFR
        // 200-digit oracle on the log-space data for i <= 4.
        const oracle::StepwiseOracle orc(params.theta, params.p_alpha());
        for (const LogIntervalData& d : iv) {
            if (d.i > 4) break;
            const double lu = log(orc.u(d.i)).d();
            const double lv = log(orc.v(d.i)).d();
            const double la = log(orc.a(d.i)).d();
            const double lb = log(orc.b(d.i)).d();
            c.require(std::fabs(d.log_u - lu) <= 1e-10 * std::fabs(lu),
                      tag + " log u_i oracle mismatch at i=" + std::to_string(d.i));
            c.require(std::fabs(d.log_v - lv) <= 1e-10 * std::fabs(lv),
                      tag + " log v_i oracle mismatch at i=" + std::to_string(d.i));
            c.require(std::fabs(d.log_a - la) <= 1e-10 * std::fabs(la),
                      tag + " log a_i oracle mismatch at i=" + std::to_string(d.i));
            c.require(std::fabs(d.log_b - lb) <= 1e-10 * std::fabs(lb),
                      tag + " log b_i oracle mismatch at i=" + std::to_string(d.i));
        }
#else
        c.require(false, "MPFR oracle unavailable in this build");
#endif
    }
    c.finish();
}

void criterion_4() {
    Criterion c("criterion 4: kernel identities", 120.0);

    // Mass of the sampled kernel.
    {
        const Field k = kernel_field({2.0, 1}, GridSpec{20.0, 1024}, 0.1);
        c.require(std::fabs(mass(k) - 1.0) <= 1e-9,
                  "kernel mass off by " + std::to_string(mass(k) - 1.0));
    }
    // Scaling identity to 1e-8 relative (closed forms and explicit-t inversion).
    {
        double worst = 0;
        for (double alpha : {2.0, 1.0}) {
            const KernelSpec spec{alpha, 1};
            for (double t : {0.25, 4.0})
                for (double r : {0.0, 0.7, 3.3, 11.0}) {
                    const double lhs = kernel_eval_radial(spec, r, t);
                    const double rhs = std::pow(t, -1.0 / alpha) *
                                       kernel_eval_radial(spec, r * std::pow(t, -1.0 / alpha),
                                                          1.0);
                    worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
                }
        }
        for (double alpha : {1.7, 0.6}) {
            for (double t : {0.25, 4.0})
                for (double r : {0.0, 0.7, 3.3, 11.0}) {
                    const double lhs = fourier_inversion_profile(alpha, 1, r, t);
                    const double rhs = std::pow(t, -1.0 / alpha) *
                                       fourier_inversion_profile(
                                           alpha, 1, r * std::pow(t, -1.0 / alpha), 1.0);
                    worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
                }
        }
        c.require(worst <= 1e-8, "scaling identity off by " + std::to_string(worst));
    }
    // Semigroup composition to 1e-10 sup-norm.
    {
        const GridSpec grid{10.0, 256};
        for (double alpha : {2.0, 1.3}) {
            const KernelSpec spec{alpha, 1};
            const double k0 = 3.141592653589793 / grid.L;
            const Field phi = Field::from_function(grid, [&](double x) {
                return 2.0 + std::cos(3 * k0 * x) + 0.5 * std::sin(7 * k0 * x);
            });
            const Field two = semigroup_apply(spec, semigroup_apply(spec, phi, 0.4), 0.6);
            const Field one = semigroup_apply(spec, phi, 1.0);
            double worst = 0;
            for (size_t i = 0; i < one.size(); ++i)
                worst = std::max(worst, std::fabs(one[i] - two[i]));
            c.require(worst <= 1e-10, "semigroup composition off by " + std::to_string(worst));
        }
    }
    // Kernel ratio bound on the 3 x 3 x 3 grid.
    {
        const GridSpec grid{10.0, 512};
        for (double alpha : {0.5, 1.0, 2.0}) {
            for (double s : {0.25, 0.5, 1.0}) {
                for (double t : {1.0, 2.0, 4.0}) {
                    const RatioBound rb =
                        kernel_ratio_bound_check(KernelSpec{alpha, 1}, grid, s, t);
                    c.require(rb.min_ratio >= 1.0 - 1e-6,
                              "ratio bound " + std::to_string(rb.min_ratio) + " at alpha=" +
                                  std::to_string(alpha));
                }
            }
        }
    }
    // alpha = 1 profile against the Cauchy closed form.
    {
        double worst = 0;
        for (double r : {0.0, 0.5, 2.0, 10.0, 40.0}) {
            const double got = fourier_inversion_profile(1.0, 1, r);
            const double want = 1.0 / (3.141592653589793 * (1.0 + r * r));
            worst = std::max(worst, std::fabs(got - want) / want);
        }
        c.require(worst <= 1e-8, "Cauchy profile off by " + std::to_string(worst));
    }
    c.finish();
}

void criterion_5() {
    Criterion c("criterion 5: ODE/PDE consistency", 300.0);

    // Spatially constant data reduces evolve to the pointwise autonomous ODE.
    for (double alpha : {2.0, 1.5}) {
        const KernelSpec spec{alpha, 1};
        const GridSpec grid{10.0, 128};
        Field phi(grid, 1);
        for (size_t i = 0; i < phi.size(); ++i) phi[i] = 0.5;
        PdeProblem prob{Nonlinearity::power_law(2.0), spec, grid, phi};
        PdeBudget budget;
        budget.t_max = 1.0;
        budget.snapshot_times = {1.0};
        budget.check_domain = false;
        const PdeTrace trace = evolve(prob, budget);
        const double want = 0.5 / (1.0 - 0.5 * 1.0);  // u' = u^2 closed form
        double worst = 0;
        for (size_t i = 0; i < trace.snapshots[0].u.size(); ++i)
            worst = std::max(worst, std::fabs(trace.snapshots[0].u[i] - want));
        c.require(worst <= 1e-8, "constant-data reduction off by " + std::to_string(worst));
    }

    // Volterra residual <= 1e-6 on global ODE runs.
    {
        OdeProblem prob{Nonlinearity::power_law(4.0), 2.0, 1, 1.0, 0.1};
        const OdeTrace trace = integrate(prob, OdeBudget{});
        c.require(trace.verdict.is_global(), "reference ODE run not global");
        const VolterraResult vr = volterra_residual(trace, prob);
        c.require(vr.max_residual <= 1e-6,
                  "volterra residual " + std::to_string(vr.max_residual));
    }

    // Duhamel residual <= 1e-4 on a global PDE run, ~4x reduction under node
    // doubling.
    {
        const KernelSpec spec{2.0, 1};
        const GridSpec grid{20.0, 512};
        PdeProblem prob{Nonlinearity::power_law(4.0), spec, grid,
                        make_gaussian_field(grid, 1, 0.05, 0.5)};
        const double t_checks[] = {2.0};
        auto resid_with_nodes = [&](int m) {
            PdeBudget budget;
            budget.t_max = 2.0;
            budget.tol = 1e-9;
            for (int j = 0; j <= m; ++j) budget.snapshot_times.push_back(2.0 * j / m);
            const PdeTrace trace = evolve(prob, budget);
            return duhamel_residual(trace, prob, t_checks);
        };
        const double r8 = resid_with_nodes(8);
        const double r16 = resid_with_nodes(16);
        c.require(r8 <= 1e-4, "duhamel residual " + std::to_string(r8));
        c.require(r8 / r16 >= 2.5 && r8 / r16 <= 6.0,
                  "node-doubling reduction " + std::to_string(r8 / r16) + " not ~4x");
    }
    c.finish();
}

void criterion_6() {
    Criterion c("criterion 6: small-data global bound (f = u^4)", 600.0);
    const KernelSpec spec{2.0, 1};
    const GridSpec grid{160.0, 4096};
    PdeProblem prob{Nonlinearity::power_law(4.0), spec, grid,
                    make_gaussian_field(grid, 1, 0.01, 0.25)};
    PdeBudget budget;
    budget.t_max = 100.0;
    budget.snapshot_times = {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
    const PdeTrace trace = evolve(prob, budget);
    c.require(trace.verdict.is_global(), "run not global: " + trace.verdict.str());

    // u(t) <= 2 S(t) phi + 1e-8 pointwise on every snapshot.
    double excess = -1e300;
    for (const Snapshot& s : trace.snapshots) {
        const Field w = semigroup_apply(spec, prob.phi, s.t);
        for (size_t i = 0; i < w.size(); ++i)
            excess = std::max(excess, s.u[i] - 2.0 * w[i]);
    }
    c.require(excess <= 1e-8, "u exceeds 2 S(t) phi by " + std::to_string(excess));

    // Monotone supersolution iteration.
    const SupersolutionResult ss = supersolution_iterate(prob, 6, 2.0, 24, budget);
    c.require(ss.supersolution_ok, "F(w) <= w fails");
    c.require(ss.monotone, "iterates not monotone decreasing");
    c.require(ss.limit_gap < 1e-4, "gap to evolve " + std::to_string(ss.limit_gap));

    // Sup-norm decay slope -0.5 +- 0.05 over t in [1, 100].
    std::vector<double> lt, ls;
    for (size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.times[i] < 1.0 || trace.times[i] > 100.0) continue;
        lt.push_back(std::log(trace.times[i]));
        ls.push_back(std::log(trace.sup_norms[i]));
    }
    const LinearFit fit = fit_linear(lt, ls);
    c.require(std::fabs(fit.slope + 0.5) <= 0.05,
              "decay slope " + std::to_string(fit.slope) + " not within -0.5 +- 0.05");
    c.finish();
}

void criterion_7() {
    Criterion c("criterion 7: PDE blow-up witness with refinement stability", 600.0);
    const KernelSpec spec{2.0, 1};
    double t_stars[2] = {0, 0};
    int idx = 0;
    for (int N : {2048, 4096}) {
        const GridSpec grid{240.0, N};
        PdeProblem prob{Nonlinearity::power_law(2.0), spec, grid,
                        make_gaussian_field(grid, 1, 0.05, 1.0)};
        PdeBudget budget;
        budget.t_max = 2000.0;
        budget.sup_blowup = 1e6;
        budget.dt_min = 1e-10;
        budget.snapshot_times = {1.0, 5.0, 20.0, 50.0, 100.0, 200.0, 300.0};
        if (N == 4096) budget = budget.refined();
        const PdeTrace trace = evolve(prob, budget);
        c.require(trace.verdict.is_blow_up(),
                  "N=" + std::to_string(N) + " verdict " + trace.verdict.str());
        t_stars[idx++] = trace.verdict.t_star.value_or(-1.0);
        // Jensen on every stored snapshot (the inequality is exact for convex f;
        // jensen_check throws on violation).
        for (const Snapshot& s : trace.snapshots) {
            try {
                (void)jensen_check(s.u, prob, s.t);
            } catch (const ConvexityViolation& e) {
                c.require(false, std::string("jensen: ") + e.what());
            }
        }
    }
    c.require(t_stars[0] > 0 && t_stars[1] > 0, "missing t*");
    const double drift = std::fabs(t_stars[0] - t_stars[1]) / std::max(t_stars[0], t_stars[1]);
    c.require(drift <= 0.05, "t* drift " + std::to_string(drift) + " above 5%");
    c.finish();
}

void criterion_8() {
    Criterion c("criterion 8: dichotomy agreement matrix", 10.0);
    size_t determined = 0;
    for (const CellRecord& cell : g_matrix) {
        if (!cell.ode_determined) continue;
        ++determined;
        c.require(cell.ode == cell.criterion,
                  "disagreement at " + cell.label);
    }
    c.require(determined >= 8, "too few determined cells across criteria 1-2");
    c.finish();
}

}  // namespace

int main() {
    std::printf("acceptance suite: blow-up dichotomy laboratory\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
