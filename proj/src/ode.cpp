#include "blowup/ode.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>

#include "blowup/logspace.hpp"
#include "blowup/numerics.hpp"

namespace blowup {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct DecadeRecord {
    double tau;
    double log_y;  // log of t^{n/alpha} x(t)
};

struct GlobalCertificate {
    bool certified = false;
    std::string how;
};

// Global verdicts need the per-decade increments of y = t^{n/alpha} x to be
// certifiably summable; slope stabilization alone cannot distinguish a global
// run from a subcritical one still creeping toward blow-up.
GlobalCertificate y_increments_summable(const std::vector<DecadeRecord>& recs,
                                        double noise_floor) {
    GlobalCertificate out;
    if (recs.size() < 4) return out;
    std::vector<double> inc, idx;
    for (size_t i = 0; i + 1 < recs.size(); ++i) {
        const double y0 = std::exp(recs[i].log_y);
        const double y1 = std::exp(recs[i + 1].log_y);
        if (!std::isfinite(y0) || !std::isfinite(y1)) return out;
        inc.push_back(y1 - y0);
        idx.push_back(static_cast<double>(i + 1));
    }
    const double y_end = std::exp(recs.back().log_y);
    // Cauchy-stable tail (threshold above the integrator's own noise).
    size_t stagnant = 0;
    for (size_t i = inc.size(); i-- > 0;) {
        if (inc[i] <= noise_floor * y_end)
            ++stagnant;
        else
            break;
    }
    if (stagnant >= 3) {
        out.certified = true;
        out.how = "y Cauchy-stable over the final decades";
        return out;
    }
    // Geometric decrease of the final increments.
    size_t geo = 0;
    for (size_t i = inc.size(); i-- > 1;) {
        if (inc[i] > 0 && inc[i - 1] > 0 && inc[i] <= 0.9 * inc[i - 1])
            ++geo;
        else
            break;
    }
    if (geo >= 3) {
        out.certified = true;
        out.how = "y increments geometric (ratio <= 0.9 over >= 3 decades)";
        return out;
    }
    // Summable power decay Delta_k ~ k^-s with s >= 1.1 over >= 8 decades.
    if (inc.size() >= 8) {
        std::vector<double> lk, ld;
        for (size_t i = 0; i < inc.size(); ++i) {
            if (!(inc[i] > 0)) return out;
            lk.push_back(std::log(idx[i]));
            ld.push_back(std::log(inc[i]));
        }
        const LinearFit fit = fit_linear(lk, ld);
        if (-fit.slope >= 1.1 && fit.rms < 0.25) {
            out.certified = true;
            std::ostringstream os;
            os << "y increments ~ k^-" << -fit.slope << " (summable power)";
            out.how = os.str();
        }
    }
    return out;
}

struct Integration {
    OdeTrace trace;
};

// Shared adaptive driver; rhs(tau, x) is the transformed right-hand side and
// log_y(tau, x) maps the state to log of t^{n/alpha} x for decade records.
OdeTrace run_dopri5(const std::function<double(double, double)>& rhs,
                    const std::function<double(double, double)>& log_y_of, double tau0,
                    double x_init, double na, const OdeBudget& budget, bool y_coords) {
    OdeTrace trace;
    trace.in_y_coordinates = y_coords;
    const double tau_end = std::log(budget.t_max);

    double tau = tau0, x = x_init, h = 1e-3;
    double err_prev = 1.0;
    double k1 = rhs(tau, x);
    trace.tau.push_back(tau);
    trace.x.push_back(x);

    std::vector<DecadeRecord> decades;
    decades.push_back({tau, log_y_of(tau, x)});
    double next_decade = tau0 + std::log(10.0);

    const double ln10 = std::log(10.0);
    bool floor_hit = false;

    while (tau < tau_end) {
        h = std::min(h, tau_end - tau);
        if (tau + h == tau) {  // step below representable resolution
            floor_hit = true;
            break;
        }
        const double x2 = x + h * a21 * k1;
        if (!(x2 > 0) || !std::isfinite(x2)) {
            h *= 0.5;
            ++trace.steps_rejected;
            if (h < budget.min_step) {
                floor_hit = true;
                break;
            }
            continue;
        }
        const double k2 = rhs(tau + c2 * h, x2);
        const double x3 = x + h * (a31 * k1 + a32 * k2);
        const double k3 = rhs(tau + c3 * h, x3);
        const double x4 = x + h * (a41 * k1 + a42 * k2 + a43 * k3);
        const double k4 = rhs(tau + c4 * h, x4);
        const double x5 = x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        const double k5 = rhs(tau + c5 * h, x5);
        const double x6 = x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        const double k6 = rhs(tau + h, x6);
        const double x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const double k7 = rhs(tau + h, x_new);
        const double err_raw =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = budget.atol + budget.rtol * std::max(std::fabs(x), std::fabs(x_new));
        const double err = std::fabs(err_raw) / scale;

        const bool bad = !(x_new > 0) || !std::isfinite(x_new) || !std::isfinite(err);
        if (bad || err > 1.0) {
            ++trace.steps_rejected;
            h *= bad ? 0.5 : std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < budget.min_step) {
                floor_hit = true;
                break;
            }
            continue;
        }

        // Accept; store dense output.
        DenseStep ds;
        ds.tau0 = tau;
        ds.h = h;
        const double ydiff = x_new - x;
        const double bspl = h * k1 - ydiff;
        ds.rc[0] = x;
        ds.rc[1] = ydiff;
        ds.rc[2] = bspl;
        ds.rc[3] = ydiff - h * k7 - bspl;
        ds.rc[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        trace.dense.push_back(ds);

        // Decade checkpoints (dense interpolation at the crossing).
        while (next_decade <= tau + h) {
            const double th = (next_decade - tau) / h;
            const double xi = ds.rc[0] +
                              th * (ds.rc[1] +
                                    (1 - th) * (ds.rc[2] + th * (ds.rc[3] + (1 - th) * ds.rc[4])));
            decades.push_back({next_decade, log_y_of(next_decade, std::max(xi, 1e-300))});
            next_decade += ln10;
        }

        tau += h;
        x = x_new;
        k1 = k7;  // FSAL
        ++trace.steps_accepted;
        trace.tau.push_back(tau);
        trace.x.push_back(x);

        const double fac = 0.9 * std::pow(err + 1e-16, -0.14) * std::pow(err_prev + 1e-16, 0.08);
        h *= std::clamp(fac, 0.2, 6.0);
        err_prev = err;

        const double x_equiv = y_coords ? std::exp(std::log(x) - na * tau) : x;
        if (x_equiv >= budget.x_blowup || x >= 1e50) {
            // Keep grinding toward the singularity until the step floor, so
            // the asymptote fit sees the final decade of growth.
            const double floor = std::max(budget.min_step, 8.0 * 2.2e-16 * std::fabs(tau) + 1e-300);
            if (h < floor || x >= 1e50) {
                floor_hit = true;
                break;
            }
        }

        // Early global exit: five consecutive geometric decades.
        if (decades.size() >= 8 && trace.x.size() >= 16) {
            size_t geo = 0;
            for (size_t i = decades.size(); i-- > 1 && geo < 5;) {
                const double d1v = std::exp(decades[i].log_y) - std::exp(decades[i - 1].log_y);
                const double d0v = i >= 2 ? std::exp(decades[i - 1].log_y) -
                                                std::exp(decades[i - 2].log_y)
                                          : kPosInf;
                if (d1v >= 0 && (d1v <= 0.9 * d0v || d1v <= 1e-13 * std::exp(decades[i].log_y)))
                    ++geo;
                else
                    break;
            }
            if (geo >= 5) break;
        }
    }

    // ---- verdict ----
    const double x_end = trace.x.back();
    const double x_equiv_end =
        y_coords ? std::exp(std::log(x_end) - na * trace.tau.back()) : x_end;
    const bool grew = x_equiv_end >= budget.x_blowup || x_end >= 1e50 ||
                      (floor_hit && x_end > 1e4 * *std::min_element(trace.x.begin(), trace.x.end()));

    if (grew && (x_equiv_end >= budget.x_blowup || floor_hit)) {
        // Fit x ~ C (tau* - tau)^{-gamma} over the last decade of growth.
        std::vector<double> ts, xs;
        for (size_t i = 0; i < trace.x.size(); ++i) {
            if (trace.x[i] >= x_end / 10.0 &&
                (ts.empty() || trace.tau[i] > ts.back())) {
                ts.push_back(trace.tau[i]);
                xs.push_back(trace.x[i]);
            }
        }
        const BlowupFit fit = fit_blowup_asymptote(ts, xs);
        if (fit.ok) {
            std::optional<double> t_star;
            std::ostringstream note;
            if (fit.t_star < 700.0) {
                t_star = std::exp(fit.t_star);
                note << "gamma=" << fit.gamma;
            } else {
                note << "gamma=" << fit.gamma << ", tau*=" << fit.t_star
                     << " (t* beyond double range)";
            }
            trace.verdict = Verdict::blow_up(t_star, note.str());
            return trace;
        }
        if (floor_hit && x_equiv_end < budget.x_blowup)
            throw StepUnderflow("step size collapsed without confirmed superlinear growth");
        trace.verdict = Verdict::undetermined("threshold crossed but growth fit failed");
        return trace;
    }
    if (floor_hit)
        throw StepUnderflow("step size collapsed without growth (stiffness failure)");

    // Horizon reached (or early global exit): decay analysis.
    const GlobalCertificate cert =
        y_increments_summable(decades, std::max(1e-13, 10.0 * budget.rtol));
    // Slope of log x vs log t over the final factor of ten, split in halves;
    // sampled through the dense output (late accepted steps can span decades).
    double slope = 0;
    bool slope_stable = false;
    if (trace.tau.back() - trace.tau.front() > ln10) {
        const double tau_end_obs = trace.tau.back();
        std::vector<double> t1, l1, t2, l2;
        for (int j = 0; j <= 24; ++j) {
            const double tq = tau_end_obs - ln10 + ln10 * j / 24.0;
            const double xq = trace.value_at(tq);
            if (!(xq > 0)) continue;
            if (j <= 12) {
                t1.push_back(tq);
                l1.push_back(std::log(xq));
            } else {
                t2.push_back(tq);
                l2.push_back(std::log(xq));
            }
        }
        if (t1.size() >= 3 && t2.size() >= 3) {
            const double s1 = fit_linear(t1, l1).slope;
            const double s2 = fit_linear(t2, l2).slope;
            slope = 0.5 * (s1 + s2);
            slope_stable = std::fabs(s1 - s2) <= 0.05;
        }
    }
    const bool decreasing = y_coords ? slope <= na + 0.05 : slope <= 0.0;

    if (cert.certified && slope_stable && decreasing) {
        const double decay = y_coords ? na - slope : -slope;
        trace.verdict = Verdict::global(decay, cert.how);
        return trace;
    }
    std::ostringstream why;
    why << "horizon t_max reached: ";
    if (!cert.certified)
        why << "y increments not certifiably summable";
    else if (!slope_stable)
        why << "decay slope not stabilized";
    else
        why << "x not decreasing";
    trace.verdict = Verdict::undetermined(why.str());
    return trace;
}

}  // namespace

double OdeTrace::value_at(double tau_query) const {
    if (dense.empty() || tau_query <= tau.front()) return x.front();
    if (tau_query >= tau.back()) return x.back();
    size_t lo = 0, hi = dense.size();
    while (lo + 1 < hi) {
        const size_t mid = (lo + hi) / 2;
        if (dense[mid].tau0 <= tau_query)
            lo = mid;
        else
            hi = mid;
    }
    const DenseStep& ds = dense[lo];
    const double th = std::clamp((tau_query - ds.tau0) / ds.h, 0.0, 1.0);
    return ds.rc[0] +
           th * (ds.rc[1] + (1 - th) * (ds.rc[2] + th * (ds.rc[3] + (1 - th) * ds.rc[4])));
}

void OdeTrace::write_csv(std::ostream& os) const {
    os << "t,x,step,order\n";
    char buf[128];
    for (size_t i = 0; i < tau.size(); ++i) {
        const double step = i == 0 ? 0.0 : tau[i] - tau[i - 1];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,5\n", std::exp(tau[i]), x[i], step);
        os << buf;
    }
}

OdeTrace integrate(const OdeProblem& prob, const OdeBudget& budget) {
    prob.validate();
    const double na = static_cast<double>(prob.n) / prob.alpha;
    const Nonlinearity f = prob.f;
    auto rhs = [f, na](double tau, double x) {
        if (!(x > 0) || !std::isfinite(x)) return std::numeric_limits<double>::quiet_NaN();
        return std::exp(tau) * f.eval(x) - na * x;
    };
    auto log_y = [na](double tau, double x) { return std::log(x) + na * tau; };
    return run_dopri5(rhs, log_y, std::log(prob.t0), prob.x0, na, budget, false);
}

OdeTrace integrate_y(const OdeProblem& prob, const OdeBudget& budget) {
    prob.validate();
    const double na = static_cast<double>(prob.n) / prob.alpha;
    const Nonlinearity f = prob.f;
    // y' = y L(y t^{-n/alpha}); in tau: dy/dtau = e^tau y L(...), L = f(u)/u.
    auto rhs = [f, na](double tau, double y) {
        if (!(y > 0) || !std::isfinite(y)) return std::numeric_limits<double>::quiet_NaN();
        const double lu = std::log(y) - na * tau;
        const double logL = f.eval_log(lu) - lu;
        if (logL == kNegInf) return 0.0;
        const double ex = tau + std::log(y) + logL;
        return ex > 700.0 ? kPosInf : std::exp(ex);
    };
    auto log_y = [](double tau, double y) {
        (void)tau;
        return std::log(y);
    };
    const double y0 = std::pow(prob.t0, na) * prob.x0;
    return run_dopri5(rhs, log_y, std::log(prob.t0), y0, na, budget, true);
}

VolterraResult volterra_residual(const OdeTrace& trace, const OdeProblem& prob) {
    prob.validate();
    if (trace.in_y_coordinates) throw InvalidRange("volterra_residual expects an x-trace");
    const double na = static_cast<double>(prob.n) / prob.alpha;
    const double tau0 = trace.tau.front();
    const double x0 = trace.x.front();
    const Nonlinearity& f = prob.f;

    // W(tau) = int_{tau0}^{tau} e^{s(1+na)} f(x(s)) ds, accumulated in log
    // space; x(tau) = e^{-(tau-tau0) na} x0 + e^{-tau na} W(tau).
    auto h = [&](double s) { return f.eval_log(std::log(trace.value_at(s))) + (1.0 + na) * s; };

    VolterraResult result;
    double log_W = kNegInf;
    for (size_t i = 1; i < trace.tau.size(); ++i) {
        log_W = log_sum_exp(log_W, log_integrate_exp(h, trace.tau[i - 1], trace.tau[i], 1e-11));
        if (trace.x[i] > 1e6) {
            ++result.nodes_excluded;
            continue;
        }
        const double decay = x0 * std::exp(-(trace.tau[i] - tau0) * na);
        const double duhamel = std::exp(log_W - trace.tau[i] * na);
        const double resid = std::fabs(trace.x[i] - decay - duhamel) / std::fabs(trace.x[i]);
        result.max_residual = std::max(result.max_residual, resid);
        ++result.nodes_checked;
    }
    return result;
}

void OdeSweepSample::validate() const {
    if (x0s.size() < 2 || t0s.size() < 2) throw InvalidRange("sweep sample too small");
    auto decades = [](const std::vector<double>& v) {
        auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return std::log10(*hi / *lo);
    };
    if (decades(x0s) < 4.0 - 1e-9) throw InvalidRange("x0 sample must span >= 4 decades");
    if (decades(t0s) < 2.0 - 1e-9) throw InvalidRange("t0 sample must span >= 2 decades");
}

OdeSweepResult ode_blowup_property(const Nonlinearity& f, double alpha, int n,
                                   const OdeSweepSample& sample, const OdeBudget& budget) {
    sample.validate();
    OdeSweepResult result;
    bool any_global = false, any_undetermined = false, any_blowup = false;
    std::string undetermined_note;
    for (double t0 : sample.t0s) {
        for (double x0 : sample.x0s) {
            OdeProblem prob{f, alpha, n, t0, x0};
            SweepCell cell{x0, t0, {}};
            try {
                cell.verdict = integrate(prob, budget).verdict;
            } catch (const StepUnderflow& e) {
                cell.verdict = Verdict::undetermined(std::string("step underflow: ") + e.what());
            }
            if (cell.verdict.is_global()) any_global = true;
            if (cell.verdict.is_blow_up()) any_blowup = true;
            if (cell.verdict.is_undetermined()) {
                any_undetermined = true;
                if (undetermined_note.empty()) undetermined_note = cell.verdict.reason;
            }
            result.cells.push_back(cell);
        }
    }
    result.anomaly = any_global && any_blowup;
    if (any_global)
        result.verdict = Verdict::global(std::nullopt, "witnessed by at least one sampled run");
    else if (any_undetermined)
        result.verdict = Verdict::undetermined("sampled run undetermined: " + undetermined_note);
    else
        result.verdict = Verdict::blow_up(std::nullopt, "all sampled runs blow up");
    return result;
}

}  // namespace blowup
