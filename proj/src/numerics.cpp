#include "blowup/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blowup/logspace.hpp"

namespace blowup {

namespace {

// Kronrod-15 abscissae on [-1,1] (positive half) and weights; the embedded
// Gauss-7 rule uses the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double kronrod;
    double gauss;
};

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = kWgk[7] * f(c);
    double resg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    return {resk * h, resg * h};
}

void gk15_adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double rel_tol, int depth, QuadratureResult& out) {
    const PanelEstimate e = gk15_panel(f, a, b);
    out.evaluations += 15;
    const double err = std::fabs(e.kronrod - e.gauss);
    const double tol = std::max(abs_tol, rel_tol * std::fabs(e.kronrod));
    if (err <= tol || depth <= 0) {
        out.value += e.kronrod;
        out.error_estimate += err;
        if (depth <= 0 && err > tol) out.converged = false;
        return;
    }
    const double c = 0.5 * (a + b);
    gk15_adapt(f, a, c, abs_tol * 0.5, rel_tol, depth - 1, out);
    gk15_adapt(f, c, b, abs_tol * 0.5, rel_tol, depth - 1, out);
}

}  // namespace

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_linear: need two equally sized samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    LinearFit fit;
    if (det == 0) {
        fit.intercept = sy / n;
        fit.slope = 0;
    } else {
        fit.slope = (n * sxy - sx * sy) / det;
        fit.intercept = (sy - fit.slope * sx) / n;
    }
    double ss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                double abs_tol, double rel_tol, int max_depth) {
    QuadratureResult out;
    if (a == b) return out;
    gk15_adapt(f, a, b, abs_tol, rel_tol, max_depth, out);
    return out;
}

double gauss7(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double res = kWg[3] * f(c);
    for (int j = 1; j < 7; j += 2) {
        const double x = h * kXgk[j];
        res += kWg[j / 2] * (f(c - x) + f(c + x));
    }
    return res * h;
}

double alternating_series_sum(std::span<const double> terms) {
    if (terms.empty()) return 0.0;
    std::vector<double> tab(terms.size());
    double s = 0;
    for (size_t i = 0; i < terms.size(); ++i) {
        s += terms[i];
        tab[i] = s;
    }
    // Iterated averaging; the last surviving entry converges geometrically for
    // smooth alternating tails.
    size_t m = tab.size();
    while (m > 1) {
        for (size_t i = 0; i + 1 < m; ++i) tab[i] = 0.5 * (tab[i] + tab[i + 1]);
        --m;
    }
    return tab[0];
}

BlowupFit fit_blowup_asymptote(std::span<const double> ts, std::span<const double> xs) {
    BlowupFit best;
    if (ts.size() < 5) return best;
    const double t_end = ts.back();
    const double window = t_end - ts.front();
    if (!(window > 0)) return best;

    std::vector<double> logx(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0)) return best;
        logx[i] = std::log(xs[i]);
    }

    auto eval = [&](double t_star) {
        std::vector<double> u(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) u[i] = std::log(t_star - ts[i]);
        LinearFit f = fit_linear(u, logx);
        return std::pair<double, LinearFit>(f.rms, f);
    };

    // Geometric scan of the gap t* - t_end, then golden refinement.
    double best_gap = 0, best_rms = std::numeric_limits<double>::infinity();
    LinearFit best_fit;
    for (double gap = window * 4.0; gap > window * 1e-12; gap *= 0.7) {
        auto [rms, f] = eval(t_end + gap);
        if (rms < best_rms) {
            best_rms = rms;
            best_gap = gap;
            best_fit = f;
        }
    }
    double lo = best_gap * 0.7, hi = best_gap / 0.7;
    for (int it = 0; it < 60; ++it) {
        const double g1 = lo + 0.381966 * (hi - lo);
        const double g2 = hi - 0.381966 * (hi - lo);
        if (eval(t_end + g1).first < eval(t_end + g2).first)
            hi = g2;
        else
            lo = g1;
    }
    const double gap = 0.5 * (lo + hi);
    auto [rms, fit] = eval(t_end + gap);

    best.t_star = t_end + gap;
    best.gamma = -fit.slope;
    best.log_C = fit.intercept;
    best.rms = rms;
    // The model must actually be a growing power of 1/(t*-t) and fit well on
    // the log scale.
    const double spread = logx.back() - logx.front();
    best.ok = best.gamma > 0 && spread > 0 && rms < 0.05 * std::max(1.0, spread);
    return best;
}

double log_integrate_exp(const std::function<double(double)>& h, double a, double b,
                         double rel_tol) {
    if (!(b > a)) return kNegInf;
    // Panelize so each panel sees O(1) variation of h, factoring the max out.
    const int coarse = std::max(8, static_cast<int>(std::ceil((b - a) / 2.0)));
    double total = kNegInf;
    for (int i = 0; i < coarse; ++i) {
        const double pa = a + (b - a) * i / coarse;
        const double pb = a + (b - a) * (i + 1) / coarse;
        // Peak of h on the panel from a few probes.
        double m = kNegInf;
        for (int j = 0; j <= 8; ++j) m = std::max(m, h(pa + (pb - pa) * j / 8.0));
        if (m == kNegInf) continue;
        auto g = [&](double s) {
            const double v = h(s) - m;
            return v < -745.0 ? 0.0 : std::exp(v);
        };
        QuadratureResult q = integrate_gk15(g, pa, pb, 1e-300, rel_tol, 40);
        if (q.value > 0) total = log_sum_exp(total, m + std::log(q.value));
    }
    return total;
}

}  // namespace blowup
