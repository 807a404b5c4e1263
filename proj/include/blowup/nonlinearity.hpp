#pragma once

// Source terms f for u_t = Delta_alpha u + f(u), with direct and log-space
// evaluation, hypothesis checks (M), (C), (B), (S), the dichotomy integral
// criterion, and the criterion-level classification.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blowup/errors.hpp"
#include "blowup/verdict.hpp"
#include "json.hpp"

namespace blowup {

class StepwiseConstruction;
struct ExampleParams;

enum class NonlinearityKind { PowerLaw, LogCorrected, Stepwise, Custom };

struct CriticalExponent {
    double alpha;
    int n;
    double p_alpha;  // 1 + alpha/n

    CriticalExponent(double alpha_, int n_) : alpha(alpha_), n(n_), p_alpha(1.0 + alpha_ / n_) {
        if (!(alpha > 0 && alpha <= 2)) throw InvalidRange("alpha must lie in (0,2]");
        if (n < 1) throw InvalidRange("n must be >= 1");
    }
};

class Nonlinearity {
  public:
    static Nonlinearity power_law(double p);
    /// f = u^{p_alpha} (log 1/u)^{-beta} on (0, c0), extended above c0 by a
    /// slope-matched convex quadratic (so (M), (C), (B) hold globally).
    static Nonlinearity log_corrected(double alpha, int n, double beta, double c0);
    static Nonlinearity stepwise(std::shared_ptr<const StepwiseConstruction> c);
    /// Tabulated log f over log u, interpolated linearly in log-log space and
    /// extended beyond the table with the boundary slopes. An empty table is
    /// the zero source.
    static Nonlinearity custom(std::vector<double> log_u, std::vector<double> log_f);
    static Nonlinearity zero() { return custom({}, {}); }

    [[nodiscard]] NonlinearityKind kind() const { return kind_; }
    [[nodiscard]] bool is_zero() const { return kind_ == NonlinearityKind::Custom && log_u_.empty(); }

    /// f(u). Throws NegativeInput for u < 0; f(0) = 0 by definition.
    [[nodiscard]] double eval(double u) const;
    /// log f(u) as a function of log u; exact log-space composition.
    [[nodiscard]] double eval_log(double log_u) const;
    /// ell(u) = sup_{0<s<=u} f(s)/s; equals f(u)/u for the convex kinds,
    /// otherwise a refined grid supremum.
    [[nodiscard]] double ell(double u) const;
    /// Convexity known from structure (power law, log-corrected, stepwise).
    [[nodiscard]] bool known_convex() const;

    // Kind-specific accessors (throw if wrong kind).
    [[nodiscard]] double power() const;
    [[nodiscard]] double beta() const;
    [[nodiscard]] double c0() const;
    [[nodiscard]] const StepwiseConstruction& construction() const;

    /// Default exponent for the (S) check via Remark-style F = f/u^p.
    [[nodiscard]] double default_s_exponent(double p_alpha) const;
    /// Default upper endpoint for near-zero checks ((S) window, criterion cut).
    [[nodiscard]] double default_c0() const;

    [[nodiscard]] nlohmann::json to_json() const;
    static Nonlinearity from_json(const nlohmann::json& j);
    [[nodiscard]] std::string describe() const;

  private:
    Nonlinearity() = default;

    NonlinearityKind kind_ = NonlinearityKind::PowerLaw;
    double p_ = 2.0;                       // PowerLaw
    double alpha_ = 2.0, beta_ = 1.0;      // LogCorrected
    int n_ = 1;
    double c0_ = 0.01;
    double log_f_c0_ = 0, log_slope_c0_ = 0;  // extension data at c0
    std::shared_ptr<const StepwiseConstruction> construction_;
    std::vector<double> log_u_, log_f_;    // Custom
};

struct SampleGrid {
    double log_lo = -690.7755278982137;  // log(1e-300)
    double log_hi = 6.907755278982137;   // log(1e3)
    int count = 20000;
    long pair_budget = 100000;  // midpoint-convexity pairs after thinning
    double tolerance = 1e-10;
    unsigned long seed = 2025;  // deterministic pair thinning

    void validate() const;  // grid must cover [1e-300, 1e3] with >= 1e4 points
};

enum class TailStatus { Certified, Divergent, Undetermined };

struct HypothesisReport {
    bool monotone_M = false;
    bool convex_C = false;
    bool ode_blowup_B = false;
    TailStatus b_status = TailStatus::Undetermined;
    std::string b_certificate;
    struct {
        bool holds = false;
        double p_used = 0;
        double c0_used = 0;
    } scaling_S;
    long samples_used = 0;
    double tolerance = 0;
    SampleGrid grid;
    // Counterexamples (log u pairs / points) retained so refinement re-tests
    // the same witnesses.
    std::optional<std::pair<double, double>> m_counterexample;
    std::optional<std::pair<double, double>> c_counterexample;
    std::optional<std::pair<double, double>> s_counterexample;

    [[nodiscard]] bool all() const {
        return monotone_M && convex_C && ode_blowup_B && scaling_S.holds;
    }
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Samples (M) pairwise, (C) by midpoint convexity on thinned pairs, (B) by
/// dyadic-block quadrature of 1/f with a geometric tail certificate, and (S)
/// through monotonicity of log f - p log u below c0.
HypothesisReport check_hypotheses(const Nonlinearity& f, const SampleGrid& grid, double p_for_S,
                                  double c0);

enum class IntegralState { Converged, Diverges, Ambiguous };

struct CriterionResult {
    IntegralState state = IntegralState::Ambiguous;
    double value = 0;      // partial integral on [lower_cut, upper]
    double log_value = 0;  // same, in log space (finite even when value overflows)
    double limit = 0;      // extrapolated limit when Converged (0 if none)
    std::string certificate;

    [[nodiscard]] bool diverges() const { return state == IntegralState::Diverges; }
};

/// int_{lower_cut}^{upper} f(u) u^{-(2+alpha/n)} du via u = e^{-s}, plus the
/// shrinking-cut divergence analysis below lower_cut (cuts 10^{-k} down to
/// k = 300; interval-indexed cuts for the stepwise kind).
CriterionResult criterion_integral(const Nonlinearity& f, double alpha, int n,
                                   double lower_cut, double upper);

/// Theorem-level verdict: BlowUp iff the criterion integral diverges, Global
/// iff it converges, Undetermined when hypotheses fail or the growth test is
/// ambiguous. Criterion-level verdicts carry no t*/decay data.
Verdict classify(const Nonlinearity& f, double alpha, int n);

/// liminf_{u->0} f(u)/u^{p_alpha} along a log-spaced sequence (the classical
/// blow-up sufficient condition); 0 for sources where that condition fails.
double sugitani_liminf(const Nonlinearity& f, double alpha, int n);

}  // namespace blowup
