#pragma once

// The distinguishing stepwise nonlinearity: sequences sigma_i = e^{-i^2},
// u_i = e^{-e^{i^2}}, v_i = theta u_{i+1}, with f = sigma_i u^{p_alpha} on
// M_i = [v_i, u_i) and the affine bridge f = b_i u - a_i on J_i = [u_{i+1}, v_i),
// plus a convex quadratic extension above delta = u_{i_min}. Everything is
// carried in log-space; indices whose logs overflow double range keep only the
// exact exponent i^2 and are handled by closed forms in i.

#include <memory>
#include <ostream>
#include <vector>

#include "blowup/errors.hpp"
#include "json.hpp"

namespace blowup {

struct ExampleParams {
    double alpha = 2.0;
    int n = 1;
    double p = 2.0;
    double theta = 1.75;
    double q = 0.75;      // Step-4 exponent, lambda_i = v_i^q, 1/2 < q < 1
    int i_min = 1;
    int i_max = 64;
    double delta_log = 0;  // log of the domain cut; filled as -e^{i_min^2} by validate()

    [[nodiscard]] double p_alpha() const { return 1.0 + alpha / n; }

    /// Checks the admissibility window 1 < p < p_alpha,
    /// p_alpha/(p_alpha-1) < theta < p/(p-1), q in (1/2,1), and the log-space
    /// ordering theta*u_{i+1} < u_i down the stored range. Fills delta_log.
    /// Throws WindowViolation / OrderingViolation.
    void validate();

    [[nodiscard]] nlohmann::json to_json() const;
    static ExampleParams from_json(const nlohmann::json& j);
};

struct LogIntervalData {
    int i = 0;
    double log_sigma = 0;      // -i^2, exact in double for i <= 64
    double exponent = 0;       // i^2; log u_i = -e^{i^2} conceptually
    double log_u = 0;          // -e^{i^2}, or -inf once e^{i^2} overflows
    double log_v = 0;          // log theta - e^{(i+1)^2}, or -inf
    double log_a = 0;          // NaN when not float-representable
    double log_b = 0;
    bool float_valid = false;  // all of log_u, log_v, log_a, log_b finite
};

class StepwiseConstruction {
  public:
    StepwiseConstruction(ExampleParams params, std::vector<LogIntervalData> intervals);

    /// log f(u) from log u. Half-open membership [u_{i+1}, v_i) -> J_i,
    /// [v_i, u_i) -> M_i with a 1e-13 relative slack nudging ties to the lower
    /// interval. Throws LogDomainError if the J_i subtraction underflows.
    [[nodiscard]] double eval_log(double log_u) const;
    [[nodiscard]] double eval(double u) const;

    [[nodiscard]] const ExampleParams& params() const { return params_; }
    [[nodiscard]] const std::vector<LogIntervalData>& intervals() const { return intervals_; }
    [[nodiscard]] double p_alpha() const { return params_.p_alpha(); }
    [[nodiscard]] double delta_log() const { return params_.delta_log; }

    // Extension data above delta: f(u) = f_delta + slope*(u-delta) + (u-delta)^2.
    [[nodiscard]] double log_f_delta() const { return log_f_delta_; }
    [[nodiscard]] double log_slope_delta() const { return log_slope_delta_; }

    /// Locate the interval index for a given log u < delta_log; returns the
    /// stored index i with log u in [log u_{i+1}, log u_i), capped at i_max.
    [[nodiscard]] int locate(double log_u) const;

  private:
    ExampleParams params_;
    std::vector<LogIntervalData> intervals_;  // ordered i = i_min .. i_max
    double log_f_delta_;
    double log_slope_delta_;
    double delta_;  // exp(delta_log), 0 if below double range
};

/// Step 1-2: build the construction. log a_i, log b_i are computed entirely in
/// log-space via log b_i = (p_a-1) log u_{i+1} + log sigma_i
/// + log(theta^{p_a} - e^{-(2i+1)}) - log(theta - 1) and the a_i analogue.
std::shared_ptr<const StepwiseConstruction> build(ExampleParams params);

struct ConvexityWindow {
    int holds_from = 0;
    double lhs = 0;  // theta^{p_a-1} (theta - p_a(theta-1))
    double rhs = 0;  // theta^{p_a} / (1 + p_a(theta^{p_a}-1))
};

/// Step 2 convexity window: smallest stored i with
/// lhs <= e^{-(2i+1)} <= rhs, verified for all larger stored i.
/// Throws NeverHolds when rhs < e^{-(2 i_max + 1)} throughout.
ConvexityWindow check_convexity_window(const ExampleParams& params);

struct FMonotone {
    int holds_from = 0;
    double limit_ratio = 0;  // p / (theta (p-1))
};

/// Step 3(i): r_i = p a_i / ((p-1) b_i v_i) >= 1 from holds_from on, with the
/// i -> infinity limit p/(theta(p-1)). Throws LimitNotAboveOne.
FMonotone check_F_monotone(const ExampleParams& params);

/// Step 3(ii) partial sum sum_{i=i_min}^{I} sigma_i log(u_i/(theta u_{i+1}))
/// = sum (e^{2i+1} - 1 - e^{-i^2} log theta).
double step3_divergence(const ExampleParams& params, int I);

struct DiagonalRatio {
    int i = 0;
    double log_ratio = 0;       // log [ f(lambda_i^2) / (lambda_i^{p_a} f(lambda_i)) ]
    bool lambda_in_Mi = false;  // v_i <= lambda_i < u_i
    bool lambda_sq_in_Mi1 = false;  // v_{i+1} <= lambda_i^2 < u_{i+1}
    [[nodiscard]] bool member() const { return lambda_in_Mi && lambda_sq_in_Mi1; }
};

/// Step 4 with lambda_i = v_i^q: membership checks in overflow-free scaled
/// form and the exact ratio log(sigma_{i+1}/sigma_i) = -(2i+1). Membership
/// failures are reported in the result, not fatal.
DiagonalRatio step4_diagonal_ratio(const ExampleParams& params, int i);

struct JointResiduals {
    double at_v = 0;       // log f from J_i minus log f from M_i, at v_i
    double at_u_next = 0;  // same at u_{i+1} against the M_{i+1} branch
};

/// Joint continuity residuals in cancellation-free form (the huge
/// p_a log u_{i+1} terms drop out symbolically): both are identically zero in
/// exact arithmetic and must stay below 1e-10 for every stored index. The
/// naive two-branch float evaluation loses all precision beyond i ~ 4, where
/// ulp(e^{(i+1)^2}) exceeds log theta and log v_i collapses onto log u_{i+1}.
JointResiduals joint_continuity_residuals(const ExampleParams& params, int i);

/// First index at which all three Step-4 inclusions hold (and stay holding
/// over the stored range). Returns i_max+1 if never.
int step4_membership_threshold(const ExampleParams& params);

/// Per-index CSV: i, window check, r_i, step-3 partial sum, log ratio,
/// memberships.
void write_index_report_csv(const ExampleParams& params, std::ostream& os);

}  // namespace blowup
