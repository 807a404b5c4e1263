#include "blowup/example4.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blowup/logspace.hpp"

namespace blowup {

namespace {

// log u_i = -e^{i^2}; finite in double for i^2 <= ~709.
double log_u_of(int i) {
    const double e2 = static_cast<double>(i) * i;
    return e2 > 709.0 ? kNegInf : -std::exp(e2);
}

double log_v_of(int i, double theta) {
    const double e2 = static_cast<double>(i + 1) * (i + 1);
    return e2 > 709.0 ? kNegInf : std::log(theta) - std::exp(e2);
}

}  // namespace

void ExampleParams::validate() {
    const double pa = p_alpha();
    if (!(alpha > 0 && alpha <= 2)) throw WindowViolation("alpha must lie in (0,2]");
    if (n < 1) throw WindowViolation("n must be >= 1");
    if (!(p > 1.0 && p < pa))
        throw WindowViolation("p must satisfy 1 < p < p_alpha = " + std::to_string(pa));
    const double theta_lo = pa / (pa - 1.0);
    const double theta_hi = p / (p - 1.0);
    if (!(theta > theta_lo && theta < theta_hi))
        throw WindowViolation("theta must lie in (" + std::to_string(theta_lo) + ", " +
                              std::to_string(theta_hi) + ")");
    if (!(q > 0.5 && q < 1.0)) throw WindowViolation("q must lie in (1/2, 1)");
    if (i_min < 1 || i_max < i_min) throw WindowViolation("need 1 <= i_min <= i_max");
    if (i_min > 26)
        throw WindowViolation("i_min too large: delta = u_{i_min} has no finite log");
    if (i_max > 1024) throw WindowViolation("i_max too large");

    // Ordering theta u_{i+1} < u_i, scaled by e^{i^2}: log(theta) e^{-i^2} <
    // e^{2i+1} - 1. Both sides are monotone in i, so the smallest index decides.
    const int i = i_min;
    const double lhs = std::log(theta) * std::exp(-static_cast<double>(i) * i);
    const double rhs = (2 * i + 1) > 700 ? kPosInf : std::exp(2.0 * i + 1.0) - 1.0;
    if (!(lhs < rhs))
        throw OrderingViolation("theta u_{i+1} < u_i fails at i_min = " + std::to_string(i));

    delta_log = log_u_of(i_min);
}

nlohmann::json ExampleParams::to_json() const {
    return nlohmann::json{{"alpha", alpha}, {"n", n},         {"p", p},
                          {"theta", theta}, {"q", q},         {"i_min", i_min},
                          {"i_max", i_max}, {"delta_log", delta_log}};
}

ExampleParams ExampleParams::from_json(const nlohmann::json& j) {
    ExampleParams params;
    params.alpha = j.at("alpha").get<double>();
    params.n = j.at("n").get<int>();
    params.p = j.at("p").get<double>();
    params.theta = j.at("theta").get<double>();
    params.q = j.value("q", 0.75);
    params.i_min = j.value("i_min", 1);
    params.i_max = j.value("i_max", 64);
    params.validate();
    return params;
}

std::shared_ptr<const StepwiseConstruction> build(ExampleParams params) {
    params.validate();
    const double pa = params.p_alpha();
    const double theta = params.theta;
    const double theta_pa = std::pow(theta, pa);
    const double log_theta_m1 = std::log(theta - 1.0);

    std::vector<LogIntervalData> data;
    data.reserve(params.i_max - params.i_min + 1);
    for (int i = params.i_min; i <= params.i_max; ++i) {
        LogIntervalData d;
        d.i = i;
        d.log_sigma = -static_cast<double>(i) * i;
        d.exponent = static_cast<double>(i) * i;
        d.log_u = log_u_of(i);
        d.log_v = log_v_of(i, theta);
        const double ratio = (2 * i + 1) > 745 ? 0.0 : std::exp(-(2.0 * i + 1.0));
        const double log_u_next = log_u_of(i + 1);
        // b_i = u_{i+1}^{p_a - 1} sigma_i (theta^{p_a} - sigma_{i+1}/sigma_i) / (theta - 1)
        d.log_b = (pa - 1.0) * log_u_next + d.log_sigma + std::log(theta_pa - ratio) -
                  log_theta_m1;
        d.log_a =
            pa * log_u_next + d.log_sigma + std::log(theta_pa - theta * ratio) - log_theta_m1;
        d.float_valid = std::isfinite(d.log_u) && std::isfinite(d.log_v) &&
                        std::isfinite(d.log_a) && std::isfinite(d.log_b);
        data.push_back(d);
    }
    return std::make_shared<const StepwiseConstruction>(params, std::move(data));
}

StepwiseConstruction::StepwiseConstruction(ExampleParams params,
                                           std::vector<LogIntervalData> intervals)
    : params_(params), intervals_(std::move(intervals)) {
    const double pa = params_.p_alpha();
    const LogIntervalData& top = intervals_.front();
    log_f_delta_ = top.log_sigma + pa * top.log_u;
    log_slope_delta_ = std::log(pa) + top.log_sigma + (pa - 1.0) * top.log_u;
    delta_ = std::exp(params_.delta_log);
}

int StepwiseConstruction::locate(double log_u) const {
    // Intervals are stored with decreasing u; the last stored index absorbs
    // everything below its own upper boundary.
    for (size_t k = 0; k + 1 < intervals_.size(); ++k) {
        if (log_u >= intervals_[k + 1].log_u) return static_cast<int>(k);
    }
    return static_cast<int>(intervals_.size()) - 1;
}

double StepwiseConstruction::eval_log(double log_u) const {
    if (std::isnan(log_u)) throw LogDomainError("eval_log: NaN input");
    if (log_u >= params_.delta_log) {
        // Quadratic extension f = f_delta + s (u - delta) + (u - delta)^2.
        double log_d;
        if (log_u > 708.0) {
            log_d = log_u;  // u - delta == u at this magnitude
        } else {
            const double d = std::exp(log_u) - delta_;
            if (d <= 0) return log_f_delta_;
            log_d = std::log(d);
        }
        const double terms[3] = {log_f_delta_, log_slope_delta_ + log_d, 2.0 * log_d};
        return log_sum_exp(std::span<const double>(terms, 3));
    }
    const int k = locate(log_u);
    const LogIntervalData& d = intervals_[k];
    const double pa = params_.p_alpha();
    // Half-open split of I_i at v_i, with relative slack nudging ties onto the
    // M_i branch (the branches agree at the joint to ~1e-10 anyway).
    const double slack = 1e-13 * std::fabs(d.log_v);
    if (d.log_v == kNegInf || log_u >= d.log_v - slack) {
        return d.log_sigma + pa * log_u;  // M_i
    }
    // J_i: f = b_i u - a_i = a_i (e^{log b + log u - log a} - 1).
    const double excess = d.log_b + log_u - d.log_a;
    if (excess <= 0)
        throw LogDomainError("stepwise eval_log: affine branch underflow at i = " +
                             std::to_string(d.i));
    return d.log_a + log_expm1(excess);
}

double StepwiseConstruction::eval(double u) const {
    if (u < 0) throw NegativeInput("stepwise eval: u < 0");
    if (u == 0) return 0.0;
    return std::exp(eval_log(std::log(u)));
}

ConvexityWindow check_convexity_window(const ExampleParams& params) {
    const double pa = params.p_alpha();
    const double theta = params.theta;
    ConvexityWindow w;
    w.lhs = std::pow(theta, pa - 1.0) * (theta - pa * (theta - 1.0));
    const double theta_pa = std::pow(theta, pa);
    w.rhs = theta_pa / (1.0 + pa * (theta_pa - 1.0));

    auto ratio = [](int i) {
        return (2 * i + 1) > 745 ? 0.0 : std::exp(-(2.0 * i + 1.0));
    };
    if (w.rhs < ratio(params.i_max))
        throw NeverHolds("convexity window: rhs below e^{-(2 i_max + 1)} throughout");

    int from = params.i_max + 1;
    for (int i = params.i_min; i <= params.i_max; ++i) {
        const double r = ratio(i);
        if (w.lhs <= r && r <= w.rhs) {
            from = i;
            break;
        }
    }
    if (from > params.i_max) throw NeverHolds("convexity window holds at no stored index");
    for (int i = from; i <= params.i_max; ++i) {
        const double r = ratio(i);
        if (!(w.lhs <= r && r <= w.rhs))
            throw NeverHolds("convexity window breaks again at i = " + std::to_string(i) +
                             " (theta below the admissible range)");
    }
    w.holds_from = from;
    return w;
}

FMonotone check_F_monotone(const ExampleParams& params) {
    const double p = params.p;
    const double theta = params.theta;
    const double pa = params.p_alpha();
    FMonotone result;
    result.limit_ratio = p / (theta * (p - 1.0));
    if (!(result.limit_ratio > 1.0))
        throw LimitNotAboveOne("p/(theta (p-1)) = " + std::to_string(result.limit_ratio));

    const double theta_pa = std::pow(theta, pa);
    result.holds_from = params.i_max + 1;
    for (int i = params.i_min; i <= params.i_max; ++i) {
        const double e = (2 * i + 1) > 745 ? 0.0 : std::exp(-(2.0 * i + 1.0));
        const double r = p * (theta_pa - theta * e) / (theta * (p - 1.0) * (theta_pa - e));
        if (r >= 1.0) {
            result.holds_from = i;
            break;
        }
    }
    return result;
}

double step3_divergence(const ExampleParams& params, int I) {
    if (I < params.i_min || I > params.i_max)
        throw InvalidRange("step3_divergence: I outside [i_min, i_max]");
    double sum = 0.0;
    const double log_theta = std::log(params.theta);
    for (int i = params.i_min; i <= I; ++i) {
        const double grow = (2 * i + 1) > 709 ? kPosInf : std::exp(2.0 * i + 1.0);
        sum += grow - 1.0 - std::exp(-static_cast<double>(i) * i) * log_theta;
    }
    return sum;
}

DiagonalRatio step4_diagonal_ratio(const ExampleParams& params, int i) {
    if (i < params.i_min || i >= params.i_max)
        throw InvalidRange("step4_diagonal_ratio: need i in [i_min, i_max)");
    const double q = params.q;
    const double log_theta = std::log(params.theta);
    DiagonalRatio r;
    r.i = i;
    // f(lambda^2)/(lambda^{p_a} f(lambda)) = sigma_{i+1}/sigma_i once both
    // memberships hold; the p_a q log v_i terms cancel exactly.
    r.log_ratio = -(2.0 * i + 1.0);

    // Scaled membership inequalities (divided by e^{i^2} resp. e^{(i+1)^2}).
    const double e_i2 = static_cast<double>(i) * i > 745 ? 0.0
                                                         : std::exp(-static_cast<double>(i) * i);
    const double e_i1 = static_cast<double>(i + 1) * (i + 1) > 745
                            ? 0.0
                            : std::exp(-static_cast<double>(i + 1) * (i + 1));
    const double g1 = (2 * i + 1) > 709 ? kPosInf : q * std::exp(2.0 * i + 1.0) - 1.0;
    r.lambda_in_Mi = g1 > q * log_theta * e_i2;
    const bool in_u = (2.0 * q - 1.0) > 2.0 * q * log_theta * e_i1;
    const double g3 = (2 * i + 3) > 709 ? kPosInf : std::exp(2.0 * i + 3.0) - 2.0 * q;
    const bool above_v = g3 > (1.0 - 2.0 * q) * log_theta * e_i1;
    r.lambda_sq_in_Mi1 = in_u && above_v;
    return r;
}

JointResiduals joint_continuity_residuals(const ExampleParams& params, int i) {
    if (i < params.i_min || i > params.i_max)
        throw InvalidRange("joint_continuity_residuals: i outside stored range");
    const double pa = params.p_alpha();
    const double th = params.theta;
    const double lnth = std::log(th);
    JointResiduals r;
    if (2 * i + 1 > 700) return r;  // sigma ratio below double: identity degenerates
    const double e = std::exp(-(2.0 * i + 1.0));
    const double thpa = std::pow(th, pa);
    const double A = std::log((thpa - th * e) / (th - 1.0));  // log a_i minus shared bulk
    const double B = std::log((thpa - e) / (th - 1.0));       // log b_i minus shared bulk
    // B - A computed without cancellation (it shrinks like e^{-(2i+1)}).
    const double d_ba = std::log1p(e * (th - 1.0) / (thpa - th * e));
    // At v_i:      e^{ln th + B} - e^A = th^{p_a}  =>  residual 0.
    // At u_{i+1}:  e^B - e^A = e^{-(2i+1)}         =>  residual 0.
    r.at_v = log_diff_exp(lnth + B, A) - pa * lnth;
    r.at_u_next = A + log_expm1(d_ba) + (2.0 * i + 1.0);
    return r;
}

int step4_membership_threshold(const ExampleParams& params) {
    int first = params.i_max + 1;
    for (int i = params.i_min; i < params.i_max; ++i) {
        if (step4_diagonal_ratio(params, i).member()) {
            first = i;
            break;
        }
    }
    // The inclusions are monotone in i; verify over the stored range anyway.
    for (int i = first; i < params.i_max; ++i) {
        if (!step4_diagonal_ratio(params, i).member())
            throw NeverHolds("step-4 membership breaks again at i = " + std::to_string(i));
    }
    return first;
}

void write_index_report_csv(const ExampleParams& params, std::ostream& os) {
    const ConvexityWindow w = check_convexity_window(params);
    auto c = build(params);
    const double theta_pa = std::pow(params.theta, params.p_alpha());

    os << "i,sigma_ratio,window_ok,r_i,r_ge_1,step3_partial,log_ratio,"
          "lambda_in_Mi,lambda_sq_in_Mi1,float_valid,log_u,log_v,log_a,log_b\n";
    char buf[512];
    for (const LogIntervalData& d : c->intervals()) {
        const int i = d.i;
        const double e = (2 * i + 1) > 745 ? 0.0 : std::exp(-(2.0 * i + 1.0));
        const bool window_ok = w.lhs <= e && e <= w.rhs;
        const double r = params.p * (theta_pa - params.theta * e) /
                         (params.theta * (params.p - 1.0) * (theta_pa - e));
        const double partial = step3_divergence(params, i);
        double log_ratio = 0;
        int m1 = -1, m2 = -1;
        if (i < params.i_max) {
            const DiagonalRatio dr = step4_diagonal_ratio(params, i);
            log_ratio = dr.log_ratio;
            m1 = dr.lambda_in_Mi ? 1 : 0;
            m2 = dr.lambda_sq_in_Mi1 ? 1 : 0;
        }
        std::snprintf(buf, sizeof buf,
                      "%d,%.17g,%d,%.17g,%d,%.17g,%.17g,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n", i,
                      e, window_ok ? 1 : 0, r, r >= 1.0 ? 1 : 0, partial, log_ratio, m1, m2,
                      d.float_valid ? 1 : 0, d.log_u, d.log_v, d.log_a, d.log_b);
        os << buf;
    }
}

}  // namespace blowup
