#pragma once

// Test-only arbitrary-precision oracle (200 digits ~ 665 bits; we use 700).
// Evaluates construction quantities directly from their defining formulas,
// independent of the log-space reductions used by the library.

#ifdef BLOWUP_HAVE_MPFR

#include <mpfr.h>

#include <string>

namespace oracle {

inline constexpr mpfr_prec_t kPrec = 700;

class Mp {
  public:
    Mp() { mpfr_init2(v, kPrec); }
    explicit Mp(double d) {
        mpfr_init2(v, kPrec);
        mpfr_set_d(v, d, MPFR_RNDN);
    }
    explicit Mp(long i) {
        mpfr_init2(v, kPrec);
        mpfr_set_si(v, i, MPFR_RNDN);
    }
    Mp(const Mp& o) {
        mpfr_init2(v, kPrec);
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    Mp& operator=(const Mp& o) {
        mpfr_set(v, o.v, MPFR_RNDN);
        return *this;
    }
    ~Mp() { mpfr_clear(v); }

    [[nodiscard]] double d() const { return mpfr_get_d(v, MPFR_RNDN); }

    friend Mp operator+(const Mp& a, const Mp& b) {
        Mp r;
        mpfr_add(r.v, a.v, b.v, MPFR_RNDN);
        return r;
    }
    friend Mp operator-(const Mp& a, const Mp& b) {
        Mp r;
        mpfr_sub(r.v, a.v, b.v, MPFR_RNDN);
        return r;
    }
    friend Mp operator*(const Mp& a, const Mp& b) {
        Mp r;
        mpfr_mul(r.v, a.v, b.v, MPFR_RNDN);
        return r;
    }
    friend Mp operator/(const Mp& a, const Mp& b) {
        Mp r;
        mpfr_div(r.v, a.v, b.v, MPFR_RNDN);
        return r;
    }
    friend Mp exp(const Mp& a) {
        Mp r;
        mpfr_exp(r.v, a.v, MPFR_RNDN);
        return r;
    }
    friend Mp log(const Mp& a) {
        Mp r;
        mpfr_log(r.v, a.v, MPFR_RNDN);
        return r;
    }
    friend Mp pow(const Mp& a, const Mp& b) {
        Mp r;
        mpfr_pow(r.v, a.v, b.v, MPFR_RNDN);
        return r;
    }
    friend Mp neg(const Mp& a) {
        Mp r;
        mpfr_neg(r.v, a.v, MPFR_RNDN);
        return r;
    }

    mpfr_t v;
};

struct StepwiseOracle {
    Mp theta, p_alpha;

    StepwiseOracle(double theta_, double p_alpha_) : theta(theta_), p_alpha(p_alpha_) {}

    [[nodiscard]] Mp sigma(int i) const { return exp(Mp(-static_cast<double>(i) * i)); }
    [[nodiscard]] Mp u(int i) const {
        return exp(neg(exp(Mp(static_cast<double>(i) * i))));
    }
    [[nodiscard]] Mp v(int i) const { return theta * u(i + 1); }
    // b_i = u_{i+1}^{p_a - 1} (theta^{p_a} sigma_i - sigma_{i+1}) / (theta - 1)
    [[nodiscard]] Mp b(int i) const {
        return pow(u(i + 1), p_alpha - Mp(1.0)) *
               (pow(theta, p_alpha) * sigma(i) - sigma(i + 1)) / (theta - Mp(1.0));
    }
    // a_i = u_{i+1}^{p_a} (theta^{p_a} sigma_i - theta sigma_{i+1}) / (theta - 1)
    [[nodiscard]] Mp a(int i) const {
        return pow(u(i + 1), p_alpha) *
               (pow(theta, p_alpha) * sigma(i) - theta * sigma(i + 1)) / (theta - Mp(1.0));
    }
    // log f at log-space point lu inside J_i: f = b_i e^{lu} - a_i.
    [[nodiscard]] double log_f_on_J(int i, double lu) const {
        return log(b(i) * exp(Mp(lu)) - a(i)).d();
    }
};

}  // namespace oracle

#endif  // BLOWUP_HAVE_MPFR
