#pragma once

#include <optional>
#include <string>

#include "json.hpp"

namespace blowup {

enum class Outcome { BlowUp, Global, Undetermined };

// Three-valued verdict shared by the criterion, ODE and PDE paths.
// BlowUp carries t* when a time-resolved path produced one; Global carries the
// observed decay exponent; Undetermined always carries a budget or tolerance
// reason.
struct Verdict {
    Outcome outcome = Outcome::Undetermined;
    std::optional<double> t_star;
    std::optional<double> decay_exponent;
    std::string reason;

    static Verdict blow_up(std::optional<double> t_star = std::nullopt,
                           std::string note = "") {
        Verdict v;
        v.outcome = Outcome::BlowUp;
        v.t_star = t_star;
        v.reason = std::move(note);
        return v;
    }
    static Verdict global(std::optional<double> decay = std::nullopt, std::string note = "") {
        Verdict v;
        v.outcome = Outcome::Global;
        v.decay_exponent = decay;
        v.reason = std::move(note);
        return v;
    }
    static Verdict undetermined(std::string reason) {
        Verdict v;
        v.outcome = Outcome::Undetermined;
        v.reason = std::move(reason);
        return v;
    }

    [[nodiscard]] bool is_blow_up() const { return outcome == Outcome::BlowUp; }
    [[nodiscard]] bool is_global() const { return outcome == Outcome::Global; }
    [[nodiscard]] bool is_undetermined() const { return outcome == Outcome::Undetermined; }

    [[nodiscard]] std::string str() const {
        switch (outcome) {
            case Outcome::BlowUp:
                return t_star ? "BlowUp(t*=" + std::to_string(*t_star) + ")" : "BlowUp";
            case Outcome::Global:
                return decay_exponent ? "Global(decay=" + std::to_string(*decay_exponent) + ")"
                                      : "Global";
            default:
                return "Undetermined(" + reason + ")";
        }
    }

    [[nodiscard]] nlohmann::json to_json() const {
        nlohmann::json j;
        j["outcome"] = outcome == Outcome::BlowUp   ? "blowup"
                       : outcome == Outcome::Global ? "global"
                                                    : "undetermined";
        if (t_star) j["t_star"] = *t_star;
        if (decay_exponent) j["decay_exponent"] = *decay_exponent;
        if (!reason.empty()) j["reason"] = reason;
        return j;
    }
};

}  // namespace blowup
