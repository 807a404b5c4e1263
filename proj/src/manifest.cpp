#include "blowup/manifest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "blowup/example4.hpp"
#include "blowup/kernel.hpp"
#include "blowup/logspace.hpp"
#include "blowup/nonlinearity.hpp"
#include "blowup/ode.hpp"
#include "blowup/pde.hpp"

namespace blowup {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"criteria", "ode",             "pde",
                                            "example4", "dichotomy-sweep", "kernel-verify"};

std::string default_output_dir(const std::string& command) {
    if (const char* env = std::getenv("BLOWUP_LAB_OUT")) return std::string(env);
    return "out-" + command;
}

void parallel_cells(int jobs, size_t count, const std::function<void(size_t)>& work) {
    if (jobs <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    const int workers = std::min<size_t>(jobs, count);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream os(dir / name);
    if (!os) throw std::runtime_error("cannot open " + (dir / name).string());
    return os;
}

OdeBudget ode_budget_from(const json& j) {
    OdeBudget b;
    b.t_max = j.value("t_max", b.t_max);
    b.x_blowup = j.value("x_blowup", b.x_blowup);
    b.min_step = j.value("min_step", b.min_step);
    b.rtol = j.value("rtol", b.rtol);
    return b;
}

PdeBudget pde_budget_from(const json& j) {
    PdeBudget b;
    b.t_max = j.value("t_max", b.t_max);
    b.sup_blowup = j.value("sup_blowup", b.sup_blowup);
    b.dt_init = j.value("dt_init", b.dt_init);
    b.dt_min = j.value("dt_min", b.dt_min);
    b.tol = j.value("tol", b.tol);
    b.check_domain = j.value("check_domain", b.check_domain);
    if (j.contains("snapshot_times"))
        b.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    return b;
}

Field phi_from(const json& j, const GridSpec& grid, int n) {
    const std::string shape = j.value("shape", "gaussian");
    const double amplitude = j.at("amplitude").get<double>();
    if (shape == "gaussian")
        return make_gaussian_field(grid, n, amplitude, j.value("sigma", 1.0),
                                   j.value("center", 0.0));
    if (shape == "plateau")
        return make_plateau_field(grid, n, amplitude, j.value("radius", 2.0),
                                  j.value("width", 0.5));
    throw ValidationError("unknown phi shape: " + shape);
}

std::string verdict_cell(const Verdict& v) {
    switch (v.outcome) {
        case Outcome::BlowUp:
            return "blowup";
        case Outcome::Global:
            return "global";
        default:
            return "undetermined";
    }
}

// ---- command: criteria -----------------------------------------------------

void run_criteria(const ExperimentManifest& m, const fs::path& out, RunReport& rep) {
    const json& p = m.parameters;
    std::vector<json> fspecs;
    if (p.contains("fs"))
        for (const json& fj : p.at("fs")) fspecs.push_back(fj);
    else
        fspecs.push_back(p.at("f"));
    std::vector<std::pair<double, int>> cells;
    if (p.contains("alpha_n"))
        for (const json& an : p.at("alpha_n"))
            cells.emplace_back(an.at(0).get<double>(), an.at(1).get<int>());
    else
        cells.emplace_back(p.at("alpha").get<double>(), p.at("n").get<int>());

    std::ofstream os = open_out(out, "criteria.csv");
    os << "f,alpha,n,monotone_M,convex_C,ode_blowup_B,scaling_S,criterion,criterion_value,"
          "classify,sugitani_liminf,certificate\n";
    json results = json::array();
    for (const json& fj : fspecs) {
        const Nonlinearity f = Nonlinearity::from_json(fj);
        for (auto [alpha, n] : cells) {
            SampleGrid grid;
            grid.seed = static_cast<unsigned long>(m.seed);
            const double p_s =
                p.value("p_for_S", f.default_s_exponent(CriticalExponent(alpha, n).p_alpha));
            const double c0 = p.value("c0", f.default_c0());
            const HypothesisReport hyp = check_hypotheses(f, grid, p_s, c0);
            const CriterionResult cr =
                criterion_integral(f, alpha, n, p.value("lower_cut", 1e-8),
                                   p.value("upper", std::min(c0, 0.1)));
            const Verdict v = classify(f, alpha, n);
            const double liminf = sugitani_liminf(f, alpha, n);
            char buf[512];
            std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%d,%d,%d,%d,%s,%.17g,%s,%.17g,",
                          f.describe().c_str(), alpha, n, hyp.monotone_M, hyp.convex_C,
                          hyp.ode_blowup_B, hyp.scaling_S.holds,
                          cr.diverges()                              ? "diverges"
                          : cr.state == IntegralState::Converged ? "converges"
                                                                 : "ambiguous",
                          cr.value, verdict_cell(v).c_str(), liminf);
            os << buf << '"' << cr.certificate << '"' << "\n";
            json row;
            row["f"] = fj;
            row["alpha"] = alpha;
            row["n"] = n;
            row["hypotheses"] = hyp.to_json();
            row["criterion"] = cr.diverges() ? "diverges" : "converges";
            row["classify"] = v.to_json();
            row["sugitani_liminf"] = liminf;
            results.push_back(row);
        }
    }
    rep.summary["results"] = results;
}

// ---- command: ode ----------------------------------------------------------

void run_ode(const ExperimentManifest& m, const fs::path& out, RunReport& rep) {
    const json& p = m.parameters;
    const Nonlinearity f = Nonlinearity::from_json(p.at("f"));
    const double alpha = p.at("alpha").get<double>();
    const int n = p.at("n").get<int>();
    const OdeBudget budget = ode_budget_from(p.value("budget", json::object()));

    if (p.value("sweep", false)) {
        OdeSweepSample sample;
        sample.x0s = p.at("x0").get<std::vector<double>>();
        sample.t0s = p.at("t0").get<std::vector<double>>();
        const OdeSweepResult sw = ode_blowup_property(f, alpha, n, sample, budget);
        std::ofstream os = open_out(out, "ode_sweep.csv");
        os << "x0,t0,verdict,t_star,decay_exponent\n";
        char buf[256];
        for (const SweepCell& cell : sw.cells) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g\n", cell.x0, cell.t0,
                          verdict_cell(cell.verdict).c_str(),
                          cell.verdict.t_star.value_or(std::nan("")),
                          cell.verdict.decay_exponent.value_or(std::nan("")));
            os << buf;
        }
        rep.summary["verdict"] = sw.verdict.to_json();
        if (sw.anomaly) rep.fail("sweep anomaly: blow-up and global witnesses coexist");
        return;
    }

    auto x0s = p.at("x0").is_array() ? p.at("x0").get<std::vector<double>>()
                                     : std::vector<double>{p.at("x0").get<double>()};
    auto t0s = p.at("t0").is_array() ? p.at("t0").get<std::vector<double>>()
                                     : std::vector<double>{p.at("t0").get<double>()};
    json verdicts = json::array();
    int idx = 0;
    for (double t0 : t0s)
        for (double x0 : x0s) {
            OdeProblem prob{f, alpha, n, t0, x0};
            const OdeTrace trace = integrate(prob, budget);
            std::ofstream os = open_out(out, "ode_trace_" + std::to_string(idx++) + ".csv");
            trace.write_csv(os);
            json row{{"x0", x0}, {"t0", t0}, {"verdict", trace.verdict.to_json()}};
            if (p.value("volterra", false) && !trace.verdict.is_blow_up()) {
                const VolterraResult vr = volterra_residual(trace, prob);
                row["volterra_residual"] = vr.max_residual;
                if (vr.max_residual > p.value("volterra_tol", 1e-6))
                    rep.fail("volterra residual " + std::to_string(vr.max_residual));
            }
            verdicts.push_back(row);
        }
    rep.summary["runs"] = verdicts;
}

// ---- command: pde ----------------------------------------------------------

void run_pde(const ExperimentManifest& m, const fs::path& out, RunReport& rep) {
    const json& p = m.parameters;
    const Nonlinearity f = Nonlinearity::from_json(p.at("f"));
    const KernelSpec spec{p.at("alpha").get<double>(), p.at("n").get<int>()};
    const GridSpec grid{p.value("L", 40.0), p.value("N", 1024)};
    PdeBudget budget = pde_budget_from(p.value("budget", json::object()));
    const Field phi = phi_from(p.at("phi"), grid, spec.n);

    PdeProblem prob{f, spec, grid, phi};
    PdeTrace trace = evolve(prob, budget);
    if (p.value("moments", true) && !trace.snapshots.empty()) moment_functional(trace, prob);
    {
        std::ofstream os = open_out(out, "pde_trace.csv");
        trace.write_csv(os);
    }
    rep.summary["verdict"] = trace.verdict.to_json();
    rep.summary["steps_accepted"] = trace.steps_accepted;
    rep.summary["clamp_events"] = trace.clamp_events;

    if (p.contains("duhamel_checks")) {
        const auto checks = p.at("duhamel_checks").get<std::vector<double>>();
        const double resid = duhamel_residual(trace, prob, checks);
        rep.summary["duhamel_residual"] = resid;
        if (resid > p.value("duhamel_tol", 1e-4))
            rep.fail("duhamel residual " + std::to_string(resid));
    }
    if (p.value("jensen", false) && f.known_convex()) {
        double worst = 0;
        for (const Snapshot& s : trace.snapshots) {
            if (!(s.t > 0)) continue;
            const JensenResult jr = jensen_check(s.u, prob, s.t);
            worst = std::min(worst, jr.lhs - jr.rhs);
        }
        rep.summary["jensen_min_margin"] = worst;
    }
    if (p.value("small_data_bound", false)) {
        // Theorem-style check: u(t) <= 2 S(t) phi + 1e-8 on every snapshot.
        double worst = 0;
        for (const Snapshot& s : trace.snapshots) {
            const Field w = semigroup_apply(spec, phi, s.t);
            for (size_t i = 0; i < w.size(); ++i)
                worst = std::max(worst, s.u[i] - 2.0 * w[i]);
        }
        rep.summary["small_data_excess"] = worst;
        if (worst > 1e-8) rep.fail("u exceeds 2 S(t) phi by " + std::to_string(worst));
    }
    if (p.contains("save_snapshots")) {
        int k = 0;
        for (const Snapshot& s : trace.snapshots)
            save_field(s.u, spec, (out / ("snapshot_" + std::to_string(k++))).string());
    }
}

// ---- command: example4 ------------------------------------------------------

void run_example4(const ExperimentManifest& m, const fs::path& out, RunReport& rep) {
    const json& p = m.parameters;
    ExampleParams params;
    params.alpha = p.at("alpha").get<double>();
    params.n = p.at("n").get<int>();
    params.p = p.at("p").get<double>();
    params.theta = p.at("theta").get<double>();
    params.q = p.value("q", 0.75);
    params.i_min = p.value("i_min", 1);
    params.i_max = p.value("i_max", 64);
    const int I = p.value("I", 8);

    json summary;
    try {
        params.validate();
        {
            std::ofstream os = open_out(out, "example4_table.csv");
            write_index_report_csv(params, os);
        }
        auto c = build(params);
        const Nonlinearity f = Nonlinearity::stepwise(c);

        // Joint continuity at every stored joint (cancellation-free residuals).
        double worst_joint = 0;
        for (int i = params.i_min; i <= params.i_max; ++i) {
            const JointResiduals jr = joint_continuity_residuals(params, i);
            worst_joint = std::max({worst_joint, std::fabs(jr.at_v), std::fabs(jr.at_u_next)});
        }
        summary["joint_continuity_max_abs"] = worst_joint;
        if (worst_joint > 1e-10) rep.fail("joint continuity above 1e-10");

        const ConvexityWindow w = check_convexity_window(params);
        const FMonotone fm = check_F_monotone(params);
        summary["convexity_window_from"] = w.holds_from;
        summary["F_monotone_limit"] = fm.limit_ratio;
        if (!(fm.limit_ratio > 1)) rep.fail("F-monotone limit not above one");

        summary["step3_partial_at_I"] = step3_divergence(params, I);
        summary["step4_membership_from"] = step4_membership_threshold(params);
        bool ratios_exact = true;
        for (int i = params.i_min; i < std::min(params.i_max, params.i_min + 16); ++i)
            if (step4_diagonal_ratio(params, i).log_ratio != -(2.0 * i + 1.0))
                ratios_exact = false;
        summary["step4_log_ratio_exact"] = ratios_exact;
        if (!ratios_exact) rep.fail("step-4 log ratio mismatch");

        SampleGrid grid;
        grid.seed = static_cast<unsigned long>(m.seed);
        const HypothesisReport hyp =
            check_hypotheses(f, grid, params.p, std::exp(params.delta_log));
        summary["hypotheses"] = hyp.to_json();
        if (!hyp.all()) rep.fail("hypotheses (M),(C),(B),(S) not all satisfied");

        const CriterionResult cr =
            criterion_integral(f, params.alpha, params.n, 1e-8, std::exp(params.delta_log));
        summary["criterion"] = cr.diverges() ? "diverges" : "converges";
        summary["criterion_certificate"] = cr.certificate;
        if (!cr.diverges()) rep.fail("criterion integral did not diverge");

        const double liminf = sugitani_liminf(f, params.alpha, params.n);
        summary["sugitani_liminf"] = liminf;
        if (liminf != 0.0) rep.fail("sugitani liminf nonzero");

        const Verdict v = classify(f, params.alpha, params.n);
        summary["classify"] = v.to_json();
        if (!v.is_blow_up()) rep.fail("classify did not return blow-up");
    } catch (const WindowViolation& e) {
        summary["error"] = std::string("WindowViolation: ") + e.what();
        rep.fail(summary["error"].get<std::string>());
    } catch (const OrderingViolation& e) {
        summary["error"] = std::string("OrderingViolation: ") + e.what();
        rep.fail(summary["error"].get<std::string>());
    }
    rep.summary["example4"] = summary;
}

// ---- command: dichotomy-sweep ----------------------------------------------

void run_dichotomy_sweep(const ExperimentManifest& m, const fs::path& out, RunReport& rep,
                         int jobs) {
    const json& p = m.parameters;
    struct Cell {
        json fj;
        double alpha;
        int n;
        Verdict criterion, ode, pde;
        bool pde_run = false;
        bool agree = true;
    };
    std::vector<Cell> cells;
    for (const json& fam : p.at("families")) {
        const std::string kind = fam.at("kind").get<std::string>();
        std::vector<json> fjs;
        if (kind == "power") {
            for (double pv : fam.at("p_values").get<std::vector<double>>())
                fjs.push_back({{"kind", "power"}, {"p", pv}});
        } else if (kind == "logcorrected") {
            for (double bv : fam.at("beta_values").get<std::vector<double>>())
                fjs.push_back({{"kind", "logcorrected"},
                               {"alpha", 0.0},  // filled per cell
                               {"n", 0},
                               {"beta", bv},
                               {"c0", fam.value("c0", 0.01)}});
        } else {
            throw ValidationError("unknown family kind: " + kind);
        }
        for (const json& an : p.at("alpha_n")) {
            const double alpha = an.at(0).get<double>();
            const int n = an.at(1).get<int>();
            for (json fj : fjs) {
                if (fj.at("kind") == "logcorrected") {
                    fj["alpha"] = alpha;
                    fj["n"] = n;
                }
                cells.push_back({fj, alpha, n, {}, {}, {}, false, true});
            }
        }
    }

    const bool with_ode = p.value("ode", true);
    const bool with_pde = p.value("pde", false);
    const OdeBudget obudget = ode_budget_from(p.value("budget", json::object()));
    OdeSweepSample sample;
    if (p.contains("sample")) {
        sample.x0s = p.at("sample").at("x0s").get<std::vector<double>>();
        sample.t0s = p.at("sample").at("t0s").get<std::vector<double>>();
    } else {
        sample.x0s = {1e-2, 1e-1, 1.0, 1e1, 1e2};
        sample.t0s = {0.1, 1.0, 10.0};
    }

    parallel_cells(jobs, cells.size(), [&](size_t i) {
        Cell& cell = cells[i];
        const Nonlinearity f = Nonlinearity::from_json(cell.fj);
        cell.criterion = classify(f, cell.alpha, cell.n);
        if (with_ode)
            cell.ode = ode_blowup_property(f, cell.alpha, cell.n, sample, obudget).verdict;
        if (with_pde && cell.n <= 2) {
            const GridSpec grid{p.value("L", 40.0), p.value("N", 256)};
            std::vector<PhiFamilyMember> family;
            for (double amp : {1e-1, 1.0, 1e1, 1e2, 1e3}) {
                family.push_back({"gaussian", amp, make_gaussian_field(grid, cell.n, amp, 1.0)});
                family.push_back(
                    {"plateau", amp, make_plateau_field(grid, cell.n, amp, 2.0, 0.5)});
            }
            cell.pde_run = true;
            cell.pde = pde_blowup_property(f, KernelSpec{cell.alpha, cell.n}, grid, family,
                                           pde_budget_from(p.value("pde_budget", json::object())))
                           .verdict;
        }
        auto disagrees = [&](const Verdict& v) {
            return !v.is_undetermined() && v.outcome != cell.criterion.outcome;
        };
        if (with_ode && disagrees(cell.ode)) cell.agree = false;
        if (cell.pde_run && disagrees(cell.pde)) cell.agree = false;
    });

    std::ofstream os = open_out(out, "dichotomy_sweep.csv");
    os << "f,alpha,n,criterion,ode,pde,agree\n";
    json rows = json::array();
    for (const Cell& cell : cells) {
        const Nonlinearity f = Nonlinearity::from_json(cell.fj);
        os << f.describe() << "," << cell.alpha << "," << cell.n << ","
           << verdict_cell(cell.criterion) << "," << (with_ode ? verdict_cell(cell.ode) : "-")
           << "," << (cell.pde_run ? verdict_cell(cell.pde) : "-") << ","
           << (cell.agree ? 1 : 0) << "\n";
        if (!cell.agree)
            rep.fail("disagreement at " + f.describe() + " alpha=" + std::to_string(cell.alpha) +
                     " n=" + std::to_string(cell.n) + ": criterion " +
                     verdict_cell(cell.criterion) + " vs ode " + verdict_cell(cell.ode));
        json row{{"f", cell.fj},
                 {"alpha", cell.alpha},
                 {"n", cell.n},
                 {"criterion", cell.criterion.to_json()},
                 {"agree", cell.agree}};
        if (with_ode) row["ode"] = cell.ode.to_json();
        if (cell.pde_run) row["pde"] = cell.pde.to_json();
        rows.push_back(row);
    }
    rep.summary["cells"] = rows;
}

// ---- command: kernel-verify --------------------------------------------------

void run_kernel_verify(const ExperimentManifest& m, const fs::path& out, RunReport& rep) {
    const json& p = m.parameters;
    const int n = p.value("n", 1);
    const GridSpec grid{p.value("L", 20.0), p.value("N", 512)};
    const auto alphas = p.value("alphas", std::vector<double>{0.5, 1.0, 1.5, 2.0});

    std::ofstream os = open_out(out, "kernel_report.csv");
    os << "check,alpha,param,value,pass\n";
    char buf[256];
    auto row = [&](const char* check, double alpha, double param, double value, bool ok) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%d\n", check, alpha, param, value,
                      ok ? 1 : 0);
        os << buf;
        if (!ok) rep.fail(std::string(check) + " failed at alpha=" + std::to_string(alpha));
    };

    for (double alpha : alphas) {
        const KernelSpec spec{alpha, n};
        // Mass on the box (tight only for light tails; alpha=2 asserted).
        const Field k = kernel_field(spec, grid, 0.1);
        const double mval = mass(k);
        row("mass", alpha, 0.1, mval, alpha < 2.0 || std::fabs(mval - 1.0) <= 1e-9);
        // Scaling identity.
        double worst = 0;
        for (double t : {0.25, 4.0})
            for (double r : {0.0, 0.7, 3.3}) {
                const double lhs = kernel_eval_radial(spec, r, t);
                const double rhs = std::pow(t, -static_cast<double>(n) / alpha) *
                                   kernel_eval_radial(spec, r * std::pow(t, -1.0 / alpha), 1.0);
                worst = std::max(worst, std::fabs(lhs - rhs) / rhs);
            }
        row("scaling", alpha, 0, worst, worst <= 1e-8);
        // Ratio bound and radial monotonicity.
        const RatioBound rb = kernel_ratio_bound_check(spec, grid, 0.5, 2.0);
        row("ratio_bound", alpha, 0.5, rb.min_ratio, rb.min_ratio >= 1.0 - 1e-6);
        row("radial_monotone", alpha, 1.0, 1.0, radial_monotone_check(spec, grid, 1.0));
        // Semigroup composition on a band-limited field.
        const double k1w = 3.141592653589793 / grid.L;
        Field bl = n == 1 ? Field::from_function(grid,
                                                 [&](double x) {
                                                     return 1.0 + 0.5 * std::cos(3 * k1w * x);
                                                 })
                          : Field::from_function2(grid, [&](double x, double y) {
                                return 1.0 + 0.25 * std::cos(3 * k1w * x) * std::cos(2 * k1w * y);
                            });
        Field once = semigroup_apply(spec, bl, 0.7);
        once = semigroup_apply(spec, once, 0.3);
        const Field direct = semigroup_apply(spec, bl, 1.0);
        double dev = 0;
        for (size_t i = 0; i < once.size(); ++i)
            dev = std::max(dev, std::fabs(once[i] - direct[i]));
        row("semigroup_compose", alpha, 1.0, dev, dev <= 1e-10);
    }
    // Cauchy closed form vs the quadrature path.
    const double pi = 3.141592653589793;
    double worst = 0;
    for (double r : {0.0, 0.5, 2.0, 10.0}) {
        const double quad = fourier_inversion_profile(1.0, n, r);
        const double exact =
            n == 1 ? 1.0 / (pi * (1 + r * r)) : 1.0 / (2 * pi * std::pow(1 + r * r, 1.5));
        worst = std::max(worst, std::fabs(quad - exact) / exact);
    }
    row("cauchy_profile", 1.0, 0, worst, worst <= 1e-8);
    rep.summary["kernel_checks"] = rep.pass;
}

}  // namespace

nlohmann::json ExperimentManifest::to_json() const {
    return json{{"command", command},
                {"parameters", parameters},
                {"seed", seed},
                {"output_dir", output_dir}};
}

ExperimentManifest ExperimentManifest::from_json(const json& j) {
    ExperimentManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.value("parameters", json::object());
    m.seed = j.value("seed", 2025L);
    m.output_dir = j.value("output_dir", std::string());
    if (m.output_dir.empty()) m.output_dir = default_output_dir(m.command);
    return m;
}

ExperimentManifest ExperimentManifest::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot open manifest: " + path);
    return from_json(json::parse(is));
}

void ExperimentManifest::validate() const {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        throw ValidationError("unknown command: " + command);
    if (!parameters.is_object()) throw ValidationError("parameters must be an object");
    const json& p = parameters;
    auto need = [&](const char* key) {
        if (!p.contains(key))
            throw ValidationError("command '" + command + "' requires parameter '" + key + "'");
    };
    if (command == "criteria") {
        if (!p.contains("f") && !p.contains("fs")) throw ValidationError("criteria needs f or fs");
        if (!p.contains("alpha_n")) {
            need("alpha");
            need("n");
        }
    } else if (command == "ode") {
        need("f");
        need("alpha");
        need("n");
        need("x0");
        need("t0");
    } else if (command == "pde") {
        need("f");
        need("alpha");
        need("n");
        need("phi");
    } else if (command == "example4") {
        need("alpha");
        need("n");
        need("p");
        need("theta");
    } else if (command == "dichotomy-sweep") {
        need("families");
        need("alpha_n");
    }
}

RunReport run_manifest(const ExperimentManifest& manifest, int jobs) {
    manifest.validate();
    RunReport rep;
    rep.summary["manifest"] = manifest.to_json();
    const fs::path out(manifest.output_dir);
    try {
        if (manifest.command == "criteria")
            run_criteria(manifest, out, rep);
        else if (manifest.command == "ode")
            run_ode(manifest, out, rep);
        else if (manifest.command == "pde")
            run_pde(manifest, out, rep);
        else if (manifest.command == "example4")
            run_example4(manifest, out, rep);
        else if (manifest.command == "dichotomy-sweep")
            run_dichotomy_sweep(manifest, out, rep, jobs);
        else if (manifest.command == "kernel-verify")
            run_kernel_verify(manifest, out, rep);
    } catch (const std::exception& e) {
        rep.fail(std::string("exception: ") + e.what());
    }
    rep.summary["pass"] = rep.pass;
    rep.summary["failures"] = rep.failures;
    std::ofstream os = open_out(out, "summary.json");
    os << rep.summary.dump(2) << "\n";
    return rep;
}

}  // namespace blowup
