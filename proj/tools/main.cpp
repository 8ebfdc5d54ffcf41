#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rollupgames/asymmetric.hpp"
#include "rollupgames/closed_form.hpp"
#include "rollupgames/extensions.hpp"
#include "rollupgames/io.hpp"
#include "rollupgames/oracle.hpp"
#include "rollupgames/simulate.hpp"
#include "rollupgames/sweep.hpp"

namespace rg = rollupgames;

namespace {

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        rg::write_atomic(out_path, content);
        std::cout << "wrote " << out_path << "\n";
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Verification {
    bool pass = false;
    std::string method;
    std::vector<rg::DeviationReport> reports;
    double foc_residual = 0.0;
};

Verification verify_equilibrium(const rg::GameParams& p, const rg::EquilibriumResult& r,
                                double eps) {
    Verification v;
    v.reports = rg::best_response_check(p, r.profile);
    if (r.kind == rg::EquilibriumKind::tie_break) {
        // Stationary point of the aggregator payoff, not a best response:
        // check validator indifference plus the first-order condition.
        v.method = "stationarity";
        const double alpha = r.profile.validators[0].alpha;
        const double beta = r.profile.beta;
        const double d = r.profile.tie_break->D;
        v.foc_residual = std::abs(2.0 * beta * d * alpha * alpha +
                                  (p.Z + p.S) * alpha + (p.B - p.Z));
        bool validators_ok = true;
        for (std::size_t i = 1; i < v.reports.size(); ++i) {
            validators_ok = validators_ok && v.reports[i].pass(eps);
        }
        v.pass = validators_ok && v.foc_residual <= eps * std::max(1.0, p.Z);
    } else {
        v.method = "best_response";
        v.pass = rg::is_epsilon_equilibrium(v.reports, eps);
    }
    return v;
}

rg::Json verification_json(const Verification& v, double eps) {
    rg::Json reports = rg::Json::array();
    for (const auto& rep : v.reports) reports.add(rg::to_json(rep, eps));
    rg::Json j = rg::Json::object()
                     .set("method", v.method)
                     .set("pass", v.pass)
                     .set("reports", std::move(reports));
    if (v.method == "stationarity") j.set("foc_residual", v.foc_residual);
    return j;
}

std::string profile_brief(const rg::StrategyProfile& s) {
    std::string out = "beta=" + rg::format_sig12(s.beta) + " alpha=[";
    for (std::size_t i = 0; i < s.validators.size(); ++i) {
        if (i) out += ",";
        out += rg::format_sig12(s.validators[i].alpha);
    }
    out += "]";
    double gsum = 0.0;
    for (const auto& v : s.validators) gsum += v.gamma;
    if (gsum > 0.0) {
        out += " gamma=[";
        for (std::size_t i = 0; i < s.validators.size(); ++i) {
            if (i) out += ",";
            out += rg::format_sig12(s.validators[i].gamma);
        }
        out += "]";
    }
    return out;
}

int cmd_equilibria(const std::string& config_path, const std::string& out_path,
                   double eps) {
    const rg::Config cfg = rg::load_config(config_path);
    const rg::GameParams& p = cfg.params;
    rg::validate_params(p);

    std::vector<rg::EquilibriumResult> results;
    std::vector<rg::MneRow> rows;
    if (cfg.variant == rg::Variant::non_kyc) {
        if (!cfg.non_kyc) throw rg::ConfigError("variant non_kyc needs a non_kyc object");
        results.push_back(rg::nonkyc_two_validator_equilibrium(p, *cfg.non_kyc));
    } else if (cfg.variant == rg::Variant::tie_break) {
        if (!cfg.tie_break) {
            throw rg::ConfigError("variant tie_break needs a tie_break object");
        }
        results.push_back(rg::tiebreak_equilibrium(p, *cfg.tie_break));
    } else if (p.n == 1) {
        results = rg::single_validator_equilibria(p);
    } else if (p.n == 2) {
        results = rg::two_validator_equilibria(p);
    } else {
        rows = rg::enumerate_symmetric_rows(p);
        results = rg::enumerate_symmetric_equilibria(p);
    }

    if (!out_path.empty() && ends_with(out_path, ".csv")) {
        if (rows.empty()) {
            throw rg::ConfigError(
                "csv output is the symmetric enumeration table; needs kyc and n >= 3");
        }
        emit(rg::mne_rows_csv(rows), out_path);
        return 0;
    }

    bool all_verified = true;
    rg::Json eq_json = rg::Json::array();
    for (const auto& r : results) {
        const Verification v = verify_equilibrium(p, r, eps);
        all_verified = all_verified && v.pass;
        rg::Json item = rg::to_json(r);
        item.set("verification", verification_json(v, eps));
        if (!v.pass) item.set("warning", "verification failed at eps");
        eq_json.add(std::move(item));
        std::printf("%-20s m=%-3d %s loss=%s verified=%s%s\n", to_string(r.kind), r.m,
                    profile_brief(r.profile).c_str(), rg::format_sig12(r.loss).c_str(),
                    v.pass ? "pass" : "FAIL", v.pass ? "" : " [warning]");
    }
    rg::Json doc = rg::Json::object()
                       .set("params", rg::to_json(p))
                       .set("variant", to_string(cfg.variant))
                       .set("eps", eps)
                       .set("equilibria", std::move(eq_json));
    if (!rows.empty()) {
        rg::Json row_json = rg::Json::array();
        for (const auto& row : rows) {
            rg::Json item = rg::Json::object()
                                .set("m", row.m)
                                .set("derived", rg::to_json(row.dq));
            if (const auto* r = std::get_if<rg::EquilibriumResult>(&row.result)) {
                item.set("result", rg::to_json(*r));
            } else {
                item.set("result", rg::to_json(std::get<rg::Infeasible>(row.result)));
            }
            row_json.add(std::move(item));
        }
        doc.set("rows", std::move(row_json));
    }
    if (!all_verified) doc.set("warning", "some equilibria failed verification");
    if (!out_path.empty()) emit(doc.dump() + "\n", out_path);
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& profile_path,
               const std::string& out_path, double eps) {
    const rg::Config cfg = rg::load_config(config_path);
    rg::StrategyProfile s = rg::load_profile(profile_path);
    const auto reports = rg::best_response_check(cfg.params, s);
    const bool pass = rg::is_epsilon_equilibrium(reports, eps);

    rg::Json rep_json = rg::Json::array();
    for (const auto& rep : reports) {
        rep_json.add(rg::to_json(rep, eps));
        std::printf("%-14s spread=%-14s gain=%-14s %s\n", rep.player.c_str(),
                    rg::format_sig12(rep.support_spread).c_str(),
                    rg::format_sig12(rep.best_deviation_gain).c_str(),
                    rep.pass(eps) ? "pass" : "FAIL");
    }
    std::printf("verify: %s (eps=%s)\n", pass ? "pass" : "FAIL",
                rg::format_sig12(eps).c_str());
    rg::Json doc = rg::Json::object()
                       .set("eps", eps)
                       .set("pass", pass)
                       .set("reports", std::move(rep_json));
    if (!out_path.empty()) emit(doc.dump() + "\n", out_path);
    return pass ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::string& profile_path,
                 const std::string& out_path, std::uint64_t rounds, std::uint64_t seed,
                 int threads) {
    const rg::Config cfg = rg::load_config(config_path);
    rg::StrategyProfile s = rg::load_profile(profile_path);
    const rg::SimulationReport rep = rg::simulate(cfg.params, s, rounds, seed, threads);
    const rg::ComparisonReport cmp = rg::compare_to_theory(rep, cfg.params, s);

    std::printf("rounds=%llu seed=%llu\n", static_cast<unsigned long long>(rep.rounds),
                static_cast<unsigned long long>(rep.seed));
    std::printf("aggregator mean=%s se=%s\n",
                rg::format_sig12(rep.mean_utility_aggregator).c_str(),
                rg::format_sig12(rep.se_aggregator).c_str());
    std::printf("loss/round=%s attack_rate=%s detection_rate=%s\n",
                rg::format_sig12(rep.empirical_loss_per_round).c_str(),
                rg::format_sig12(rep.attack_rate).c_str(),
                rg::format_sig12(rep.detection_rate).c_str());
    for (const auto& c : cmp.stats) {
        if (!c.ok) {
            std::printf("MISMATCH %s: empirical=%s theory=%s z=%s\n", c.name.c_str(),
                        rg::format_sig12(c.empirical).c_str(),
                        rg::format_sig12(c.theoretical).c_str(),
                        rg::format_sig12(c.z).c_str());
        }
    }
    for (const auto& w : cmp.warnings) std::printf("warning: %s\n", w.c_str());
    std::printf("compare_to_theory: %s\n", cmp.pass ? "pass" : "FAIL");

    rg::Json doc = rg::Json::object()
                       .set("report", rg::to_json(rep))
                       .set("comparison", rg::to_json(cmp));
    if (!out_path.empty()) emit(doc.dump() + "\n", out_path);
    return cmp.pass ? 0 : 1;
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const rg::SweepSpec& overrides, bool has_param, bool has_from,
              bool has_to, bool has_steps, bool has_scale, bool has_target) {
    const rg::Config cfg = rg::load_config(config_path);
    rg::SweepSpec spec;
    if (cfg.sweep) spec = *cfg.sweep;
    if (has_param) spec.param = overrides.param;
    if (has_from) spec.from = overrides.from;
    if (has_to) spec.to = overrides.to;
    if (has_steps) spec.steps = overrides.steps;
    if (has_scale) spec.scale = overrides.scale;
    if (has_target) spec.target = overrides.target;
    if (spec.param.empty()) {
        throw rg::ConfigError("sweep needs a param (config sweep.param or --param)");
    }
    if (overrides.m > 0) spec.m = overrides.m;

    rg::SweepContext ctx;
    ctx.params = cfg.params;
    ctx.variant = cfg.variant;
    if (cfg.non_kyc) ctx.non_kyc = *cfg.non_kyc;
    if (cfg.tie_break) ctx.tie_break = *cfg.tie_break;

    const auto rows = rg::run_sweep(ctx, spec);
    for (const auto& row : rows) {
        if (!row.note.empty()) {
            std::fprintf(stderr, "note: %s=%s: %s\n", spec.param.c_str(),
                         rg::format_sig12(row.value).c_str(), row.note.c_str());
        }
    }
    emit(rg::sweep_rows_csv(spec, rows), out_path);
    return 0;
}

int cmd_asym(const std::string& config_path, const std::string& out_path,
             std::optional<double> from, std::optional<double> to,
             std::optional<int> steps, std::optional<int> m_flag) {
    const rg::Config cfg = rg::load_config(config_path);
    rg::AsymSpec spec;
    if (cfg.asym) spec = *cfg.asym;
    if (m_flag) spec.m = *m_flag;
    if (from) spec.from = *from;
    if (to) spec.to = *to;
    if (steps) spec.steps = *steps;
    if (spec.steps < 1) throw rg::ConfigError("asym sweep needs steps >= 1");

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(spec.steps));
    for (int i = 0; i < spec.steps; ++i) {
        grid.push_back(spec.steps == 1 ? spec.from
                                       : spec.from + (spec.to - spec.from) * i /
                                                         (spec.steps - 1));
    }
    std::vector<std::string> notes;
    const auto rows = rg::sweep_k(cfg.params, spec.m, grid, &notes);
    for (const auto& note : notes) std::fprintf(stderr, "note: %s\n", note.c_str());
    emit(rg::asym_rows_csv(rows), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium analysis for announcement challenge games"};
    app.require_subcommand(1);

    std::string config_path, profile_path, out_path;
    double eps = rg::kDefaultEps;
    std::uint64_t rounds = 1000000, seed = 42;
    int threads = 1;

    auto* eq = app.add_subcommand("equilibria", "closed-form equilibria for a config");
    eq->add_option("--config", config_path, "config JSON")->required();
    eq->add_option("--out", out_path, "output path (.json or .csv)");
    eq->add_option("--eps", eps, "verification tolerance");

    auto* ver = app.add_subcommand("verify", "best-response check a profile");
    ver->add_option("--config", config_path, "config JSON")->required();
    ver->add_option("--profile", profile_path, "profile JSON")->required();
    ver->add_option("--out", out_path, "output JSON path");
    ver->add_option("--eps", eps, "tolerance");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo a profile and compare");
    sim->add_option("--config", config_path, "config JSON")->required();
    sim->add_option("--profile", profile_path, "profile JSON")->required();
    sim->add_option("--out", out_path, "output JSON path");
    sim->add_option("--rounds", rounds, "rounds to simulate");
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--threads", threads, "worker threads");

    rg::SweepSpec ov;
    std::string scale_str, target_str;
    auto* sw = app.add_subcommand("sweep", "parameter sweep to CSV");
    sw->add_option("--config", config_path, "config JSON")->required();
    sw->add_option("--out", out_path, "output CSV path");
    auto* o_param = sw->add_option("--param", ov.param, "swept parameter");
    auto* o_from = sw->add_option("--from", ov.from, "range start");
    auto* o_to = sw->add_option("--to", ov.to, "range end");
    auto* o_steps = sw->add_option("--steps", ov.steps, "grid points");
    auto* o_scale = sw->add_option("--scale", scale_str, "linear|log");
    auto* o_target = sw->add_option("--target", target_str, "sweep target");
    sw->add_option("--m", ov.m, "group size for Gamma_m/Delta_m targets");

    std::optional<double> a_from, a_to;
    std::optional<int> a_steps, a_m;
    auto* as = app.add_subcommand("asym", "asymmetric R sweep to CSV");
    as->add_option("--config", config_path, "config JSON")->required();
    as->add_option("--out", out_path, "output CSV path");
    as->add_option("--from", [&](auto res) { a_from = std::stod(res[0]); return true; },
                   "R range start");
    as->add_option("--to", [&](auto res) { a_to = std::stod(res[0]); return true; },
                   "R range end");
    as->add_option("--steps", [&](auto res) { a_steps = std::stoi(res[0]); return true; },
                   "grid points");
    as->add_option("--m", [&](auto res) { a_m = std::stoi(res[0]); return true; },
                   "mixer count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (eq->parsed()) return cmd_equilibria(config_path, out_path, eps);
        if (ver->parsed()) return cmd_verify(config_path, profile_path, out_path, eps);
        if (sim->parsed()) {
            return cmd_simulate(config_path, profile_path, out_path, rounds, seed,
                                threads);
        }
        if (sw->parsed()) {
            if (!target_str.empty()) ov.target = rg::sweep_target_from_string(target_str);
            if (!scale_str.empty()) ov.scale = rg::sweep_scale_from_string(scale_str);
            return cmd_sweep(config_path, out_path, ov, !o_param->empty(),
                             !o_from->empty(), !o_to->empty(), !o_steps->empty(),
                             !o_scale->empty(), !o_target->empty());
        }
        if (as->parsed()) return cmd_asym(config_path, out_path, a_from, a_to, a_steps, a_m);
    } catch (const rg::ModelError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
