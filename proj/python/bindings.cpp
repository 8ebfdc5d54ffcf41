#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "rollupgames/asymmetric.hpp"
#include "rollupgames/closed_form.hpp"
#include "rollupgames/extensions.hpp"
#include "rollupgames/io.hpp"
#include "rollupgames/oracle.hpp"
#include "rollupgames/payoffs.hpp"
#include "rollupgames/simulate.hpp"

namespace py = pybind11;
using namespace rollupgames;

namespace {

StrategyProfile make_profile(double beta, const std::vector<std::pair<double, double>>& mixes,
                             const std::string& variant,
                             const std::optional<NonKycProfile>& non_kyc,
                             const std::optional<TieBreakProfile>& tie_break) {
    StrategyProfile s;
    s.beta = beta;
    for (const auto& [alpha, gamma] : mixes) s.validators.push_back({alpha, gamma});
    if (variant == "kyc") s.variant = Variant::kyc;
    else if (variant == "non_kyc") s.variant = Variant::non_kyc;
    else if (variant == "tie_break") s.variant = Variant::tie_break;
    else throw ConfigError("unknown variant \"" + variant + "\"");
    s.non_kyc = non_kyc;
    s.tie_break = tie_break;
    return s;
}

}  // namespace

PYBIND11_MODULE(_rollupgames, mod) {
    mod.doc() = "equilibrium analysis for announcement challenge games";

    static py::exception<Infeasible> infeasible_exc(mod, "InfeasibleError");
    py::register_exception_translator([](std::exception_ptr ep) {
        try {
            if (ep) std::rethrow_exception(ep);
        } catch (const Infeasible& inf) {
            const std::string msg = inf.condition + " (slack " + format_sig12(inf.slack) +
                                    ", beta " + format_sig12(inf.beta) + ")";
            PyErr_SetString(infeasible_exc.ptr(), msg.c_str());
        }
    });

    py::register_exception<ModelError>(mod, "ModelError", PyExc_ValueError);

    py::class_<GameParams>(mod, "GameParams")
        .def(py::init([](double Z, double S, double B, double T, double C, double V,
                         double delta, double f_p, double f_n, double lambda, int n) {
                 GameParams p{Z, S, B, T, C, V, delta, f_p, f_n, lambda, n};
                 return p;
             }),
             py::arg("Z") = 200.0, py::arg("S") = 100.0, py::arg("B") = 20.0,
             py::arg("T") = 10.0, py::arg("C") = 8.0, py::arg("V") = 50.0,
             py::arg("delta") = 0.5, py::arg("f_p") = 0.1, py::arg("f_n") = 0.1,
             py::arg("lambda_") = 1.0, py::arg("n") = 1)
        .def_readwrite("Z", &GameParams::Z)
        .def_readwrite("S", &GameParams::S)
        .def_readwrite("B", &GameParams::B)
        .def_readwrite("T", &GameParams::T)
        .def_readwrite("C", &GameParams::C)
        .def_readwrite("V", &GameParams::V)
        .def_readwrite("delta", &GameParams::delta)
        .def_readwrite("f_p", &GameParams::f_p)
        .def_readwrite("f_n", &GameParams::f_n)
        .def_readwrite("lambda_", &GameParams::lambda)
        .def_readwrite("n", &GameParams::n);

    py::enum_<AggregatorAction>(mod, "AggregatorAction")
        .value("honest", AggregatorAction::honest)
        .value("attack", AggregatorAction::attack);

    py::enum_<ValidatorAction>(mod, "ValidatorAction")
        .value("verify", ValidatorAction::verify)
        .value("free_ride", ValidatorAction::free_ride)
        .value("blind_challenge", ValidatorAction::blind_challenge);

    py::enum_<Backend>(mod, "Backend")
        .value("binomial_sum", Backend::binomial_sum)
        .value("enumeration", Backend::enumeration);

    py::class_<ValidatorMix>(mod, "ValidatorMix")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("gamma") = 0.0)
        .def_readwrite("alpha", &ValidatorMix::alpha)
        .def_readwrite("gamma", &ValidatorMix::gamma);

    py::class_<NonKycProfile>(mod, "NonKycProfile")
        .def(py::init<double, std::vector<double>>(), py::arg("V_max"),
             py::arg("deposits"))
        .def_readwrite("V_max", &NonKycProfile::V_max)
        .def_readwrite("deposits", &NonKycProfile::deposits);

    py::class_<TieBreakProfile>(mod, "TieBreakProfile")
        .def(py::init<double>(), py::arg("D"))
        .def_readwrite("D", &TieBreakProfile::D);

    py::class_<StrategyProfile>(mod, "StrategyProfile")
        .def(py::init(&make_profile), py::arg("beta"), py::arg("validators"),
             py::arg("variant") = "kyc", py::arg("non_kyc") = std::nullopt,
             py::arg("tie_break") = std::nullopt)
        .def_readwrite("beta", &StrategyProfile::beta)
        .def_readwrite("validators", &StrategyProfile::validators);

    py::class_<DeviationReport>(mod, "DeviationReport")
        .def_readonly("player", &DeviationReport::player)
        .def_readonly("action_utilities", &DeviationReport::action_utilities)
        .def_readonly("support_spread", &DeviationReport::support_spread)
        .def_readonly("best_deviation_gain", &DeviationReport::best_deviation_gain)
        .def("passes", &DeviationReport::pass, py::arg("eps") = kDefaultEps);

    py::class_<FeasibilityEntry>(mod, "FeasibilityEntry")
        .def_readonly("condition", &FeasibilityEntry::condition)
        .def_readonly("satisfied", &FeasibilityEntry::satisfied)
        .def_readonly("slack", &FeasibilityEntry::slack);

    py::class_<EquilibriumResult>(mod, "EquilibriumResult")
        .def_property_readonly("kind",
                               [](const EquilibriumResult& r) {
                                   return std::string(to_string(r.kind));
                               })
        .def_readonly("profile", &EquilibriumResult::profile)
        .def_readonly("m", &EquilibriumResult::m)
        .def_readonly("feasibility", &EquilibriumResult::feasibility)
        .def_readonly("loss", &EquilibriumResult::loss)
        .def("__repr__", [](const EquilibriumResult& r) {
            return "<EquilibriumResult " + std::string(to_string(r.kind)) +
                   " m=" + std::to_string(r.m) + " beta=" + format_sig12(r.profile.beta) +
                   " loss=" + format_sig12(r.loss) + ">";
        });

    py::class_<DerivedQuantities>(mod, "DerivedQuantities")
        .def_readonly("A", &DerivedQuantities::A)
        .def_readonly("R", &DerivedQuantities::R)
        .def_readonly("P_m", &DerivedQuantities::P_m)
        .def_readonly("Q_m", &DerivedQuantities::Q_m)
        .def_readonly("Delta_m", &DerivedQuantities::Delta_m)
        .def_readonly("Gamma_m", &DerivedQuantities::Gamma_m)
        .def_readonly("alpha_m", &DerivedQuantities::alpha_m)
        .def_readonly("m", &DerivedQuantities::m)
        .def_readonly("n", &DerivedQuantities::n);

    py::class_<CombinatorialTerms>(mod, "CombinatorialTerms")
        .def_readonly("p1", &CombinatorialTerms::p1)
        .def_readonly("p2", &CombinatorialTerms::p2)
        .def_readonly("p3", &CombinatorialTerms::p3)
        .def_readonly("p4", &CombinatorialTerms::p4)
        .def_readonly("p5", &CombinatorialTerms::p5);

    py::class_<AsymSolution>(mod, "AsymSolution")
        .def_readonly("alpha1", &AsymSolution::alpha1)
        .def_readonly("alpha2", &AsymSolution::alpha2)
        .def_readonly("beta", &AsymSolution::beta)
        .def_readonly("residuals", &AsymSolution::residuals)
        .def_readonly("loss", &AsymSolution::loss)
        .def_readonly("k", &AsymSolution::k)
        .def_readonly("m", &AsymSolution::m)
        .def_readonly("branch", &AsymSolution::branch);

    py::class_<NonKycParams>(mod, "NonKycParams")
        .def(py::init<double, double, double>(), py::arg("V_min"), py::arg("V_max"),
             py::arg("V_star"))
        .def_readwrite("V_min", &NonKycParams::V_min)
        .def_readwrite("V_max", &NonKycParams::V_max)
        .def_readwrite("V_star", &NonKycParams::V_star);

    py::class_<TieBreakParams>(mod, "TieBreakParams")
        .def(py::init<double>(), py::arg("D"))
        .def_readwrite("D", &TieBreakParams::D);

    py::class_<TieBreakDerivative>(mod, "TieBreakDerivative")
        .def_readonly("dEA_dZ", &TieBreakDerivative::dEA_dZ)
        .def_readonly("alpha", &TieBreakDerivative::alpha)
        .def_readonly("beta", &TieBreakDerivative::beta);

    py::class_<ActionStats>(mod, "ActionStats")
        .def_readonly("rounds", &ActionStats::rounds)
        .def_readonly("mean", &ActionStats::mean)
        .def_readonly("se", &ActionStats::se);

    py::class_<ValidatorStats>(mod, "ValidatorStats")
        .def_readonly("mean", &ValidatorStats::mean)
        .def_readonly("se", &ValidatorStats::se)
        .def_readonly("by_action", &ValidatorStats::by_action);

    py::class_<SimulationReport>(mod, "SimulationReport")
        .def_readonly("rounds", &SimulationReport::rounds)
        .def_readonly("seed", &SimulationReport::seed)
        .def_readonly("mean_utility_aggregator", &SimulationReport::mean_utility_aggregator)
        .def_readonly("se_aggregator", &SimulationReport::se_aggregator)
        .def_readonly("mean_utility_validators", &SimulationReport::mean_utility_validators)
        .def_readonly("empirical_loss_per_round", &SimulationReport::empirical_loss_per_round)
        .def_readonly("se_loss", &SimulationReport::se_loss)
        .def_readonly("attack_rate", &SimulationReport::attack_rate)
        .def_readonly("detection_rate", &SimulationReport::detection_rate);

    py::class_<StatCheck>(mod, "StatCheck")
        .def_readonly("name", &StatCheck::name)
        .def_readonly("empirical", &StatCheck::empirical)
        .def_readonly("theoretical", &StatCheck::theoretical)
        .def_readonly("se", &StatCheck::se)
        .def_readonly("z", &StatCheck::z)
        .def_readonly("ok", &StatCheck::ok);

    py::class_<ComparisonReport>(mod, "ComparisonReport")
        .def_readonly("pass_", &ComparisonReport::pass)
        .def_readonly("stats", &ComparisonReport::stats)
        .def_readonly("warnings", &ComparisonReport::warnings);

    mod.def("validate_params", &validate_params, py::arg("params"));
    mod.def("payoff_single", &payoff_single, py::arg("params"), py::arg("aggregator"),
            py::arg("validator"));
    mod.def(
        "payoff_multi",
        [](const GameParams& p, AggregatorAction a,
           const std::vector<ValidatorAction>& actions) {
            const PayoffRow row = payoff_multi(p, a, actions);
            return py::make_tuple(row.aggregator, row.validators);
        },
        py::arg("params"), py::arg("aggregator"), py::arg("actions"));
    mod.def("expected_utility_aggregator", &expected_utility_aggregator,
            py::arg("params"), py::arg("profile"), py::arg("action"));
    mod.def("expected_utility_validator", &expected_utility_validator,
            py::arg("params"), py::arg("profile"), py::arg("i"), py::arg("action"),
            py::arg("backend") = Backend::binomial_sum);
    mod.def("best_response_check", &best_response_check, py::arg("params"),
            py::arg("profile"), py::arg("backend") = Backend::binomial_sum);
    mod.def("is_epsilon_equilibrium", &is_epsilon_equilibrium, py::arg("reports"),
            py::arg("eps") = kDefaultEps);
    mod.def("system_loss", &system_loss, py::arg("params"), py::arg("profile"));

    mod.def("damage_ratio", &damage_ratio, py::arg("params"));
    mod.def("challenge_reward_ratio", &challenge_reward_ratio, py::arg("params"));
    mod.def("alpha_sym", &alpha_sym, py::arg("A"), py::arg("m"));
    mod.def("P_coeff", &P_coeff, py::arg("A"), py::arg("m"));
    mod.def("Q_coeff", &Q_coeff, py::arg("A"), py::arg("m"));
    mod.def("Delta_coeff", &Delta_coeff, py::arg("A"), py::arg("m"));
    mod.def("Gamma_coeff", &Gamma_coeff, py::arg("A"), py::arg("m"));
    mod.def("beta_sym", &beta_sym, py::arg("params"), py::arg("m"));
    mod.def("critical_verification_cost", &critical_verification_cost, py::arg("params"));
    mod.def("derived_quantities", &derived_quantities, py::arg("params"), py::arg("m"));
    mod.def("single_validator_equilibria", &single_validator_equilibria,
            py::arg("params"));
    mod.def("two_validator_equilibria", &two_validator_equilibria, py::arg("params"));
    mod.def(
        "symmetric_mne",
        [](const GameParams& p, int m) {
            MneResult res = symmetric_mne(p, m);
            if (auto* inf = std::get_if<Infeasible>(&res)) {
                throw *inf;
            }
            return std::get<EquilibriumResult>(res);
        },
        py::arg("params"), py::arg("m"));
    mod.def("enumerate_symmetric_equilibria", &enumerate_symmetric_equilibria,
            py::arg("params"));
    mod.def(
        "combinatorial_terms",
        [](double a1, double a2, int k, int m) { return combinatorial_terms(a1, a2, k, m); },
        py::arg("alpha1"), py::arg("alpha2"), py::arg("k"), py::arg("m"));
    mod.def("solve_asymmetric", &solve_asymmetric, py::arg("params"), py::arg("m"),
            py::arg("k"));
    mod.def("nonkyc_two_validator_equilibrium", &nonkyc_two_validator_equilibrium,
            py::arg("params"), py::arg("non_kyc"));
    mod.def("tiebreak_alpha", &tiebreak_alpha, py::arg("params"), py::arg("tie_break"),
            py::arg("beta"), py::arg("Z"));
    mod.def("tiebreak_dEA_dZ", &tiebreak_dEA_dZ, py::arg("params"), py::arg("tie_break"),
            py::arg("Z"));
    mod.def("tiebreak_equilibrium", &tiebreak_equilibrium, py::arg("params"),
            py::arg("tie_break"));
    mod.def("simulate", &simulate, py::arg("params"), py::arg("profile"),
            py::arg("rounds"), py::arg("seed"), py::arg("threads") = 1);
    mod.def("compare_to_theory", &compare_to_theory, py::arg("report"), py::arg("params"),
            py::arg("profile"), py::arg("z_threshold") = 3.0);
}
