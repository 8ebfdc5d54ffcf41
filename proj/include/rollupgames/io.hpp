#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rollupgames/asymmetric.hpp"
#include "rollupgames/closed_form.hpp"
#include "rollupgames/extensions.hpp"
#include "rollupgames/oracle.hpp"
#include "rollupgames/params.hpp"
#include "rollupgames/simulate.hpp"
#include "rollupgames/sweep.hpp"

namespace rollupgames {

// Output-side JSON tree. Floating point values are rendered with 12
// significant digits, matching the CSV writers.
class Json {
  public:
    Json() : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(int i) : v_(static_cast<std::int64_t>(i)) {}
    Json(std::int64_t i) : v_(i) {}
    Json(std::uint64_t i) : v_(static_cast<std::int64_t>(i)) {}
    Json(double d) : v_(d) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}

    static Json object();
    static Json array();

    Json& set(const std::string& key, Json value);  // object
    Json& add(Json value);                          // array

    std::string dump(int indent = 2) const;

  private:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_;
    void dump_to(std::string& out, int indent, int depth) const;
};

// %.12g
std::string format_sig12(double x);

// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

Json to_json(const GameParams& p);
Json to_json(const StrategyProfile& s);
Json to_json(const FeasibilityEntry& e);
Json to_json(const EquilibriumResult& r);
Json to_json(const Infeasible& inf);
Json to_json(const DerivedQuantities& dq);
Json to_json(const DeviationReport& r, double eps);
Json to_json(const SimulationReport& rep);
Json to_json(const ComparisonReport& rep);
Json to_json(const AsymSolution& sol);

// Strict parsers: unknown keys, missing keys, and wrong types all raise
// ConfigError with the offending key in the message.
GameParams parse_params(const std::string& json_text);
StrategyProfile parse_profile(const std::string& json_text);

struct AsymSpec {
    int m = 2;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

struct Config {
    GameParams params;
    Variant variant = Variant::kyc;
    std::optional<NonKycParams> non_kyc;
    std::optional<TieBreakParams> tie_break;
    std::optional<SweepSpec> sweep;
    std::optional<AsymSpec> asym;
};

Config parse_config(const std::string& json_text);
Config load_config(const std::string& path);
StrategyProfile load_profile(const std::string& path);

// CSV writers. Headers:
//   m,beta,alpha,loss,feasible,R,Gamma_m
//   k,R,branch,alpha1,alpha2,beta,loss,residual_max
//   param,value,target,target_value,violates_assumptions
std::string mne_rows_csv(const std::vector<MneRow>& rows);
std::string asym_rows_csv(const std::vector<AsymSweepRow>& rows);
std::string sweep_rows_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace rollupgames
