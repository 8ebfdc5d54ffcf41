#include "rollupgames/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rollupgames {

Json Json::object() {
    Json j;
    j.v_ = Object{};
    return j;
}

Json Json::array() {
    Json j;
    j.v_ = Array{};
    return j;
}

Json& Json::set(const std::string& key, Json value) {
    std::get<Object>(v_).emplace_back(key, std::move(value));
    return *this;
}

Json& Json::add(Json value) {
    std::get<Array>(v_).push_back(std::move(value));
    return *this;
}

namespace {

void escape_to(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

}  // namespace

std::string format_sig12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (const bool* b = std::get_if<bool>(&v_)) {
        out += *b ? "true" : "false";
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
        out += std::to_string(*i);
    } else if (const double* d = std::get_if<double>(&v_)) {
        out += std::isfinite(*d) ? format_sig12(*d) : "null";
    } else if (const std::string* s = std::get_if<std::string>(&v_)) {
        escape_to(out, *s);
    } else if (const Array* a = std::get_if<Array>(&v_)) {
        if (a->empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < a->size(); ++i) {
            out += pad;
            (*a)[i].dump_to(out, indent, depth + 1);
            if (i + 1 < a->size()) out += ',';
            out += '\n';
        }
        out += close_pad + "]";
    } else {
        const Object& o = std::get<Object>(v_);
        if (o.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < o.size(); ++i) {
            out += pad;
            escape_to(out, o[i].first);
            out += ": ";
            o[i].second.dump_to(out, indent, depth + 1);
            if (i + 1 < o.size()) out += ',';
            out += '\n';
        }
        out += close_pad + "}";
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot open " + tmp + " for writing");
        f << content;
        f.flush();
        if (!f) throw ConfigError("write to " + tmp + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw ConfigError("rename " + tmp + " -> " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json to_json(const GameParams& p) {
    return Json::object()
        .set("Z", p.Z)
        .set("S", p.S)
        .set("B", p.B)
        .set("T", p.T)
        .set("C", p.C)
        .set("V", p.V)
        .set("delta", p.delta)
        .set("f_p", p.f_p)
        .set("f_n", p.f_n)
        .set("lambda", p.lambda)
        .set("n", p.n);
}

Json to_json(const StrategyProfile& s) {
    Json validators = Json::array();
    for (const auto& v : s.validators) {
        validators.add(Json::object().set("alpha", v.alpha).set("gamma", v.gamma));
    }
    Json j = Json::object()
                 .set("beta", s.beta)
                 .set("validators", std::move(validators))
                 .set("variant", to_string(s.variant));
    if (s.non_kyc) {
        Json deposits = Json::array();
        for (double d : s.non_kyc->deposits) deposits.add(d);
        j.set("non_kyc", Json::object()
                             .set("V_max", s.non_kyc->V_max)
                             .set("deposits", std::move(deposits)));
    }
    if (s.tie_break) {
        j.set("tie_break", Json::object().set("D", s.tie_break->D));
    }
    return j;
}

Json to_json(const FeasibilityEntry& e) {
    return Json::object()
        .set("condition", e.condition)
        .set("satisfied", e.satisfied)
        .set("slack", e.slack);
}

Json to_json(const EquilibriumResult& r) {
    Json feas = Json::array();
    for (const auto& e : r.feasibility) feas.add(to_json(e));
    return Json::object()
        .set("kind", to_string(r.kind))
        .set("m", r.m)
        .set("profile", to_json(r.profile))
        .set("feasibility", std::move(feas))
        .set("loss", r.loss);
}

Json to_json(const Infeasible& inf) {
    return Json::object()
        .set("infeasible", true)
        .set("condition", inf.condition)
        .set("slack", inf.slack)
        .set("beta", inf.beta);
}

Json to_json(const DerivedQuantities& dq) {
    return Json::object()
        .set("A", dq.A)
        .set("R", dq.R)
        .set("P_m", dq.P_m)
        .set("Q_m", dq.Q_m)
        .set("Delta_m", dq.Delta_m)
        .set("Gamma_m", dq.Gamma_m)
        .set("alpha_m", dq.alpha_m)
        .set("m", dq.m)
        .set("n", dq.n);
}

Json to_json(const DeviationReport& r, double eps) {
    Json utils = Json::object();
    for (const auto& [action, eu] : r.action_utilities) utils.set(action, eu);
    return Json::object()
        .set("player", r.player)
        .set("action_utilities", std::move(utils))
        .set("support_spread", r.support_spread)
        .set("best_deviation_gain", r.best_deviation_gain)
        .set("pass", r.pass(eps));
}

Json to_json(const SimulationReport& rep) {
    Json validators = Json::array();
    for (const auto& vs : rep.mean_utility_validators) {
        Json by_action = Json::object();
        for (const auto& [name, st] : vs.by_action) {
            by_action.set(name, Json::object()
                                    .set("rounds", st.rounds)
                                    .set("mean", st.mean)
                                    .set("se", st.se));
        }
        validators.add(Json::object()
                           .set("mean", vs.mean)
                           .set("se", vs.se)
                           .set("by_action", std::move(by_action)));
    }
    return Json::object()
        .set("rounds", rep.rounds)
        .set("seed", rep.seed)
        .set("mean_utility_aggregator", rep.mean_utility_aggregator)
        .set("se_aggregator", rep.se_aggregator)
        .set("mean_utility_validators", std::move(validators))
        .set("empirical_loss_per_round", rep.empirical_loss_per_round)
        .set("se_loss", rep.se_loss)
        .set("attack_rate", rep.attack_rate)
        .set("detection_rate", rep.detection_rate);
}

Json to_json(const ComparisonReport& rep) {
    Json stats = Json::array();
    for (const auto& c : rep.stats) {
        stats.add(Json::object()
                      .set("name", c.name)
                      .set("empirical", c.empirical)
                      .set("theoretical", c.theoretical)
                      .set("se", c.se)
                      .set("z", c.z)
                      .set("ok", c.ok));
    }
    Json warnings = Json::array();
    for (const auto& w : rep.warnings) warnings.add(w);
    return Json::object()
        .set("pass", rep.pass)
        .set("stats", std::move(stats))
        .set("warnings", std::move(warnings));
}

Json to_json(const AsymSolution& sol) {
    return Json::object()
        .set("k", sol.k)
        .set("m", sol.m)
        .set("n", sol.n)
        .set("branch", sol.branch)
        .set("alpha1", sol.alpha1)
        .set("alpha2", sol.alpha2)
        .set("beta", sol.beta)
        .set("loss", sol.loss)
        .set("residuals", Json::array()
                              .add(sol.residuals[0])
                              .add(sol.residuals[1])
                              .add(sol.residuals[2]));
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const json& j, const char* what,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) bad(std::string(what) + " must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            if (key == a) {
                ok = true;
                break;
            }
        }
        if (!ok) bad("unknown key \"" + key + "\" in " + what);
    }
}

double get_num(const json& j, const char* what, const char* key) {
    if (!j.contains(key)) bad(std::string(what) + " is missing \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

double get_num_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) bad(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

int get_int(const json& j, const char* what, const char* key) {
    if (!j.contains(key)) bad(std::string(what) + " is missing \"" + key + "\"");
    const json& v = j.at(key);
    if (!v.is_number_integer()) bad(std::string("\"") + key + "\" must be an integer");
    return v.get<int>();
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("JSON parse error: ") + e.what());
    }
}

GameParams params_from(const json& j) {
    check_keys(j, "params",
               {"Z", "S", "B", "T", "C", "V", "delta", "f_p", "f_n", "lambda", "n"});
    GameParams p;
    p.Z = get_num(j, "params", "Z");
    p.S = get_num(j, "params", "S");
    p.B = get_num(j, "params", "B");
    p.T = get_num(j, "params", "T");
    p.C = get_num(j, "params", "C");
    p.V = get_num(j, "params", "V");
    p.delta = get_num(j, "params", "delta");
    p.f_p = get_num(j, "params", "f_p");
    p.f_n = get_num(j, "params", "f_n");
    p.lambda = get_num(j, "params", "lambda");
    p.n = get_int(j, "params", "n");
    return p;
}

Variant variant_from(const std::string& s) {
    if (s == "kyc") return Variant::kyc;
    if (s == "non_kyc") return Variant::non_kyc;
    if (s == "tie_break") return Variant::tie_break;
    bad("unknown variant \"" + s + "\"");
}

StrategyProfile profile_from(const json& j) {
    check_keys(j, "profile", {"beta", "validators", "variant", "non_kyc", "tie_break"});
    StrategyProfile s;
    s.beta = get_num(j, "profile", "beta");
    if (!j.contains("validators") || !j.at("validators").is_array()) {
        bad("profile needs a \"validators\" array");
    }
    for (const json& v : j.at("validators")) {
        check_keys(v, "validator entry", {"alpha", "gamma"});
        ValidatorMix mix;
        mix.alpha = get_num(v, "validator entry", "alpha");
        mix.gamma = get_num_or(v, "gamma", 0.0);
        s.validators.push_back(mix);
    }
    if (j.contains("variant")) {
        if (!j.at("variant").is_string()) bad("\"variant\" must be a string");
        s.variant = variant_from(j.at("variant").get<std::string>());
    }
    if (j.contains("non_kyc")) {
        const json& nk = j.at("non_kyc");
        check_keys(nk, "non_kyc profile payload", {"V_max", "deposits"});
        NonKycProfile payload;
        payload.V_max = get_num(nk, "non_kyc", "V_max");
        if (!nk.contains("deposits") || !nk.at("deposits").is_array()) {
            bad("non_kyc payload needs a \"deposits\" array");
        }
        for (const json& d : nk.at("deposits")) {
            if (!d.is_number()) bad("deposits must be numbers");
            payload.deposits.push_back(d.get<double>());
        }
        s.non_kyc = std::move(payload);
    }
    if (j.contains("tie_break")) {
        const json& tb = j.at("tie_break");
        check_keys(tb, "tie_break profile payload", {"D"});
        s.tie_break = TieBreakProfile{get_num(tb, "tie_break", "D")};
    }
    return s;
}

SweepSpec sweep_from(const json& j) {
    check_keys(j, "sweep", {"param", "from", "to", "steps", "scale", "target", "m"});
    SweepSpec spec;
    if (!j.contains("param") || !j.at("param").is_string()) {
        bad("sweep needs a string \"param\"");
    }
    spec.param = j.at("param").get<std::string>();
    spec.from = get_num(j, "sweep", "from");
    spec.to = get_num(j, "sweep", "to");
    spec.steps = get_int(j, "sweep", "steps");
    if (j.contains("scale")) {
        if (!j.at("scale").is_string()) bad("\"scale\" must be a string");
        spec.scale = sweep_scale_from_string(j.at("scale").get<std::string>());
    }
    if (j.contains("target")) {
        if (!j.at("target").is_string()) bad("\"target\" must be a string");
        spec.target = sweep_target_from_string(j.at("target").get<std::string>());
    }
    if (j.contains("m")) spec.m = get_int(j, "sweep", "m");
    return spec;
}

}  // namespace

GameParams parse_params(const std::string& json_text) {
    return params_from(parse_text(json_text));
}

StrategyProfile parse_profile(const std::string& json_text) {
    return profile_from(parse_text(json_text));
}

Config parse_config(const std::string& json_text) {
    const json j = parse_text(json_text);
    check_keys(j, "config", {"params", "variant", "non_kyc", "tie_break", "sweep", "asym"});
    Config cfg;
    if (!j.contains("params")) bad("config is missing \"params\"");
    cfg.params = params_from(j.at("params"));
    if (j.contains("variant")) {
        if (!j.at("variant").is_string()) bad("\"variant\" must be a string");
        cfg.variant = variant_from(j.at("variant").get<std::string>());
    }
    if (j.contains("non_kyc")) {
        const json& nk = j.at("non_kyc");
        check_keys(nk, "non_kyc", {"V_min", "V_max", "V_star"});
        cfg.non_kyc = NonKycParams{get_num(nk, "non_kyc", "V_min"),
                                   get_num(nk, "non_kyc", "V_max"),
                                   get_num(nk, "non_kyc", "V_star")};
    }
    if (j.contains("tie_break")) {
        const json& tb = j.at("tie_break");
        check_keys(tb, "tie_break", {"D"});
        cfg.tie_break = TieBreakParams{get_num(tb, "tie_break", "D")};
    }
    if (j.contains("sweep")) cfg.sweep = sweep_from(j.at("sweep"));
    if (j.contains("asym")) {
        const json& a = j.at("asym");
        check_keys(a, "asym", {"m", "from", "to", "steps"});
        AsymSpec spec;
        spec.m = get_int(a, "asym", "m");
        spec.from = get_num(a, "asym", "from");
        spec.to = get_num(a, "asym", "to");
        spec.steps = get_int(a, "asym", "steps");
        cfg.asym = spec;
    }
    return cfg;
}

Config load_config(const std::string& path) { return parse_config(read_file(path)); }

StrategyProfile load_profile(const std::string& path) {
    return parse_profile(read_file(path));
}

namespace {

std::string csv_num(double x) {
    if (std::isnan(x)) return "";
    return format_sig12(x);
}

}  // namespace

std::string mne_rows_csv(const std::vector<MneRow>& rows) {
    std::string out = "m,beta,alpha,loss,feasible,R,Gamma_m\n";
    for (const auto& row : rows) {
        out += std::to_string(row.m) + ",";
        if (const auto* r = std::get_if<EquilibriumResult>(&row.result)) {
            out += csv_num(r->profile.beta) + "," + csv_num(row.dq.alpha_m) + "," +
                   csv_num(r->loss) + ",1,";
        } else {
            const auto& inf = std::get<Infeasible>(row.result);
            out += csv_num(inf.beta) + "," + csv_num(row.dq.alpha_m) + ",,0,";
        }
        out += csv_num(row.dq.R) + "," + csv_num(row.dq.Gamma_m) + "\n";
    }
    return out;
}

std::string asym_rows_csv(const std::vector<AsymSweepRow>& rows) {
    std::string out = "k,R,branch,alpha1,alpha2,beta,loss,residual_max\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k) + "," + csv_num(r.R) + "," +
               std::to_string(r.branch) + "," + csv_num(r.alpha1) + "," +
               csv_num(r.alpha2) + "," + csv_num(r.beta) + "," + csv_num(r.loss) +
               "," + csv_num(r.residual_max) + "\n";
    }
    return out;
}

std::string sweep_rows_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
    std::string out = "param,value,target,target_value,violates_assumptions\n";
    for (const auto& r : rows) {
        out += spec.param + "," + csv_num(r.value) + "," + to_string(spec.target) + ",";
        if (r.target_value) out += csv_num(*r.target_value);
        out += ",";
        out += r.violates_assumptions ? "1" : "0";
        out += "\n";
    }
    return out;
}

}  // namespace rollupgames
