#include "bandit/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bandit/io.hpp"

namespace bandit {

using nlohmann::json;

namespace {

std::vector<double> parse_csv_doubles(const std::string& body, const std::string& what) {
    std::vector<double> vals;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ParseError("bad number \"" + tok + "\" in " + what);
        }
    }
    if (vals.empty()) throw ParseError("no values in " + what);
    return vals;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

FiniteDist dist_from_json(const json& j, const std::string& where,
                          std::vector<std::string>& issues) {
    if (!j.is_object() || !j.contains("support") || !j.contains("weights")) {
        issues.push_back(where + ": expected {\"support\": [...], \"weights\": [...]}");
        return FiniteDist::point_mass(0.0);
    }
    try {
        std::vector<double> sup = j.at("support").get<std::vector<double>>();
        std::vector<double> w = j.at("weights").get<std::vector<double>>();
        return FiniteDist(std::move(sup), std::move(w));
    } catch (const ValidationError& e) {
        for (const auto& s : e.issues()) issues.push_back(where + ": " + s);
    } catch (const std::exception& e) {
        issues.push_back(where + ": " + e.what());
    }
    return FiniteDist::point_mass(0.0);
}

ModelClass class_from_json(const json& j, std::vector<std::string>& issues) {
    const ModelClass fallback = BoundedSupport(0.0, 1.0);
    if (!j.is_object() || !j.contains("type")) {
        issues.push_back("instance.class: expected an object with a \"type\" field");
        return fallback;
    }
    const std::string type = j.value("type", "");
    try {
        if (type == "finite_alphabet")
            return FiniteAlphabet(j.at("points").get<std::vector<double>>());
        if (type == "bounded_support")
            return BoundedSupport(j.at("a").get<double>(), j.at("b").get<double>());
        if (type == "moment_bounded")
            return MomentBounded(j.at("bound").get<double>(), j.at("epsilon").get<double>());
        issues.push_back("instance.class.type: unknown type \"" + type + "\"");
    } catch (const ValidationError& e) {
        for (const auto& s : e.issues()) issues.push_back("instance.class: " + s);
    } catch (const std::exception& e) {
        issues.push_back("instance.class: " + std::string(e.what()));
    }
    return fallback;
}

json class_to_json(const ModelClass& cls) {
    return std::visit(
        [](const auto& c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, FiniteAlphabet>) {
                return {{"type", "finite_alphabet"}, {"points", c.points}};
            } else if constexpr (std::is_same_v<T, BoundedSupport>) {
                return {{"type", "bounded_support"}, {"a", c.a}, {"b", c.b}};
            } else {
                return {{"type", "moment_bounded"}, {"bound", c.bound}, {"epsilon", c.epsilon}};
            }
        },
        cls);
}

void reject_unknown_keys(const json& j, const std::set<std::string>& known,
                         const std::string& scope, std::vector<std::string>& issues) {
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            issues.push_back(scope + ": unknown field \"" + key + "\"");
}

}  // namespace

ModelClass parse_class_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParseError("class spec must look like finite:..., bounded:..., or moment:...");
    const std::string kind = spec.substr(0, colon);
    const std::string body = spec.substr(colon + 1);
    if (kind == "finite") return FiniteAlphabet(parse_csv_doubles(body, "finite alphabet spec"));
    if (kind == "bounded") {
        auto v = parse_csv_doubles(body, "bounded support spec");
        if (v.size() != 2) throw ParseError("bounded spec needs exactly a,b");
        return BoundedSupport(v[0], v[1]);
    }
    if (kind == "moment") {
        double b = 0.0, eps = 0.0;
        if (std::sscanf(body.c_str(), "B=%lf,eps=%lf", &b, &eps) != 2)
            throw ParseError("moment spec must look like moment:B=<v>,eps=<v>");
        return MomentBounded(b, eps);
    }
    throw ParseError("unknown class kind \"" + kind + "\"");
}

FiniteDist parse_dist_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid distribution JSON: ") + e.what());
    }
    std::vector<std::string> issues;
    FiniteDist d = dist_from_json(j, "distribution", issues);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return d;
}

FiniteDist load_dist_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dist_json(ss.str());
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid config JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("config must be a JSON object");

    std::vector<std::string> issues;
    reject_unknown_keys(j,
                        {"instance", "schedule", "horizon", "replications", "base_seed",
                         "gamma", "grid_points", "min_exceedances", "arms_to_analyze",
                         "workers", "output_dir", "trajectories", "assumptions"},
                        "config", issues);

    ExperimentConfig cfg;

    // instance
    std::vector<FiniteDist> arms;
    ModelClass cls = BoundedSupport(0.0, 1.0);
    if (!j.contains("instance") || !j["instance"].is_object()) {
        issues.push_back("instance: required object is missing");
    } else {
        const json& ji = j["instance"];
        reject_unknown_keys(ji, {"arms", "class"}, "instance", issues);
        if (!ji.contains("class"))
            issues.push_back("instance.class: required field is missing");
        else
            cls = class_from_json(ji["class"], issues);
        if (!ji.contains("arms") || !ji["arms"].is_array() || ji["arms"].size() < 2) {
            issues.push_back("instance.arms: need an array of at least 2 arms");
        } else {
            std::size_t a = 0;
            for (const auto& ja : ji["arms"]) {
                arms.push_back(
                    dist_from_json(ja, "instance.arms[" + std::to_string(a) + "]", issues));
                ++a;
            }
        }
    }
    if (issues.empty()) {
        try {
            cfg.instance_.emplace(std::move(arms), cls);
        } catch (const ValidationError& e) {
            for (const auto& s : e.issues()) issues.push_back("instance: " + s);
        }
    }

    // schedule
    if (!j.contains("schedule") || !j["schedule"].is_string()) {
        issues.push_back("schedule: required string is missing");
    } else {
        try {
            cfg.schedule_ = parse_schedule(j["schedule"].get<std::string>());
        } catch (const std::exception& e) {
            issues.push_back(std::string("schedule: ") + e.what());
        }
    }

    auto require_uint = [&](const char* key, std::uint64_t& out) {
        if (!j.contains(key) || !j[key].is_number_unsigned())
            issues.push_back(std::string(key) + ": required nonnegative integer is missing");
        else
            out = j[key].get<std::uint64_t>();
    };
    require_uint("horizon", cfg.horizon_);
    require_uint("replications", cfg.replications_);
    require_uint("base_seed", cfg.base_seed_);

    cfg.gamma_ = j.value("gamma", 0.5);
    if (!(cfg.gamma_ > 0.0 && cfg.gamma_ < 1.0))
        issues.push_back("gamma: must lie in the open interval (0,1)");
    cfg.grid_points_ = j.value("grid_points", std::size_t{40});
    if (cfg.grid_points_ < 10) issues.push_back("grid_points: need at least 10");
    cfg.min_exceedances_ = j.value("min_exceedances", std::uint64_t{50});
    cfg.workers_ = j.value("workers", 0u);
    cfg.output_dir_ = j.value("output_dir", std::string("out"));
    cfg.trajectories_ = j.value("trajectories", false);

    if (cfg.instance_ && cfg.horizon_ > 0 && cfg.horizon_ < cfg.instance_->num_arms())
        issues.push_back("horizon: must be at least the number of arms");
    if (j.contains("replications") && cfg.replications_ < 1)
        issues.push_back("replications: must be >= 1");

    // arm ranks to analyze; default = every suboptimal rank
    if (j.contains("arms_to_analyze")) {
        if (!j["arms_to_analyze"].is_array())
            issues.push_back("arms_to_analyze: must be an array of arm ranks");
        else
            for (const auto& v : j["arms_to_analyze"]) {
                if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 2)
                    issues.push_back("arms_to_analyze: ranks must be integers >= 2");
                else
                    cfg.arms_.push_back(v.get<std::size_t>());
            }
    } else if (cfg.instance_) {
        for (std::size_t r = 2; r <= cfg.instance_->num_arms(); ++r) cfg.arms_.push_back(r);
    }
    if (cfg.instance_)
        for (std::size_t r : cfg.arms_)
            if (r > cfg.instance_->num_arms())
                issues.push_back("arms_to_analyze: rank " + std::to_string(r) +
                                 " exceeds the number of arms");

    // assumptions block
    if (std::holds_alternative<MomentBounded>(cls)) {
        cfg.assumptions_.g_c1 = 2.0;  // canonical g for the moment class
        cfg.assumptions_.g_c2 = 1.0;
    }
    if (j.contains("assumptions")) {
        const json& ja = j["assumptions"];
        if (!ja.is_object()) {
            issues.push_back("assumptions: must be an object");
        } else {
            reject_unknown_keys(ja,
                                {"dist", "which", "g_c1", "g_c2", "n_max", "paths", "x_grid",
                                 "delta", "n_grid", "d_grid"},
                                "assumptions", issues);
            auto& ap = cfg.assumptions_;
            if (ja.contains("dist")) {
                std::vector<std::string> dist_issues;
                FiniteDist d = dist_from_json(ja["dist"], "assumptions.dist", dist_issues);
                if (dist_issues.empty())
                    ap.dist = std::move(d);
                else
                    issues.insert(issues.end(), dist_issues.begin(), dist_issues.end());
            }
            ap.which = ja.value("which", std::string("both"));
            if (ap.which != "1" && ap.which != "2" && ap.which != "both")
                issues.push_back("assumptions.which: must be \"1\", \"2\" or \"both\"");
            ap.g_c1 = ja.value("g_c1", ap.g_c1);
            ap.g_c2 = ja.value("g_c2", ap.g_c2);
            ap.n_max = ja.value("n_max", ap.n_max);
            ap.paths = ja.value("paths", ap.paths);
            if (ja.contains("x_grid")) ap.x_grid = ja["x_grid"].get<std::vector<double>>();
            ap.delta = ja.value("delta", ap.delta);
            if (ja.contains("n_grid"))
                ap.n_grid = ja["n_grid"].get<std::vector<std::uint64_t>>();
            if (ja.contains("d_grid")) ap.d_grid = ja["d_grid"].get<std::vector<double>>();
        }
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));

    // canonical effective config -> provenance hash
    json eff;
    eff["instance"]["class"] = class_to_json(cfg.instance_->model_class());
    for (const auto& arm : cfg.instance_->arms())
        eff["instance"]["arms"].push_back(
            {{"support", arm.support()}, {"weights", arm.weights()}});
    eff["schedule"] = describe(cfg.schedule_);
    eff["horizon"] = cfg.horizon_;
    eff["replications"] = cfg.replications_;
    eff["base_seed"] = cfg.base_seed_;
    eff["gamma"] = cfg.gamma_;
    eff["grid_points"] = cfg.grid_points_;
    eff["min_exceedances"] = cfg.min_exceedances_;
    eff["arms_to_analyze"] = cfg.arms_;
    eff["trajectories"] = cfg.trajectories_;
    // workers and output_dir deliberately excluded: they do not affect results
    cfg.hash_ = io::fnv1a_hex(eff.dump());
    return cfg;
}

}  // namespace bandit
