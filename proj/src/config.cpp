#include "fgs/config.hpp"

#include <fstream>
#include <sstream>

namespace fgs {

NonlinearitySpec nonlinearity_from_json(const ojson& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "pure_power") return make_pure_power(doc.at("r").get<double>());
    if (kind == "power_sum") {
        std::vector<double> powers = doc.at("powers").get<std::vector<double>>();
        std::vector<double> coeffs =
            doc.contains("coeffs") ? doc.at("coeffs").get<std::vector<double>>()
                                   : std::vector<double>(powers.size(), 1.0);
        return make_power_sum(powers, coeffs);
    }
    if (kind == "rational_example")
        return make_rational_example(doc.at("q").get<double>(),
                                     doc.at("r").get<double>());
    throw std::invalid_argument("nonlinearity: unknown kind '" + kind + "'");
}

RunConfig parse_config(const std::string& json_text) {
    ojson doc;
    try {
        doc = ojson::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    cfg.schema_version = doc.at("schema_version").get<int>();
    if (cfg.schema_version != 1)
        throw std::invalid_argument("config: unsupported schema_version");

    const auto& prob = doc.at("problem");
    cfg.N = prob.at("N").get<int>();
    cfg.s = prob.at("s").get<double>();
    if (!(cfg.s > 0 && cfg.s < 1))
        throw std::invalid_argument("config: s must lie in (0,1)");
    cfg.lambda = prob.value("lambda", 1.0);
    if (!(cfg.lambda > 0)) throw std::invalid_argument("config: lambda > 0");
    cfg.lambda_max = prob.value("lambda_max", 0.0);
    if (prob.contains("mu_targets"))
        cfg.mu_targets = prob.at("mu_targets").get<std::vector<double>>();
    cfg.nonlinearity_json = prob.at("nonlinearity");
    cfg.nonlinearity = nonlinearity_from_json(cfg.nonlinearity_json);

    const auto& disc = doc.at("discretization");
    cfg.L = disc.at("L").get<double>();
    cfg.n = disc.at("n").get<int>();
    cfg.R = disc.value("R", 0.0);
    cfg.m = disc.value("m", 400);
    cfg.l_max = disc.value("l_max", 4);
    make_grid(cfg.N, cfg.L, cfg.n); // validates

    if (doc.contains("solver")) {
        const auto& sol = doc.at("solver");
        cfg.solver.picard_max = sol.value("picard_max", cfg.solver.picard_max);
        cfg.solver.picard_tol = sol.value("picard_tol", cfg.solver.picard_tol);
        cfg.solver.newton_max = sol.value("newton_max", cfg.solver.newton_max);
        cfg.solver.newton_tol = sol.value("newton_tol", cfg.solver.newton_tol);
        cfg.solver.minres_max = sol.value("minres_max", cfg.solver.minres_max);
        cfg.solver.seed = sol.value("seed", cfg.solver.seed);
        cfg.solver.init_width = sol.value("init_width", cfg.solver.init_width);
        cfg.trial_count = sol.value("trial_count", cfg.trial_count);
        if (cfg.solver.picard_tol <= 0 || cfg.solver.newton_tol <= 0)
            throw std::invalid_argument("config: tolerances must be positive");
    }
    if (doc.contains("output")) {
        const auto& out = doc.at("output");
        cfg.output_dir = out.value("directory", cfg.output_dir);
        if (out.contains("formats"))
            cfg.formats = out.at("formats").get<std::vector<std::string>>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace fgs
