#ifndef FGS_CONFIG_HPP
#define FGS_CONFIG_HPP

#include "fgs/ground_state.hpp"
#include "fgs/report.hpp"

namespace fgs {

/// One JSON document drives a run; the CLI only selects the command.
struct RunConfig {
    int schema_version = 1;
    // problem
    int N = 1;
    double s = 0.5;
    double lambda = 1.0;
    double lambda_max = 0;              // > lambda enables a lambda-branch
    std::vector<double> mu_targets;     // enables the rescaled branch
    NonlinearitySpec nonlinearity;
    ojson nonlinearity_json;            // round-trip copy for reports
    // discretization
    double L = 100;
    int n = 1024;
    double R = 0;                       // radial mesh radius; 0 = L
    int m = 400;
    int l_max = 4;
    // solver
    SolverOptions solver;
    int trial_count = 8;
    // output
    std::string output_dir = "out";
    std::vector<std::string> formats = {"json", "csv", "svg"};
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
NonlinearitySpec nonlinearity_from_json(const ojson& doc);

} // namespace fgs

#endif
