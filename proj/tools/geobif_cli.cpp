#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "geobif/bifurcation.hpp"
#include "geobif/equilibria.hpp"
#include "geobif/errors.hpp"
#include "geobif/io.hpp"
#include "geobif/thresholds.hpp"
#include "geobif/validate.hpp"

namespace {

struct CommonOpts {
    double mu = 1.0, sigma = 5.0, lambda = 1.0, gamma = 1.0, b = 0.5, phi = 0.5;
    std::string spec = "additive";
    std::string format = "json";
    std::string out_path;
    std::string config_path;
    int precision = 12;
    std::map<std::string, CLI::Option*> opts;  // for config-file precedence
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_phi = true) {
    o.opts["mu"] = cmd->add_option("--mu", o.mu, "utility weight on manufactures (> 0)");
    o.opts["sigma"] =
        cmd->add_option("--sigma", o.sigma, "elasticity of substitution (> 1)");
    o.opts["lambda"] =
        cmd->add_option("--lambda", o.lambda, "mass of immobile workers (> 0)");
    o.opts["gamma"] =
        cmd->add_option("--gamma", o.gamma, "innovation efficiency (> 0)");
    o.opts["b"] = cmd->add_option("--b", o.b, "related-variety weight, in (0,1)");
    if (needs_phi)
        o.opts["phi"] = cmd->add_option("--phi", o.phi, "freeness of trade, in (0,1)");
    o.opts["spec"] =
        cmd->add_option("--spec", o.spec, "innovation spec: additive|cobb-douglas")
            ->check(CLI::IsMember({"additive", "cobb-douglas"}));
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "write output to this path instead of stdout");
    cmd->add_option("--precision", o.precision, "significant digits in summaries");
    cmd->add_option("--config", o.config_path,
                    "JSON fixture file; explicit flags take precedence");
}

/// Values from a fixture file fill in whatever the command line left at its
/// default.
void apply_config(CommonOpts& o, CLI::Option* swept_opt, std::string& swept,
                  CLI::Option* range_opt, std::pair<double, double>& range,
                  CLI::Option* sweep_grid_opt, int& sweep_grid) {
    if (o.config_path.empty()) return;
    std::ifstream f(o.config_path);
    if (!f) throw std::invalid_argument("cannot read config file: " + o.config_path);
    nlohmann::json j = nlohmann::json::parse(f);
    auto unset = [&](const char* key) {
        auto it = o.opts.find(key);
        return it == o.opts.end() || it->second->count() == 0;
    };
    if (j.contains("params")) {
        const auto& p = j["params"];
        if (p.contains("mu") && unset("mu")) o.mu = p["mu"];
        if (p.contains("sigma") && unset("sigma")) o.sigma = p["sigma"];
        if (p.contains("lambda") && unset("lambda")) o.lambda = p["lambda"];
        if (p.contains("gamma") && unset("gamma")) o.gamma = p["gamma"];
        if (p.contains("b") && unset("b")) o.b = p["b"];
        if (p.contains("phi") && unset("phi")) o.phi = p["phi"];
    }
    if (j.contains("spec") && unset("spec")) o.spec = j["spec"];
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (s.contains("param") && swept_opt && swept_opt->count() == 0)
            swept = s["param"];
        if (s.contains("range") && range_opt && range_opt->count() == 0)
            range = {s["range"][0], s["range"][1]};
        if (s.contains("grid") && sweep_grid_opt && sweep_grid_opt->count() == 0)
            sweep_grid = s["grid"];
    }
}

geobif::ModelParams make_params(const CommonOpts& o) {
    return geobif::ModelParams(o.sigma, o.lambda, o.gamma, o.b, o.phi, o.mu);
}

geobif::InnovationSpec make_spec(const CommonOpts& o) {
    return o.spec == "cobb-douglas" ? geobif::InnovationSpec::cobb_douglas()
                                    : geobif::InnovationSpec::additive();
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
    } else {
        std::ofstream f(o.out_path);
        if (!f) throw std::runtime_error("cannot open output path: " + o.out_path);
        f << text;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Equilibrium and bifurcation analysis of a two-region "
                 "innovation-driven economic geography model"};
    app.require_subcommand(1);

    CommonOpts o;
    int eq_grid = 2000;
    int sweep_grid = 400;
    std::string swept = "phi";
    std::pair<double, double> range{1e-4, 1.0 - 1e-4};
    double z_arg = 0.7;
    std::uint64_t seed = 42;
    bool corrupt_quartic = false;
    std::string plot_path;

    auto* c_eq = app.add_subcommand("equilibria", "enumerate equilibria at a point");
    add_common(c_eq, o);
    c_eq->add_option("--grid", eq_grid, "scan grid on [1/2,1]")
        ->check(CLI::Range(100, 10'000'000));

    auto* c_th = app.add_subcommand("thresholds", "closed-form critical values");
    add_common(c_th, o);

    auto* c_sw = app.add_subcommand("sweep", "bifurcation diagram over phi or b");
    add_common(c_sw, o);
    CLI::Option* sw_param = c_sw->add_option("--param", swept, "swept parameter")
                                ->check(CLI::IsMember({"phi", "b"}));
    CLI::Option* sw_range =
        c_sw->add_option("--range", range, "sweep range (two values in (0,1))");
    CLI::Option* sw_grid = c_sw->add_option("--sweep-grid", sweep_grid,
                                            "sweep grid size")
                               ->check(CLI::Range(50, 100000));
    c_sw->add_option("--grid", eq_grid, "equilibrium scan grid")
        ->check(CLI::Range(100, 10'000'000));
    c_sw->add_option("--plot-script", plot_path,
                     "also write a python plot script to this path");

    auto* c_cl = app.add_subcommand("classify", "sweep and report the scenario label");
    add_common(c_cl, o);
    CLI::Option* cl_param =
        c_cl->add_option("--param", swept)->check(CLI::IsMember({"phi", "b"}));
    CLI::Option* cl_range = c_cl->add_option("--range", range);
    CLI::Option* cl_grid =
        c_cl->add_option("--sweep-grid", sweep_grid)->check(CLI::Range(50, 100000));
    c_cl->add_option("--grid", eq_grid)->check(CLI::Range(100, 10'000'000));

    auto* c_ls = app.add_subcommand("lambda-star", "inverse equilibrium curve at z");
    add_common(c_ls, o);
    c_ls->add_option("--z", z_arg, "interior location, in (1/2,1)");

    auto* c_va = app.add_subcommand("validate", "cross-validation invariant suite");
    add_common(c_va, o);
    c_va->add_option("--seed", seed, "seed for random perturbations");
    c_va->add_flag("--corrupt-quartic", corrupt_quartic,
                   "negative-control hook: corrupt the closed-form derivative");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (c_sw->parsed())
            apply_config(o, sw_param, swept, sw_range, range, sw_grid, sweep_grid);
        else if (c_cl->parsed())
            apply_config(o, cl_param, swept, cl_range, range, cl_grid, sweep_grid);
        else
            apply_config(o, nullptr, swept, nullptr, range, nullptr, sweep_grid);

        geobif::InnovationSpec spec = make_spec(o);
        geobif::ModelParams params = make_params(o);

        if (c_eq->parsed()) {
            auto set = geobif::find_equilibria(spec, params, eq_grid);
            if (o.format == "csv")
                emit(o, geobif::equilibrium_set_csv(set));
            else
                emit(o, geobif::with_meta(params, spec.name(),
                                          geobif::equilibrium_set_json(set))
                            .dump(2));
        } else if (c_th->parsed()) {
            auto report = geobif::threshold_report(params);
            auto j = geobif::threshold_report_json(params, report);
            if (o.format == "csv") {
                std::string text = "key,value\n";
                for (auto& [k, v] : j.items()) text += k + "," + v.dump() + "\n";
                emit(o, text);
            } else {
                emit(o, geobif::with_meta(params, spec.name(), j).dump(2));
            }
        } else if (c_sw->parsed() || c_cl->parsed()) {
            auto sp = swept == "phi" ? geobif::SweptParameter::Phi
                                     : geobif::SweptParameter::B;
            auto diagram = geobif::sweep(spec, params, sp, range.first, range.second,
                                         sweep_grid, eq_grid);
            auto cls = geobif::classify_scenario(diagram);
            if (c_cl->parsed()) {
                std::string text = cls.label + "\n";
                for (const auto& r : cls.regime_sequence) text += "  regime: " + r + "\n";
                for (const auto& f : cls.features) text += "  feature: " + f + "\n";
                emit(o, text);
            } else if (o.format == "csv") {
                emit(o, geobif::diagram_csv(diagram));
            } else {
                emit(o, geobif::with_meta(params, spec.name(),
                                          geobif::diagram_json(diagram, cls))
                            .dump(2));
            }
            if (!plot_path.empty()) {
                std::ofstream f(plot_path);
                f << geobif::plot_script(o.out_path.empty() ? "diagram.csv"
                                                            : o.out_path);
            }
        } else if (c_ls->parsed()) {
            auto ls = geobif::lambda_star(params, z_arg);
            auto th = geobif::lambda_star_thresholds(params, z_arg);
            nlohmann::json j = {{"z", z_arg},
                                {"lambda_star", ls.value},
                                {"admissible", ls.admissible},
                                {"b_hat", th.b_hat},
                                {"b_underline", th.b_under},
                                {"b_tilde", th.b_tilde},
                                {"gamma_c", th.gamma_c}};
            if (o.format == "csv") {
                std::string text = "key,value\n";
                for (auto& [k, v] : j.items()) text += k + "," + v.dump() + "\n";
                emit(o, text);
            } else {
                emit(o, geobif::with_meta(params, spec.name(), j).dump(2));
            }
        } else if (c_va->parsed()) {
            geobif::ValidationOptions vo;
            vo.seed = seed;
            vo.corrupt_quartic = corrupt_quartic;
            auto results = geobif::run_validation(spec, params, vo);
            bool all_ok = true;
            std::string text;
            for (const auto& r : results) {
                text += std::string(r.passed ? "PASS" : "FAIL") + " " + r.name;
                if (!r.detail.empty()) text += " (" + r.detail + ")";
                text += "\n";
                if (!r.passed) all_ok = false;
            }
            text += all_ok ? "all invariants hold\n" : "invariant failure\n";
            emit(o, text);
            if (!all_ok) return 1;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
