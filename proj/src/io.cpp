#include "geobif/io.hpp"

#include <charconv>
#include <sstream>

namespace geobif {

std::string to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::SymmetricDispersion: return "symmetric";
        case EquilibriumKind::AsymmetricDispersion: return "asymmetric";
        case EquilibriumKind::Agglomeration: return "agglomeration";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::BreakPoint: return "break";
        case EventKind::SustainPoint: return "sustain";
        case EventKind::LimitPoint: return "limit";
        case EventKind::BranchAppears: return "branch-appears";
        case EventKind::BranchDisappears: return "branch-disappears";
    }
    return "?";
}

std::string to_string(PitchforkType t) {
    switch (t) {
        case PitchforkType::Supercritical: return "supercritical";
        case PitchforkType::Subcritical: return "subcritical";
        case PitchforkType::Degenerate: return "degenerate";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json params_json(const ModelParams& p) {
    return {{"mu", p.mu},     {"sigma", p.sigma}, {"lambda", p.lambda},
            {"gamma", p.gamma}, {"b", p.b},         {"phi", p.phi}};
}

nlohmann::json equilibrium_set_json(const EquilibriumSet& set) {
    nlohmann::json eqs = nlohmann::json::array();
    for (const auto& e : set.equilibria)
        eqs.push_back({{"z_star", e.z_star},
                       {"kind", to_string(e.kind)},
                       {"stability", to_string(e.stability)},
                       {"residual", e.residual},
                       {"derivative", e.derivative}});
    return {{"equilibria", eqs},
            {"interior_count_upper_half", set.interior_count_upper_half},
            {"warnings", set.warnings}};
}

nlohmann::json threshold_report_json(const ModelParams& params,
                                     const ThresholdReport& r) {
    nlohmann::json j;
    j["b1"] = r.existence.b1_exist;
    j["b2"] = r.existence.b2_exist;
    j["gamma_window_low"] = r.existence.gamma_lo;
    j["gamma_in_window"] = r.existence.gamma_in_window;
    j["gamma_boundary"] = r.existence.gamma_boundary;
    j["b_in_window"] = r.existence.b_in_window;
    j["b_boundary"] = r.existence.b_boundary;
    j["phi_b1"] = r.breaks.phi_b1;
    j["phi_b2"] = r.breaks.phi_b2;
    j["phi_b1_exists"] = r.breaks.b1_in_range;
    j["phi_b2_exists"] = r.breaks.b2_in_range;
    j["phi_b1_boundary"] = r.breaks.b1_boundary;
    j["phi_b2_boundary"] = r.breaks.b2_boundary;
    j["break_residual_b1"] = r.breaks.residual_b1;
    j["break_residual_b2"] = r.breaks.residual_b2;
    j["sustain_points"] = r.sustain.phi_s;
    j["phi_plus"] = r.sustain.phi_plus;
    j["sustain_at_unity_limit"] = r.sustain.sustained_at_unity_limit;
    j["b_s"] = r.b_thresholds.b_s;
    j["b_bar"] = r.b_thresholds.b_bar;
    j["break_value_at_phi"] = break_condition(params, params.phi);
    j["sustain_value_at_phi"] = sustain_condition(params, params.phi);
    auto pf = [](const std::optional<PitchforkInfo>& p) -> nlohmann::json {
        if (!p) return nullptr;
        return {{"type", to_string(p->type)},
                {"xi", p->xi},
                {"derivative_check_ok", p->derivative_check_ok}};
    };
    j["pitchfork_b1"] = pf(r.pitchfork_b1);
    j["pitchfork_b2"] = pf(r.pitchfork_b2);
    return j;
}

nlohmann::json diagram_json(const BifurcationDiagram& d,
                            const ScenarioClassification& c) {
    nlohmann::json branches = nlohmann::json::array();
    for (const auto& br : d.branches) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : br.points)
            pts.push_back({{"param", p.param},
                           {"z", p.z},
                           {"stability", to_string(p.stability)}});
        branches.push_back(
            {{"id", br.id}, {"kind", to_string(br.kind)}, {"points", pts}});
    }
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : d.events) {
        nlohmann::json je = {{"kind", to_string(e.kind)},
                             {"param", e.param},
                             {"z", e.z},
                             {"note", e.note}};
        je["criticality"] = e.criticality ? nlohmann::json(to_string(*e.criticality))
                                          : nlohmann::json(nullptr);
        events.push_back(je);
    }
    nlohmann::json regimes = nlohmann::json::array();
    for (const auto& r : d.regimes)
        regimes.push_back({{"stable_set", r.stable_set},
                           {"param_lo", r.param_lo},
                           {"param_hi", r.param_hi}});
    nlohmann::json windows = nlohmann::json::array();
    for (const auto& w : hysteresis_windows(d))
        windows.push_back({{"param_lo", w.param_lo}, {"param_hi", w.param_hi}});
    return {{"swept", d.swept == SweptParameter::Phi ? "phi" : "b"},
            {"branches", branches},
            {"events", events},
            {"regimes", regimes},
            {"hysteresis_windows", windows},
            {"classification",
             {{"label", c.label},
              {"matched", c.matched},
              {"regime_sequence", c.regime_sequence},
              {"features", c.features}}},
            {"warnings", d.warnings}};
}

nlohmann::json with_meta(const ModelParams& params, const std::string& spec_name,
                         nlohmann::json results) {
    return {{"meta",
             {{"params", params_json(params)},
              {"spec", spec_name},
              {"version", "1.0.0"}}},
            {"results", std::move(results)}};
}

std::string equilibrium_set_csv(const EquilibriumSet& set) {
    std::string out = "z_star,kind,stability,residual,derivative\n";
    for (const auto& e : set.equilibria) {
        out += format_double(e.z_star) + "," + to_string(e.kind) + "," +
               to_string(e.stability) + "," + format_double(e.residual) + "," +
               format_double(e.derivative) + "\n";
    }
    return out;
}

std::string diagram_csv(const BifurcationDiagram& d) {
    std::string out = "param_value,branch_id,kind,z_star,stable\n";
    for (const auto& br : d.branches)
        for (const auto& p : br.points)
            out += format_double(p.param) + "," + std::to_string(br.id) + "," +
                   to_string(br.kind) + "," + format_double(p.z) + "," +
                   (p.stability == Stability::Stable ? "1" : "0") + "\n";
    return out;
}

std::string plot_script(const std::string& csv_path) {
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
         "# Filled (solid) lines: stable equilibria; dashed: unstable.\n"
         "import csv, collections\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n"
         "rows = list(csv.DictReader(open('"
      << csv_path
      << "')))\n"
         "branches = collections.defaultdict(list)\n"
         "for r in rows:\n"
         "    branches[r['branch_id']].append(\n"
         "        (float(r['param_value']), float(r['z_star']), r['stable'] == '1'))\n"
         "fig, ax = plt.subplots()\n"
         "for pts in branches.values():\n"
         "    seg, style = [], None\n"
         "    for p, z, stable in pts + [(None, None, None)]:\n"
         "        st = '-' if stable else '--'\n"
         "        if style is not None and (st != style or p is None):\n"
         "            ax.plot([q[0] for q in seg], [q[1] for q in seg],\n"
         "                    style, color='k', lw=1)\n"
         "            seg = seg[-1:]\n"
         "        if p is None:\n"
         "            break\n"
         "        seg.append((p, z))\n"
         "        style = st\n"
         "ax.set_xlabel('swept parameter')\n"
         "ax.set_ylabel('z')\n"
         "fig.savefig('"
      << csv_path
      << ".png', dpi=150)\n";
    return s.str();
}

}  // namespace geobif
