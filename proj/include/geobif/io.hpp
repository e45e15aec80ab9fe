#ifndef GEOBIF_IO_HPP
#define GEOBIF_IO_HPP

#include <string>

#include "geobif/bifurcation.hpp"
#include "geobif/equilibria.hpp"
#include "geobif/thresholds.hpp"

#include "json.hpp"

namespace geobif {

std::string to_string(EquilibriumKind k);
std::string to_string(Stability s);
std::string to_string(EventKind k);
std::string to_string(PitchforkType t);

/// Shortest-round-trip decimal rendering of a double.
std::string format_double(double v);

nlohmann::json params_json(const ModelParams& params);
nlohmann::json equilibrium_set_json(const EquilibriumSet& set);
nlohmann::json threshold_report_json(const ModelParams& params,
                                     const ThresholdReport& report);
nlohmann::json diagram_json(const BifurcationDiagram& diagram,
                            const ScenarioClassification& classification);

/// Wraps `results` with a `meta` block (params, spec name, version).
nlohmann::json with_meta(const ModelParams& params, const std::string& spec_name,
                         nlohmann::json results);

std::string equilibrium_set_csv(const EquilibriumSet& set);

/// Columns: param_value, branch_id, kind, z_star, stable(0/1).
std::string diagram_csv(const BifurcationDiagram& diagram);

/// Python script reproducing the filled-stable / dashed-unstable plotting
/// convention from a diagram CSV.
std::string plot_script(const std::string& csv_path);

}  // namespace geobif

#endif
