#ifndef GEOBIF_BIFURCATION_HPP
#define GEOBIF_BIFURCATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "geobif/equilibria.hpp"
#include "geobif/thresholds.hpp"

namespace geobif {

enum class SweptParameter { Phi, B };

struct BranchPoint {
    double param;
    double z;
    Stability stability;
};

struct Branch {
    int id;
    EquilibriumKind kind;
    std::vector<BranchPoint> points;  // ordered by param
};

enum class EventKind { BreakPoint, SustainPoint, LimitPoint, BranchAppears, BranchDisappears };

struct Event {
    EventKind kind;
    double param;
    double z;  // NaN when not tied to a location
    std::optional<PitchforkType> criticality;
    std::string note;
};

/// Maximal parameter interval over which the set of stable equilibrium kinds
/// (up to mirror symmetry) is constant.  stable_set is "none" or a
/// '+'-joined sorted subset of {agg, asym, sym}.
struct RegimeSegment {
    std::string stable_set;
    double param_lo;
    double param_hi;
};

struct BifurcationDiagram {
    SweptParameter swept;
    ModelParams base;
    GKind spec_kind;
    std::vector<double> grid;  // refined, strictly increasing
    std::vector<Branch> branches;
    std::vector<Event> events;
    std::vector<RegimeSegment> regimes;
    std::vector<std::string> warnings;
};

/// Sweeps phi or b over [lo,hi] (clamped to [1e-4, 1-1e-4]): enumerates
/// equilibria at every grid value, refines the grid where the stable-regime
/// signature changes, links equilibria into branches by nearest-z matching
/// within kind, attaches analytic break/sustain events, and polishes fold
/// seeds into limit points with a damped two-dimensional Newton iteration
/// on {delta_v = 0, delta_v' = 0}.
BifurcationDiagram sweep(const InnovationSpec& spec, const ModelParams& base,
                         SweptParameter swept, double lo, double hi,
                         int n_grid = 400, int eq_grid = 2000);

struct ScenarioClassification {
    std::string label;
    bool matched;  // false -> label carries the raw regime sequence
    std::vector<std::string> regime_sequence;
    std::vector<std::string> features;
};

/// Rule-based match of the diagram's stable-regime sequence against the
/// catalogue of transition scenarios.
ScenarioClassification classify_scenario(const BifurcationDiagram& diagram);

struct HysteresisWindow {
    double param_lo;
    double param_hi;
};

/// Maximal swept-parameter intervals on which at least two distinct stable
/// equilibria (up to mirror symmetry) coexist.
std::vector<HysteresisWindow> hysteresis_windows(const BifurcationDiagram& diagram);

}  // namespace geobif

#endif
