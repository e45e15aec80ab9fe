#ifndef GEOBIF_EQUILIBRIA_HPP
#define GEOBIF_EQUILIBRIA_HPP

#include <string>
#include <vector>

#include "geobif/model.hpp"

namespace geobif {

enum class EquilibriumKind { SymmetricDispersion, AsymmetricDispersion, Agglomeration };
enum class Stability { Stable, Unstable, Marginal };

struct Equilibrium {
    double z_star;
    EquilibriumKind kind;
    Stability stability;
    double residual;    // |delta_v(z_star)|
    double derivative;  // delta_v'(z_star), interior equilibria only
};

struct EquilibriumSet {
    ModelParams params;
    GKind spec_kind;
    std::vector<Equilibrium> equilibria;  // sorted by z_star, mirrored pairs included
    int interior_count_upper_half = 0;    // asymmetric equilibria in (1/2, 1)
    std::vector<std::string> warnings;
};

/// Tolerance of the Marginal stability band on the deciding quantity.
inline constexpr double kStabilityTol = 1e-9;

/// Enumerates all long-run equilibria on [0,1]: scans delta_v on a uniform
/// grid over [1/2,1], brackets sign changes, refines by bisection/secant,
/// checks the corners, and mirrors to [0,1/2).
EquilibriumSet find_equilibria(const InnovationSpec& spec, const ModelParams& params,
                               int grid_n = 2000);

struct LambdaStar {
    double value;
    bool admissible;  // value > 0
};

/// Inverse equilibrium curve: the immobile-worker mass that makes z an
/// interior equilibrium.  lambda field of params is ignored.
LambdaStar lambda_star(const ModelParams& params, double z);

/// Stability criterion script-G for an asymmetric equilibrium, evaluated
/// along lambda = lambda_star(z).  Negative means stable.
double asym_stability_condition(const ModelParams& params, double z);

/// Verdict for an asymmetric equilibrium at z in (1/2,1) with lambda set to
/// lambda_star(z).  Throws InvalidEquilibriumError when lambda_star(z) <= 0.
Stability asymmetric_stability(const ModelParams& params, double z);

}  // namespace geobif

#endif
