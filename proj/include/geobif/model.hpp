#ifndef GEOBIF_MODEL_HPP
#define GEOBIF_MODEL_HPP

#include <array>

#include "geobif/innovation.hpp"
#include "geobif/params.hpp"

namespace geobif {

enum class DerivMethod { Analytic, FiniteDifference };

/// Innovation weight g_i(z) for the given region (1 or 2).
double innovation_weight(const InnovationSpec& spec, const ModelParams& params,
                         double z, int region);

struct InnovationProbability {
    double value;  // min{ g_i(z) gamma A / a, 1 }
    bool capped;   // true when the uncapped value exceeds 1
};

/// Diagnostic: the raw innovation probability including the unit cap.  The
/// equilibrium analysis uses the uncapped form throughout; this reports when
/// a given parametrization would make the cap bind.
InnovationProbability innovation_probability(const InnovationSpec& spec,
                                             const ModelParams& params, double z,
                                             int region,
                                             const DiagnosticConstants& diag);

/// Scientist wage in the given region under the zero-expected-profit
/// condition of the R&D sector.
double wage(const InnovationSpec& spec, const ModelParams& params, double z,
            int region);

/// Indirect-utility differential v1(z) - v2(z).  At a corner where the
/// agglomerated region's innovation weight vanishes, no variety is produced
/// anywhere and the differential reduces to mu ln(phi)/(sigma-1).
double delta_v(const InnovationSpec& spec, const ModelParams& params, double z);

/// d(delta_v)/dz.  The analytic route evaluates the closed-form quartic and
/// is available for the additive spec only.
double delta_v_prime(const InnovationSpec& spec, const ModelParams& params,
                     double z, DerivMethod method = DerivMethod::FiniteDifference);

/// Coefficient blocks a1..a5 of the numerator quartic
///   P(z) = a1 z^4 + a2 z^3 - 2(1-phi) a3 z^2 + 2(1-phi) a4 z + a5,
/// so that d(delta_v)/dz = mu P(z) / (2 sigma (sigma-1) D(z)) with
/// D(z) = [z(phi-1)+1]^2 [z(1-phi)+phi]^2.  Additive spec.
std::array<double, 5> quartic_coefficients(const ModelParams& params);

/// P(z) assembled from quartic_coefficients.
double quartic_eval(const ModelParams& params, double z);

/// Closed-form d(delta_v)/db for the additive spec.
double d_delta_v_db(const ModelParams& params, double z);

}  // namespace geobif

#endif
