#ifndef GEOBIF_INNOVATION_HPP
#define GEOBIF_INNOVATION_HPP

#include <functional>
#include <optional>
#include <string>

#include "geobif/params.hpp"

namespace geobif {

enum class GKind { Additive, CobbDouglas, Custom };

/// Regional-interaction function g(z) governing the chance of a successful
/// innovation.  Region 1 sees g(z), region 2 sees g(1-z).
///
/// Additive:     g(z) = b z + (1-b)(1-z)
/// CobbDouglas:  g(z) = z^b (1-z)^(1-b)
/// Custom:       user-supplied C^3 map [0,1] -> [0,1], monotone on [1/2,1]
///               in the direction dictated by its related-variety weight.
class InnovationSpec {
public:
    static InnovationSpec additive() { return InnovationSpec(GKind::Additive); }
    static InnovationSpec cobb_douglas() { return InnovationSpec(GKind::CobbDouglas); }

    /// Custom g built for related-variety weight b.  The optional analytic
    /// derivative is used where available; otherwise central differences.
    /// Monotonicity on [1/2,1] and range [0,1] are checked by sampling.
    static InnovationSpec custom(double b, std::function<double(double)> g,
                                 std::function<double(double)> g_prime = nullptr);

    GKind kind() const { return kind_; }

    /// g evaluated for region 1; region 2 uses g(params, 1-z).
    double g(const ModelParams& params, double z) const;

    /// dg/dz for region 1 (analytic for the built-in kinds).
    double g_prime(const ModelParams& params, double z) const;

    /// True when the innovation weight of the fully agglomerated region
    /// vanishes (g(1) = 0), in which case no innovation occurs at a corner.
    bool corner_weight_vanishes(const ModelParams& params) const;

    std::string name() const;

private:
    explicit InnovationSpec(GKind kind) : kind_(kind) {}

    GKind kind_;
    double custom_b_ = 0.5;
    std::function<double(double)> custom_g_;
    std::function<double(double)> custom_g_prime_;
};

}  // namespace geobif

#endif
