#include "geobif/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geobif/errors.hpp"

namespace geobif {

namespace {

void check_region(int region) {
    if (region != 1 && region != 2) throw std::invalid_argument("region must be 1 or 2");
}

}  // namespace

double innovation_weight(const InnovationSpec& spec, const ModelParams& params,
                         double z, int region) {
    check_region(region);
    return region == 1 ? spec.g(params, z) : spec.g(params, 1.0 - z);
}

InnovationProbability innovation_probability(const InnovationSpec& spec,
                                             const ModelParams& params, double z,
                                             int region,
                                             const DiagnosticConstants& diag) {
    diag.validate(params);
    double raw = innovation_weight(spec, params, z, region) * params.gamma * diag.A / diag.a;
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

double wage(const InnovationSpec& spec, const ModelParams& params, double z,
            int region) {
    check_region(region);
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("z must lie in [0,1]");
    double zi = (region == 1) ? z : 1.0 - z;
    double zj = 1.0 - zi;
    double phi = params.phi;
    double bracket = (params.lambda / 2.0 + zi) / (zi + phi * zj) +
                     phi * (params.lambda / 2.0 + zj) / (phi * zi + zj);
    return params.mu * params.gamma / params.sigma *
           innovation_weight(spec, params, z, region) * bracket;
}

double delta_v(const InnovationSpec& spec, const ModelParams& params, double z) {
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("z must lie in [0,1]");
    double phi = params.phi;
    if (spec.corner_weight_vanishes(params)) {
        // No innovation occurs under full agglomeration, so no variety is
        // produced in the core and the corner differential degenerates.
        if (z >= 1.0) return params.mu * std::log(phi) / (params.sigma - 1.0);
        if (z <= 0.0) return -params.mu * std::log(phi) / (params.sigma - 1.0);
    }
    double w1 = wage(spec, params, z, 1);
    double w2 = wage(spec, params, z, 2);
    double log_term = std::log((z + phi * (1.0 - z)) / ((1.0 - z) + phi * z));
    return w1 - w2 + params.mu / (params.sigma - 1.0) * log_term;
}

std::array<double, 5> quartic_coefficients(const ModelParams& params) {
    double b = params.b, phi = params.phi, lam = params.lambda;
    double gs = params.gamma * (params.sigma - 1.0);
    double pm1 = phi - 1.0, pp1 = phi + 1.0;
    double pm1_3 = pm1 * pm1 * pm1;

    double a1 = 4.0 * (1.0 - 2.0 * b) * gs * pm1_3 * pp1;
    double a2 = 8.0 * (2.0 * b - 1.0) * gs * pm1_3 * pp1;
    double a3 = gs * (b * pp1 * ((lam - 2.0) * phi * phi - lam + 18.0 * phi - 4.0) -
                      phi * (lam * pm1 * phi + lam + 6.0 * phi) + lam - 8.0 * phi + 2.0) +
                params.sigma * pp1 * pm1 * pm1;
    double a4 = gs * (lam * pm1 * (b * pp1 * pp1 - phi * phi - 1.0) +
                      2.0 * phi * (b * pp1 * (phi + 5.0) - phi * (phi + 2.0) - 3.0)) +
                params.sigma * pp1 * pm1 * pm1;
    double a5 = gs * (lam * (phi * phi + 1.0) * (b * pp1 * pp1 - phi * phi - 1.0) +
                      2.0 * phi * (b * (phi * phi * phi + 3.0 * phi * phi + phi - 1.0) -
                                   phi * (phi * phi + phi + 1.0) + 1.0)) -
                2.0 * params.sigma * phi * (phi * phi - 1.0);
    return {a1, a2, a3, a4, a5};
}

double quartic_eval(const ModelParams& params, double z) {
    auto a = quartic_coefficients(params);
    double phi = params.phi;
    return ((a[0] * z + a[1]) * z - 2.0 * (1.0 - phi) * a[2]) * z * z +
           2.0 * (1.0 - phi) * a[3] * z + a[4];
}

double delta_v_prime(const InnovationSpec& spec, const ModelParams& params,
                     double z, DerivMethod method) {
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("z must lie in [0,1]");
    if (method == DerivMethod::Analytic) {
        if (spec.kind() != GKind::Additive)
            throw SpecMismatchError("analytic derivative requires the additive spec");
        double phi = params.phi;
        double d1 = z * (phi - 1.0) + 1.0;
        double d2 = z * (1.0 - phi) + phi;
        double denom = 2.0 * (params.sigma - 1.0) * params.sigma * d1 * d1 * d2 * d2;
        return params.mu * quartic_eval(params, z) / denom;
    }
    // Central difference, one-sided at the corners.
    const double h = 1e-6;
    double lo = std::max(0.0, z - h);
    double hi = std::min(1.0, z + h);
    return (delta_v(spec, params, hi) - delta_v(spec, params, lo)) / (hi - lo);
}

double d_delta_v_db(const ModelParams& params, double z) {
    double phi = params.phi, lam = params.lambda;
    double num = params.gamma * params.mu * (2.0 * z - 1.0) * (phi + 1.0) *
                 (lam - 4.0 * z * z + phi * (lam + 4.0 * (z - 1.0) * z + 2.0) + 4.0 * z);
    double den = 2.0 * params.sigma * (z * (phi - 1.0) + 1.0) * (z * (1.0 - phi) + phi);
    return num / den;
}

}  // namespace geobif
