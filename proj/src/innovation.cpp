#include "geobif/innovation.hpp"

#include <cmath>
#include <stdexcept>

namespace geobif {

InnovationSpec InnovationSpec::custom(double b, std::function<double(double)> g,
                                      std::function<double(double)> g_prime) {
    if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("b must lie in (0,1)");
    if (!g) throw std::invalid_argument("custom spec requires a g function");

    // Range check on a uniform grid, monotonicity check on [1/2,1].
    const int n = 1001;
    double prev = g(0.5);
    for (int i = 0; i < n; ++i) {
        double z = static_cast<double>(i) / (n - 1);
        double v = g(z);
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw std::invalid_argument("custom g leaves [0,1] at z=" + std::to_string(z));
        if (z > 0.5) {
            double dz = v - prev;
            if (b < 0.5 && dz > 1e-12)
                throw std::invalid_argument("custom g must be decreasing on [1/2,1] for b < 1/2");
            if (b > 0.5 && dz < -1e-12)
                throw std::invalid_argument("custom g must be increasing on [1/2,1] for b > 1/2");
            prev = v;
        }
    }

    InnovationSpec spec(GKind::Custom);
    spec.custom_b_ = b;
    spec.custom_g_ = std::move(g);
    spec.custom_g_prime_ = std::move(g_prime);
    return spec;
}

double InnovationSpec::g(const ModelParams& params, double z) const {
    switch (kind_) {
        case GKind::Additive:
            return params.b * z + (1.0 - params.b) * (1.0 - z);
        case GKind::CobbDouglas: {
            if (z <= 0.0) return 0.0;
            if (z >= 1.0) return params.b >= 1.0 ? 1.0 : 0.0;
            return std::pow(z, params.b) * std::pow(1.0 - z, 1.0 - params.b);
        }
        case GKind::Custom:
            return custom_g_(z);
    }
    return 0.0;
}

double InnovationSpec::g_prime(const ModelParams& params, double z) const {
    switch (kind_) {
        case GKind::Additive:
            return 2.0 * params.b - 1.0;
        case GKind::CobbDouglas: {
            if (z <= 0.0 || z >= 1.0)
                throw std::domain_error("Cobb-Douglas derivative undefined at corners");
            return g(params, z) * (params.b / z - (1.0 - params.b) / (1.0 - z));
        }
        case GKind::Custom: {
            if (custom_g_prime_) return custom_g_prime_(z);
            const double h = 1e-6;
            double lo = std::max(0.0, z - h), hi = std::min(1.0, z + h);
            return (custom_g_(hi) - custom_g_(lo)) / (hi - lo);
        }
    }
    return 0.0;
}

bool InnovationSpec::corner_weight_vanishes(const ModelParams& params) const {
    return g(params, 1.0) == 0.0;
}

std::string InnovationSpec::name() const {
    switch (kind_) {
        case GKind::Additive: return "additive";
        case GKind::CobbDouglas: return "cobb-douglas";
        case GKind::Custom: return "custom";
    }
    return "?";
}

}  // namespace geobif
