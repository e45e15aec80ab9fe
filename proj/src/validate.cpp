#include "geobif/validate.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "geobif/equilibria.hpp"
#include "geobif/errors.hpp"
#include "geobif/model.hpp"
#include "geobif/thresholds.hpp"

namespace geobif {

namespace {

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct Failure {
    bool any = false;
    std::string first;
    void note(const std::string& msg) {
        if (!any) first = msg;
        any = true;
    }
};

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double sigma = 2.0 + 8.0 * u(rng);
    double lambda = 0.5 + 4.5 * u(rng);
    double gamma = 0.1 + 0.89 * u(rng);
    double b = 0.05 + 0.9 * u(rng);
    double phi = 0.05 + 0.9 * u(rng);
    return ModelParams(sigma, lambda, gamma, b, phi);
}

/// Closed-form derivative with an optional deliberate coefficient corruption.
double analytic_prime(const ModelParams& p, double z, bool corrupt) {
    auto a = quartic_coefficients(p);
    if (corrupt) a[2] *= 1.01;
    double phi = p.phi;
    double P = ((a[0] * z + a[1]) * z - 2.0 * (1.0 - phi) * a[2]) * z * z +
               2.0 * (1.0 - phi) * a[3] * z + a[4];
    double d1 = z * (phi - 1.0) + 1.0;
    double d2 = z * (1.0 - phi) + phi;
    return p.mu * P / (2.0 * (p.sigma - 1.0) * p.sigma * d1 * d1 * d2 * d2);
}

}  // namespace

std::vector<CheckResult> run_validation(const InnovationSpec& spec,
                                        const ModelParams& base,
                                        const ValidationOptions& opts) {
    std::vector<CheckResult> out;
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uz(0.02, 0.98);

    std::vector<ModelParams> draws{base};
    for (int i = 0; i < opts.n_perturb; ++i) draws.push_back(random_params(rng));

    const bool additive = spec.kind() == GKind::Additive;

    // 1. Antisymmetry of the utility differential.
    {
        Failure f;
        for (const auto& p : draws) {
            for (int k = 0; k < 7; ++k) {
                double z = uz(rng);
                double s = delta_v(spec, p, z) + delta_v(spec, p, 1.0 - z);
                if (std::abs(s) > 1e-10)
                    f.note("dv(z)+dv(1-z)=" + num(s) + " at z=" + num(z));
            }
            double at_half = delta_v(spec, p, 0.5);
            if (std::abs(at_half) > 1e-12) f.note("dv(1/2)=" + num(at_half));
        }
        out.push_back({"antisymmetry", !f.any, f.first});
    }

    // 2. Closed-form derivative vs central differences.
    if (additive) {
        Failure f;
        for (const auto& p : draws) {
            for (int k = 0; k < 10; ++k) {
                double z = uz(rng);
                double an = analytic_prime(p, z, opts.corrupt_quartic);
                double fd = delta_v_prime(spec, p, z, DerivMethod::FiniteDifference);
                double scale = std::max({std::abs(an), std::abs(fd), 1e-8});
                if (std::abs(an - fd) / scale > 1e-6)
                    f.note("derivative mismatch " + num(an) + " vs " + num(fd) +
                           " at z=" + num(z));
            }
        }
        out.push_back({"derivative-agreement", !f.any, f.first});
    }

    // 3. Related-variety derivative of the differential vs finite differences;
    //    strictly positive on the agglomerating half.
    if (additive) {
        Failure f;
        for (const auto& p : draws) {
            for (int k = 0; k < 5; ++k) {
                double z = uz(rng);
                double an = d_delta_v_db(p, z);
                double h = 1e-6;
                double fd = (delta_v(spec, p.with_b(p.b + h), z) -
                             delta_v(spec, p.with_b(p.b - h), z)) /
                            (2.0 * h);
                double scale = std::max({std::abs(an), std::abs(fd), 1e-8});
                if (std::abs(an - fd) / scale > 1e-6)
                    f.note("d(dv)/db mismatch " + num(an) + " vs " + num(fd));
                if (z > 0.51 && z < 0.99 && an <= 0.0)
                    f.note("d(dv)/db not positive at z=" + num(z));
            }
        }
        out.push_back({"related-variety-derivative", !f.any, f.first});
    }

    // 4. Sign identities: corner differential vs sustain condition, symmetric
    //    slope vs break condition.
    if (additive) {
        Failure f;
        for (const auto& p : draws) {
            double dv1 = delta_v(spec, p, 1.0);
            double S = sustain_condition(p, p.phi);
            if (std::abs(S) > 1e-9 && (dv1 > 0.0) != (S > 0.0))
                f.note("sign(dv(1)) != sign(S) at phi=" + num(p.phi));
            double dvp = delta_v_prime(spec, p, 0.5, DerivMethod::Analytic);
            double B = break_condition(p, p.phi);
            if (std::abs(B) > 1e-9 && (dvp > 0.0) != (B > 0.0))
                f.note("sign(dv'(1/2)) != sign(B) at phi=" + num(p.phi));
        }
        out.push_back({"sign-identities", !f.any, f.first});
    }

    // 5. At most two interior equilibria in (1/2, 1].
    if (additive) {
        Failure f;
        for (const auto& p : draws) {
            EquilibriumSet set = find_equilibria(spec, p, 500);
            if (set.interior_count_upper_half > 2)
                f.note("found " + std::to_string(set.interior_count_upper_half) +
                       " interior equilibria");
        }
        out.push_back({"interior-count-bound", !f.any, f.first});
    }

    // 6. Inverse equilibrium curve back-substitution and stability agreement.
    if (additive) {
        Failure f;
        int used = 0;
        for (const auto& p : draws) {
            double z = 0.55 + 0.4 * std::uniform_real_distribution<double>()(rng);
            LambdaStar ls{};
            try {
                ls = lambda_star(p, z);
            } catch (const AsymptoteError&) {
                continue;
            }
            if (!ls.admissible) continue;
            ++used;
            ModelParams q(p.sigma, ls.value, p.gamma, p.b, p.phi, p.mu);
            double res = delta_v(spec, q, z);
            if (std::abs(res) > 1e-9)
                f.note("dv(z)=" + num(res) + " after substituting lambda_star");
            double g = asym_stability_condition(p, z);
            double dvp = delta_v_prime(spec, q, z, DerivMethod::Analytic);
            if (std::abs(g) > 1e-9 && std::abs(dvp) > 1e-12 &&
                (g > 0.0) != (dvp > 0.0))
                f.note("script-G sign disagrees with dv' at z=" + num(z));
        }
        out.push_back({"lambda-star-consistency", !f.any,
                       f.any ? f.first : std::to_string(used) + " admissible points"});
    }

    // 7. Threshold back-substitution: closed-form roots null their condition.
    if (additive) {
        Failure f;
        for (const auto& p : draws) {
            BreakPoints bp = break_points(p);
            if (bp.b1_in_range && bp.residual_b1 > 1e-9)
                f.note("B(phi_b1)=" + num(bp.residual_b1));
            if (bp.b2_in_range && bp.residual_b2 > 1e-9)
                f.note("B(phi_b2)=" + num(bp.residual_b2));
            for (double phi_s : sustain_points(p).phi_s)
                if (std::abs(sustain_condition(p, phi_s)) > 1e-9)
                    f.note("S(phi_s)=" + num(sustain_condition(p, phi_s)));
        }
        out.push_back({"threshold-back-substitution", !f.any, f.first});
    }

    // 8. Corner identity for a spec whose agglomerated weight vanishes.
    if (spec.corner_weight_vanishes(base)) {
        Failure f;
        for (const auto& p : draws) {
            double expect = p.mu * std::log(p.phi) / (p.sigma - 1.0);
            double got = delta_v(spec, p, 1.0);
            if (std::abs(got - expect) > 1e-12)
                f.note("corner dv(1)=" + num(got) + " expected " + num(expect));
            if (got > 0.0) f.note("agglomeration admissible at phi=" + num(p.phi));
        }
        out.push_back({"corner-identity", !f.any, f.first});
    }

    return out;
}

}  // namespace geobif
