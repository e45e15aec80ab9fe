#include "geobif/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "geobif/errors.hpp"

namespace geobif {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kWidthTol = 1e-14;

double dv_prime(const InnovationSpec& spec, const ModelParams& params, double z) {
    // The closed-form derivative is exact; fall back to differences otherwise.
    if (spec.kind() == GKind::Additive)
        return delta_v_prime(spec, params, z, DerivMethod::Analytic);
    return delta_v_prime(spec, params, z, DerivMethod::FiniteDifference);
}

Stability stability_from(double deciding) {
    if (std::abs(deciding) < kStabilityTol) return Stability::Marginal;
    return deciding < 0.0 ? Stability::Stable : Stability::Unstable;
}

/// Safeguarded secant/bisection root refinement of delta_v on [lo,hi] with
/// f(lo) f(hi) < 0.
double refine_root(const InnovationSpec& spec, const ModelParams& params,
                   double lo, double hi, double flo, double fhi) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        // Secant candidate, accepted only if it stays inside the bracket.
        double denom = fhi - flo;
        if (denom != 0.0) {
            double sec = lo - flo * (hi - lo) / denom;
            if (sec > lo + 0.1 * (hi - lo) && sec < hi - 0.1 * (hi - lo)) mid = sec;
        }
        double fmid = delta_v(spec, params, mid);
        if (std::abs(fmid) < kResidualTol || hi - lo < kWidthTol) return mid;
        if ((flo < 0.0) != (fmid < 0.0)) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Interior roots of delta_v in the open interval (1/2, 1) found by a uniform
/// scan.  The sign immediately above z = 1/2 is taken from the derivative
/// there, since delta_v(1/2) = 0 identically.
std::vector<double> scan_upper_half(const InnovationSpec& spec,
                                    const ModelParams& params, int grid_n) {
    std::vector<double> roots;
    double f_half_prime = dv_prime(spec, params, 0.5);
    double prev_z = 0.5;
    double prev_f = 0.0;
    bool prev_sign_neg = f_half_prime < 0.0;
    for (int k = 1; k <= grid_n; ++k) {
        double z = 0.5 + 0.5 * static_cast<double>(k) / grid_n;
        double f = delta_v(spec, params, z);
        if (f == 0.0 && z < 1.0) {
            roots.push_back(z);
            continue;
        }
        bool sign_neg = f < 0.0;
        if (sign_neg != prev_sign_neg && z < 1.0 + 1e-15) {
            double lo = prev_z, flo = prev_f;
            if (lo == 0.5) {
                // Step off the trivial root so the bracket has a genuine sign.
                lo = 0.5 + 1e-12;
                flo = delta_v(spec, params, lo);
                if ((flo < 0.0) == sign_neg) flo = prev_sign_neg ? -1e-300 : 1e-300;
            }
            double r = refine_root(spec, params, lo, z, flo, f);
            if (r > 0.5 + 1e-10 && r < 1.0 - 1e-10) roots.push_back(r);
        }
        prev_z = z;
        prev_f = f;
        prev_sign_neg = sign_neg;
    }
    std::sort(roots.begin(), roots.end());
    // Collapse near-duplicates straddling a grid node.
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > 1e-8) out.push_back(r);
    return out;
}

}  // namespace

EquilibriumSet find_equilibria(const InnovationSpec& spec, const ModelParams& params,
                               int grid_n) {
    if (grid_n < 10) throw std::invalid_argument("grid_n must be at least 10");
    params.validate();

    EquilibriumSet set;
    set.params = params;
    set.spec_kind = spec.kind();

    std::vector<double> roots = scan_upper_half(spec, params, grid_n);
    // Verification pass on a finer, incommensurate grid; a mismatch means the
    // requested grid straddles a root pair.
    std::vector<double> fine = scan_upper_half(spec, params, 3 * grid_n + 1);
    if (fine.size() != roots.size()) {
        set.warnings.push_back("grid too coarse: refined scan found " +
                               std::to_string(fine.size()) + " interior roots vs " +
                               std::to_string(roots.size()));
        roots = fine;
    }
    set.interior_count_upper_half = static_cast<int>(roots.size());

    std::vector<Equilibrium> eqs;

    // Symmetric equilibrium.
    {
        double d = dv_prime(spec, params, 0.5);
        eqs.push_back({0.5, EquilibriumKind::SymmetricDispersion, stability_from(d),
                       std::abs(delta_v(spec, params, 0.5)), d});
    }

    // Interior asymmetric equilibria and their mirrors.
    for (double r : roots) {
        double d = dv_prime(spec, params, r);
        Stability st = stability_from(d);
        double res = std::abs(delta_v(spec, params, r));
        eqs.push_back({r, EquilibriumKind::AsymmetricDispersion, st, res, d});
        eqs.push_back({1.0 - r, EquilibriumKind::AsymmetricDispersion, st, res, d});
    }

    // Corners: steady states of the migration dynamics for any parameters;
    // attracting exactly when the utility differential points outward.
    {
        double dv1 = delta_v(spec, params, 1.0);
        Stability st = stability_from(-dv1);
        eqs.push_back({1.0, EquilibriumKind::Agglomeration, st, 0.0, dv1});
        eqs.push_back({0.0, EquilibriumKind::Agglomeration, st, 0.0, -dv1});
    }

    std::sort(eqs.begin(), eqs.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.z_star < b.z_star; });
    set.equilibria = std::move(eqs);
    return set;
}

namespace {

double log_ratio(double phi, double z) {
    return std::log((z * (phi - 1.0) + 1.0) / (z * (1.0 - phi) + phi));
}

}  // namespace

LambdaStar lambda_star(const ModelParams& params, double z) {
    if (!(z > 0.0 && z < 1.0) || z == 0.5)
        throw std::domain_error("lambda_star requires interior asymmetric z");
    double b = params.b, phi = params.phi;
    double gs = params.gamma * (params.sigma - 1.0);
    double b_hat = (1.0 + phi * phi) / ((1.0 + phi) * (1.0 + phi));
    if (std::abs(b - b_hat) < 1e-12)
        throw AsymptoteError("lambda_star diverges at b = (1+phi^2)/(1+phi)^2");

    double L = log_ratio(phi, z);
    double b1 = gs * (2.0 * z - 1.0);
    double b2 = phi * phi * (2.0 * b * (z - 1.0) * z + b - z * z + z - 1.0) +
                (1.0 - 2.0 * b) * (z - 1.0) * z + b * phi;
    double b3 = params.sigma * (z * (phi - 1.0) + 1.0) * (z * (phi - 1.0) - phi);
    double b4 = gs * (2.0 * z - 1.0) * (b * (phi + 1.0) * (phi + 1.0) - phi * phi - 1.0);
    double val = -2.0 * (b1 * b2 + b3 * L) / b4;
    return {val, val > 0.0};
}

double asym_stability_condition(const ModelParams& params, double z) {
    double b = params.b, phi = params.phi, sigma = params.sigma;
    double gs = params.gamma * (sigma - 1.0);
    double L = log_ratio(phi, z);
    double one_m_2z = 1.0 - 2.0 * z;
    double pm1 = phi - 1.0;
    double T = 2.0 * z * z * pm1 * pm1 - 2.0 * z * pm1 * pm1 + phi * phi + 1.0;
    return (2.0 * z - 1.0) * (phi * phi - 1.0) *
               ((2.0 * b - 1.0) * gs * one_m_2z * one_m_2z - sigma) +
           sigma * T * L;
}

Stability asymmetric_stability(const ModelParams& params, double z) {
    LambdaStar ls = lambda_star(params, z);
    if (!ls.admissible)
        throw InvalidEquilibriumError("lambda_star(z) is not positive: z is not an "
                                      "equilibrium for any admissible worker mass");
    return stability_from(asym_stability_condition(params, z));
}

}  // namespace geobif
