#include "geobif/thresholds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "geobif/errors.hpp"
#include "geobif/model.hpp"

namespace geobif {

namespace {

constexpr double kBoundaryGuard = 1e-12;
constexpr double kCertTol = 1e-9;

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double flo) {
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double fmid = f(mid);
        if (std::abs(fmid) < 1e-14 || hi - lo < 1e-15) return mid;
        if ((flo < 0.0) == (fmid < 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double sustain_condition(const ModelParams& params, double phi) {
    if (!(phi > 0.0 && phi <= 1.0)) throw std::domain_error("phi must lie in (0,1]");
    double b = params.b, lam = params.lambda;
    double poly = (b - 1.0) * (lam + 2.0) * phi * phi + 2.0 * b * (lam + 1.0) * phi +
                  (b - 1.0) * lam;
    return params.gamma * poly / (2.0 * params.sigma * phi) -
           std::log(phi) / (params.sigma - 1.0);
}

SustainPoints sustain_points(const ModelParams& params) {
    SustainPoints out;
    double b = params.b, lam = params.lambda, sigma = params.sigma, gamma = params.gamma;

    // Stationary point of S: the quadratic-over-phi part has a unique interior
    // extremum, which is a maximum since S -> -inf at both ends of (0,1) when
    // the log term is dominated.
    double s1 = 1.0 / (sigma - 1.0);
    double rad = gamma * gamma * (b - 1.0) * (b - 1.0) * lam * (lam + 2.0) /
                     (sigma * sigma) +
                 s1 * s1;
    double phi_plus = sigma * (s1 - std::sqrt(rad)) / (gamma * (b - 1.0) * (lam + 2.0));
    out.phi_plus = phi_plus;
    out.has_phi_plus = phi_plus > 0.0 && phi_plus < 1.0;
    out.sustained_at_unity_limit = gamma * (2.0 * b - 1.0) * (lam + 1.0) / sigma > 0.0;

    auto S = [&](double phi) { return sustain_condition(params, phi); };
    const double lo_end = 1e-4, hi_end = 1.0 - 1e-4;
    const int n = 2000;
    double prev = lo_end, fprev = S(lo_end);
    for (int k = 1; k <= n; ++k) {
        double phi = lo_end + (hi_end - lo_end) * static_cast<double>(k) / n;
        double f = S(phi);
        if ((fprev < 0.0) != (f < 0.0))
            out.phi_s.push_back(bisect(S, prev, phi, fprev));
        prev = phi;
        fprev = f;
    }
    return out;
}

double break_condition(const ModelParams& params, double phi) {
    double b = params.b, lam = params.lambda;
    double pp1 = phi + 1.0;
    return params.gamma * (params.sigma - 1.0) *
               (2.0 * b * (lam + 1.0) * pp1 * pp1 - (2.0 * lam + 3.0) * phi * phi -
                2.0 * lam - 1.0) +
           2.0 * params.sigma * (1.0 - phi * phi);
}

BreakPoints break_points(const ModelParams& params) {
    double b = params.b, lam = params.lambda, sigma = params.sigma, gamma = params.gamma;
    double gs = gamma * (sigma - 1.0);
    double D = gs * gs * (8.0 * b * (lam + 1.0) * (lam + 1.0) - 4.0 * lam * lam -
                          8.0 * lam - 3.0) +
               4.0 * gamma * sigma * (sigma - 1.0) + 4.0 * sigma * sigma;
    double den = gs * (2.0 * b * (lam + 1.0) - 2.0 * lam - 3.0) - 2.0 * sigma;

    BreakPoints out{};
    if (D < 0.0) {
        out.phi_b1 = out.phi_b2 = std::numeric_limits<double>::quiet_NaN();
        out.residual_b1 = out.residual_b2 = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    double sq = std::sqrt(D);
    double c = 2.0 * b * gamma * (lam + 1.0) * (sigma - 1.0);
    out.phi_b1 = (sq - c) / den;
    out.phi_b2 = -(sq + c) / den;
    out.residual_b1 = std::abs(break_condition(params, out.phi_b1));
    out.residual_b2 = std::abs(break_condition(params, out.phi_b2));
    auto classify = [](double phi, bool& in_range, bool& boundary) {
        boundary = std::abs(phi) < kBoundaryGuard || std::abs(phi - 1.0) < kBoundaryGuard;
        in_range = !boundary && phi > 0.0 && phi < 1.0;
    };
    classify(out.phi_b1, out.b1_in_range, out.b1_boundary);
    classify(out.phi_b2, out.b2_in_range, out.b2_boundary);
    return out;
}

BreakExistence break_existence(const ModelParams& params) {
    double lam = params.lambda, sigma = params.sigma, gamma = params.gamma;
    double gs = gamma * (sigma - 1.0);
    BreakExistence out;
    out.b1_exist = (gamma * (2.0 * lam + 1.0) * (sigma - 1.0) - 2.0 * sigma) *
                   (gamma * (2.0 * lam + 3.0) * (sigma - 1.0) + 2.0 * sigma) /
                   (8.0 * gs * gs * (lam + 1.0) * (lam + 1.0));
    out.b2_exist = (gamma * (2.0 * lam + 1.0) * (sigma - 1.0) - 2.0 * sigma) /
                   (2.0 * gs * (lam + 1.0));
    out.gamma_lo = 2.0 * sigma / ((2.0 * lam + 1.0) * (sigma - 1.0));
    out.gamma_boundary = std::abs(gamma - out.gamma_lo) < kBoundaryGuard ||
                         std::abs(gamma - 1.0) < kBoundaryGuard;
    out.gamma_in_window = !out.gamma_boundary && gamma > out.gamma_lo && gamma < 1.0;
    out.b_boundary = std::abs(params.b - out.b1_exist) < kBoundaryGuard ||
                     std::abs(params.b - out.b2_exist) < kBoundaryGuard;
    out.b_in_window =
        !out.b_boundary && params.b > out.b1_exist && params.b < out.b2_exist;
    return out;
}

namespace {

double log_ratio(double phi, double z) {
    return std::log((z * (phi - 1.0) + 1.0) / (z * (1.0 - phi) + phi));
}

}  // namespace

Prop2Thresholds lambda_star_thresholds(const ModelParams& params, double z) {
    if (!(z > 0.0 && z < 1.0) || z == 0.5)
        throw std::domain_error("thresholds defined for interior asymmetric z");
    double phi = params.phi, sigma = params.sigma, gamma = params.gamma;
    double gs = gamma * (sigma - 1.0);
    double pp1 = phi + 1.0;
    double L = log_ratio(phi, z);
    double q = (z - 1.0) * z * (phi * phi - 1.0) + phi * phi;

    Prop2Thresholds out;
    out.b_hat = (1.0 + phi * phi) / (pp1 * pp1);
    out.b_under = q / (2.0 * (z - 1.0) * z * (phi * phi - 1.0) + phi * pp1);
    out.b_tilde =
        (gs * (2.0 * z - 1.0) * q -
         sigma * (z * (phi - 1.0) + 1.0) * (z * (phi - 1.0) - phi) * L) /
        (gs * (2.0 * z - 1.0) * pp1 * (2.0 * (z - 1.0) * z * (phi - 1.0) + phi));
    out.gamma_c = sigma * (z * (1.0 - phi) - 1.0) * (z * (1.0 - phi) + phi) * L /
                  ((sigma - 1.0) * (2.0 * z - 1.0) * q);
    return out;
}

AgglomerationBThresholds agglomeration_b_thresholds(const ModelParams& params,
                                                    double phi) {
    double lam = params.lambda;
    AgglomerationBThresholds out;
    out.b_s = ((lam + 2.0) * phi * phi + lam) /
              ((phi + 1.0) * ((lam + 2.0) * phi + lam));
    out.b_bar = ((2.0 * lam + 3.0) * phi * phi + 2.0 * lam + 1.0) /
                (2.0 * (lam + 1.0) * (phi + 1.0) * (phi + 1.0));
    (void)params;
    return out;
}

double asym_b_critical(const ModelParams& params, double z) {
    if (!(z > 0.0 && z < 1.0) || z == 0.5)
        throw std::domain_error("asym_b_critical defined for interior asymmetric z");
    double phi = params.phi, sigma = params.sigma;
    double gs = params.gamma * (sigma - 1.0);
    double L = log_ratio(phi, z);
    double two_zm1 = 2.0 * z - 1.0;
    double pm1 = phi - 1.0;
    double T = 2.0 * z * z * pm1 * pm1 - 2.0 * z * pm1 * pm1 + phi * phi + 1.0;
    double num = two_zm1 * (1.0 - phi * phi) * (sigma + gs * two_zm1 * two_zm1) +
                 sigma * T * L;
    double den = 2.0 * gs * two_zm1 * two_zm1 * two_zm1 * (1.0 - phi * phi);
    return num / den;
}

PitchforkInfo pitchfork_classify(const ModelParams& params, double phi_b) {
    if (std::abs(break_condition(params, phi_b)) > kCertTol)
        throw NotABreakPointError("break condition does not vanish at the given phi");
    double b = params.b, lam = params.lambda, phi = phi_b;
    double pp1 = phi + 1.0, pm1 = phi - 1.0;
    double xi = 3.0 * params.gamma * (params.sigma - 1.0) *
                    (b * pp1 * pp1 - phi * phi - 1.0) * (lam * pm1 + 2.0 * phi) -
                params.sigma * pm1 * pm1 * pp1;

    PitchforkInfo out;
    out.xi = xi;
    if (std::abs(xi) < kCertTol)
        out.type = PitchforkType::Degenerate;
    else
        out.type = xi > 0.0 ? PitchforkType::Supercritical : PitchforkType::Subcritical;

    // Normal-form preconditions, checked by finite differences on the
    // differential f = delta_v at (z, phi) = (1/2, phi_b): f_z, f_zz and
    // f_phi vanish while the mixed partial f_phi_z is nonzero (the
    // eigenvalue genuinely crosses zero).  Only meaningful for interior
    // break points.
    out.derivative_check_ok = true;
    if (phi_b > 1e-4 && phi_b < 1.0 - 1e-4) {
        InnovationSpec spec = InnovationSpec::additive();
        ModelParams at = params.with_phi(phi_b);
        const double h = 1e-5;
        double f_z = delta_v_prime(spec, at, 0.5, DerivMethod::Analytic);
        double f_zz = (delta_v(spec, at, 0.5 + h) - 2.0 * delta_v(spec, at, 0.5) +
                       delta_v(spec, at, 0.5 - h)) /
                      (h * h);
        double f_phi = (delta_v(spec, params.with_phi(phi_b + h), 0.5) -
                        delta_v(spec, params.with_phi(phi_b - h), 0.5)) /
                       (2.0 * h);
        double f_phi_z =
            (delta_v_prime(spec, params.with_phi(phi_b + h), 0.5,
                           DerivMethod::Analytic) -
             delta_v_prime(spec, params.with_phi(phi_b - h), 0.5,
                           DerivMethod::Analytic)) /
            (2.0 * h);
        out.derivative_check_ok = std::abs(f_z) < 1e-8 && std::abs(f_zz) < 1e-6 &&
                                  std::abs(f_phi) < 1e-8 && std::abs(f_phi_z) > 1e-9;
    }
    return out;
}

GeneralBreakPoints general_break_points(const InnovationSpec& spec,
                                        const ModelParams& params) {
    double lam = params.lambda, sigma = params.sigma, gamma = params.gamma;
    double gh = spec.g(params, 0.5);
    double gph = spec.g_prime(params, 0.5);
    double gs = gamma * (sigma - 1.0);

    double kappa_sq = 2.0 * gamma * gamma * gh * (lam + 1.0) * (lam + 1.0) *
                          (sigma - 1.0) * (sigma - 1.0) * gph +
                      (gamma * gh * (sigma - 1.0) + sigma) *
                          (gamma * gh * (sigma - 1.0) + sigma);
    double kappa = 2.0 * std::sqrt(std::max(kappa_sq, 0.0));
    double num_base = gs * (lam + 1.0) * (gph + 2.0 * gh);
    double den = 2.0 * (gamma * gh * (lam + 2.0) * (sigma - 1.0) + sigma) -
                 gs * (lam + 1.0) * gph;

    GeneralBreakPoints out;
    out.g_half = gh;
    out.g_prime_half = gph;
    out.kappa = kappa;
    out.phi_b1 = (num_base - kappa) / den;
    out.phi_b2 = (num_base + kappa) / den;
    auto in_range = [](double phi) {
        return phi > kBoundaryGuard && phi < 1.0 - kBoundaryGuard;
    };
    out.b1_in_range = in_range(out.phi_b1);
    out.b2_in_range = in_range(out.phi_b2);
    return out;
}

double general_break_g_value(const ModelParams& params, double phi_b) {
    return -params.sigma * (phi_b + 1.0) /
           (params.gamma * (params.sigma - 1.0) *
            (2.0 * params.lambda * (phi_b - 1.0) + 3.0 * phi_b - 1.0));
}

ThresholdReport threshold_report(const ModelParams& params) {
    ThresholdReport out;
    out.breaks = break_points(params);
    out.existence = break_existence(params);
    out.sustain = sustain_points(params);
    out.b_thresholds = agglomeration_b_thresholds(params, params.phi);
    auto try_classify = [&](double phi_b) -> std::optional<PitchforkInfo> {
        if (std::isnan(phi_b)) return std::nullopt;
        try {
            return pitchfork_classify(params, phi_b);
        } catch (const NotABreakPointError&) {
            return std::nullopt;
        }
    };
    out.pitchfork_b1 = try_classify(out.breaks.phi_b1);
    out.pitchfork_b2 = try_classify(out.breaks.phi_b2);
    return out;
}

}  // namespace geobif
