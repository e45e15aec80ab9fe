#ifndef GEOBIF_THRESHOLDS_HPP
#define GEOBIF_THRESHOLDS_HPP

#include <optional>
#include <vector>

#include "geobif/innovation.hpp"
#include "geobif/params.hpp"

namespace geobif {

/// Sustain condition S(phi): full agglomeration is a stable equilibrium
/// exactly when S(phi) > 0.  Additive spec; phi field of params is ignored.
double sustain_condition(const ModelParams& params, double phi);

struct SustainPoints {
    std::vector<double> phi_s;      // roots of S in (0,1), ascending
    double phi_plus;                // interior stationary point of S, if any
    bool has_phi_plus;
    bool sustained_at_unity_limit;  // sign of S as phi -> 1 (ln term vanishes)
};

/// Roots of the sustain condition on (0,1), bracketed around the interior
/// maximizer and refined by bisection.
SustainPoints sustain_points(const ModelParams& params);

/// Break condition B(phi): symmetric dispersion is stable exactly when
/// B(phi) < 0.  Additive spec; phi field of params is ignored.
double break_condition(const ModelParams& params, double phi);

struct BreakPoints {
    double phi_b1;        // raw closed-form roots; may fall outside (0,1)
    double phi_b2;
    bool b1_in_range;     // strictly inside (0,1), with a 1e-12 boundary guard
    bool b2_in_range;
    bool b1_boundary;     // within 1e-12 of 0 or 1
    bool b2_boundary;
    double residual_b1;   // |B(phi_b1)| certificate
    double residual_b2;
};

/// Closed-form roots of B together with a residual certificate.
BreakPoints break_points(const ModelParams& params);

/// Existence window of interior break points in the related-variety weight:
/// both roots lie in (0,1) when b1_exist < b < b2_exist, for gamma inside
/// (2 sigma / ((2 lambda + 1)(sigma - 1)), 1).
struct BreakExistence {
    double b1_exist;
    double b2_exist;
    double gamma_lo;        // lower endpoint of the admissible gamma window
    bool gamma_in_window;   // strictly inside (gamma_lo, 1)
    bool gamma_boundary;    // within 1e-12 of either endpoint
    bool b_in_window;       // strictly inside (b1_exist, b2_exist)
    bool b_boundary;        // within 1e-12 of either endpoint
};
BreakExistence break_existence(const ModelParams& params);

/// Thresholds organizing the inverse equilibrium curve lambda_star at a given
/// interior z:
///   b_hat    - vertical asymptote of lambda_star in b
///   b_under  - b at which the log-free part of lambda_star changes sign
///   b_tilde  - b at which lambda_star crosses zero
///   gamma_c  - spillover scale at which b_tilde itself hits zero
struct Prop2Thresholds {
    double b_hat;
    double b_under;
    double b_tilde;
    double gamma_c;
};
Prop2Thresholds lambda_star_thresholds(const ModelParams& params, double z);

/// b above which full agglomeration is sustainable at the given phi
/// (root of S in b), together with the saddle value b_bar above which
/// symmetric dispersion cannot be stable for any phi.
struct AgglomerationBThresholds {
    double b_s;
    double b_bar;
};
AgglomerationBThresholds agglomeration_b_thresholds(const ModelParams& params,
                                                    double phi);

/// Critical related-variety weight at which the asymmetric stability
/// criterion changes sign at interior z (on the lambda_star curve).
double asym_b_critical(const ModelParams& params, double z);

enum class PitchforkType { Supercritical, Subcritical, Degenerate };

struct PitchforkInfo {
    PitchforkType type;
    double xi;                    // normal-form sign quantity at the break point
    bool derivative_check_ok;     // FD confirmation of the eigenvalue crossing
};

/// Classifies the symmetric-dispersion break at phi_b.  Requires
/// |B(phi_b)| < 1e-9; the finite-difference crossing check runs only for
/// break points inside (0,1).
PitchforkInfo pitchfork_classify(const ModelParams& params, double phi_b);

/// Break points for a general innovation spec, depending on g only through
/// g(1/2) and g'(1/2).  Both closed-form roots are reported raw; phi_b2
/// falls outside (0,1) whenever g'(1/2) > 0, so complete re-dispersion at
/// high integration is impossible in that case.
struct GeneralBreakPoints {
    double phi_b1;
    double phi_b2;
    bool b1_in_range;
    bool b2_in_range;
    double kappa;
    double g_half;
    double g_prime_half;
};
GeneralBreakPoints general_break_points(const InnovationSpec& spec,
                                        const ModelParams& params);

/// g(1/2) value putting the given phi exactly on the break locus.
double general_break_g_value(const ModelParams& params, double phi_b);

/// One-call summary of every closed-form threshold at the given parameters.
struct ThresholdReport {
    BreakPoints breaks;
    BreakExistence existence;
    SustainPoints sustain;
    AgglomerationBThresholds b_thresholds;  // at params.phi
    std::optional<PitchforkInfo> pitchfork_b1;
    std::optional<PitchforkInfo> pitchfork_b2;
};
ThresholdReport threshold_report(const ModelParams& params);

}  // namespace geobif

#endif
