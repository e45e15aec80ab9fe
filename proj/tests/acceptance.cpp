// Acceptance suite: one pass/fail line per criterion, non-zero exit on any
// failure.  Each criterion is self-contained and runs in seconds.
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geobif/bifurcation.hpp"
#include "geobif/equilibria.hpp"
#include "geobif/errors.hpp"
#include "geobif/thresholds.hpp"

using namespace geobif;

namespace {

const InnovationSpec kAdd = InnovationSpec::additive();
const InnovationSpec kCD = InnovationSpec::cobb_douglas();

struct Criterion {
    int number;
    std::string title;
    std::function<bool(std::string&)> run;
};

bool has_stable(const EquilibriumSet& s, EquilibriumKind k) {
    for (const auto& e : s.equilibria)
        if (e.kind == k && e.stability == Stability::Stable) return true;
    return false;
}

int count_stable(const EquilibriumSet& s, EquilibriumKind k) {
    int n = 0;
    for (const auto& e : s.equilibria)
        if (e.kind == k && e.stability == Stability::Stable) ++n;
    return n;
}

std::vector<std::string> regime_labels(const BifurcationDiagram& d) {
    std::vector<std::string> out;
    for (const auto& r : d.regimes) out.push_back(r.stable_set);
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi), fm = f(m);
        if ((fm < 0) == (flo < 0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    return 0.5 * (lo + hi);
}

ModelParams draw_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return ModelParams(2 + 8 * u(rng), 0.5 + 4 * u(rng), 0.1 + 0.9 * u(rng),
                       0.05 + 0.9 * u(rng), 0.05 + 0.9 * u(rng));
}

// --- criterion 1 -----------------------------------------------------------

bool crit1(std::string& note) {
    bool ok = true;
    auto at = [](double phi) {
        return find_equilibria(kAdd, ModelParams(5, 2, 1, 0.342, phi), 4000);
    };
    auto residuals_ok = [](const EquilibriumSet& s) {
        for (const auto& e : s.equilibria)
            if (e.z_star > 1e-9 && e.z_star < 1 - 1e-9 && e.residual > 1e-10)
                return false;
        return true;
    };
    {  // phi = 0.1: only the even split, stable
        auto s = at(0.1);
        ok &= count_stable(s, EquilibriumKind::SymmetricDispersion) == 1 &&
              !has_stable(s, EquilibriumKind::AsymmetricDispersion) &&
              !has_stable(s, EquilibriumKind::Agglomeration) && residuals_ok(s);
    }
    {  // phi = 0.3: stable asymmetric pair, even split unstable
        auto s = at(0.3);
        ok &= count_stable(s, EquilibriumKind::AsymmetricDispersion) == 2 &&
              !has_stable(s, EquilibriumKind::SymmetricDispersion) &&
              !has_stable(s, EquilibriumKind::Agglomeration) && residuals_ok(s);
    }
    {  // phi = 0.38: only full agglomeration is stable
        auto s = at(0.38);
        ok &= count_stable(s, EquilibriumKind::Agglomeration) == 2 &&
              !has_stable(s, EquilibriumKind::SymmetricDispersion) &&
              !has_stable(s, EquilibriumKind::AsymmetricDispersion) && residuals_ok(s);
    }
    {  // phi = 0.4: the more agglomerated asymmetric pair is stable
        auto s = at(0.4);
        bool outer_stable = false;
        for (const auto& e : s.equilibria)
            if (e.kind == EquilibriumKind::AsymmetricDispersion &&
                e.stability == Stability::Stable && e.z_star > 0.99)
                outer_stable = true;
        ok &= outer_stable && residuals_ok(s);
        // The caption's full bistable structure (stable even split coexisting
        // with the pair) holds just above the second break point ~0.40103:
        // phi = 0.4 itself still sits 6e-4 below it.
        auto s2 = at(0.402);
        ok &= count_stable(s2, EquilibriumKind::SymmetricDispersion) == 1 &&
              count_stable(s2, EquilibriumKind::AsymmetricDispersion) == 2 &&
              s2.interior_count_upper_half == 2;
    }
    {  // phi = 0.8: back to the even split only
        auto s = at(0.8);
        ok &= count_stable(s, EquilibriumKind::SymmetricDispersion) == 1 &&
              s.interior_count_upper_half == 0 &&
              !has_stable(s, EquilibriumKind::Agglomeration);
    }
    note = "phi=0.4 checked for the stable outer pair; the caption's full "
           "bistability is verified at phi=0.402, just above the upper break "
           "point 0.40103";
    return ok;
}

// --- criterion 2 -----------------------------------------------------------

bool crit2(std::string&) {
    std::mt19937_64 rng(1002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int used_break = 0, used_sustain = 0;
    while (used_break < 200 || used_sustain < 200) {
        ModelParams p = draw_params(rng);
        if (used_break < 200) {
            auto ex = break_existence(p);
            if (ex.gamma_in_window && ex.b_in_window) {
                auto bp = break_points(p);
                if (bp.b1_in_range && bp.b2_in_range) {
                    ++used_break;
                    if (bp.residual_b1 > 1e-9 || bp.residual_b2 > 1e-9) return false;
                    auto B = [&](double phi) { return break_condition(p, phi); };
                    double mid = 0.5 * (bp.phi_b1 + bp.phi_b2);
                    if (std::abs(bisect(B, 1e-6, mid) - bp.phi_b1) > 1e-8) return false;
                    if (std::abs(bisect(B, mid, 1 - 1e-6) - bp.phi_b2) > 1e-8)
                        return false;
                }
            }
        }
        if (used_sustain < 200) {
            auto sp = sustain_points(p);
            // Structural bound: at most two roots below b = 1/2, exactly one
            // above it whenever agglomeration is sustained in the unity limit.
            if (p.b < 0.5 && sp.phi_s.size() > 2) return false;
            if (p.b > 0.5 && sp.sustained_at_unity_limit && sp.phi_s.size() != 1)
                return false;
            for (double r : sp.phi_s) {
                if (std::abs(sustain_condition(p, r)) > 1e-9) return false;
                auto S = [&](double phi) { return sustain_condition(p, phi); };
                double lo = std::max(1e-6, r - 1e-3), hi = std::min(1 - 1e-6, r + 1e-3);
                if (S(lo) * S(hi) < 0 && std::abs(bisect(S, lo, hi) - r) > 1e-8)
                    return false;
            }
            if (!sp.phi_s.empty()) ++used_sustain;
        }
    }
    return true;
}

// --- criterion 3 -----------------------------------------------------------

bool crit3(std::string&) {
    std::mt19937_64 rng(1003);
    for (int i = 0; i < 500; ++i) {
        ModelParams p = draw_params(rng);
        double dv1 = delta_v(kAdd, p, 1.0);
        double S = sustain_condition(p, p.phi);
        if (std::abs(dv1) > 1e-9 && std::abs(S) > 1e-9 && (dv1 > 0) != (S > 0))
            return false;
        double slope = delta_v_prime(kAdd, p, 0.5, DerivMethod::Analytic);
        double B = break_condition(p, p.phi);
        if (std::abs(slope) > 1e-9 && std::abs(B) > 1e-9 && (slope > 0) != (B > 0))
            return false;
    }
    return true;
}

// --- criterion 4 -----------------------------------------------------------

bool crit4(std::string&) {
    std::mt19937_64 rng(1004);
    for (int i = 0; i < 1000; ++i) {
        auto s = find_equilibria(kAdd, draw_params(rng), 400);
        if (s.interior_count_upper_half > 2) return false;
    }
    return true;
}

// --- criterion 5 -----------------------------------------------------------

bool crit5(std::string&) {
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int used = 0;
    while (used < 200) {
        ModelParams p(2 + 8 * u(rng), 1, 0.1 + 0.9 * u(rng), 0.05 + 0.9 * u(rng),
                      0.05 + 0.9 * u(rng));
        double z = 0.51 + 0.47 * u(rng);
        LambdaStar ls{};
        try {
            ls = lambda_star(p, z);
        } catch (const AsymptoteError&) {
            continue;
        }
        if (!ls.admissible || ls.value <= 0) continue;
        ++used;
        ModelParams q(p.sigma, ls.value, p.gamma, p.b, p.phi);
        if (std::abs(delta_v(kAdd, q, z)) > 1e-9) return false;
        double slope = delta_v_prime(kAdd, q, z, DerivMethod::Analytic);
        if (std::abs(slope) < 1e-9) continue;  // marginal band
        Stability st = asymmetric_stability(p, z);
        if (st == Stability::Stable && slope > 0) return false;
        if (st == Stability::Unstable && slope < 0) return false;
    }
    return true;
}

// --- criterion 6 -----------------------------------------------------------

bool crit6(std::string&) {
    std::mt19937_64 rng(1006);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        ModelParams p = draw_params(rng);
        double z = 0.02 + 0.96 * u(rng);
        double an = delta_v_prime(kAdd, p, z, DerivMethod::Analytic);
        double fd = delta_v_prime(kAdd, p, z, DerivMethod::FiniteDifference);
        if (std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-8}) > 1e-6)
            return false;
        double zb = 0.51 + 0.48 * u(rng);
        double db = d_delta_v_db(p, zb);
        double h = 1e-6;
        double db_fd = (delta_v(kAdd, p.with_b(p.b + h), zb) -
                        delta_v(kAdd, p.with_b(p.b - h), zb)) /
                       (2 * h);
        if (std::abs(db - db_fd) / std::max({std::abs(db), std::abs(db_fd), 1e-8}) >
            1e-6)
            return false;
        if (zb < 0.99 && db <= 0.0) return false;
    }
    return true;
}

// --- criterion 7 -----------------------------------------------------------

bool crit7(std::string& note) {
    struct Case {
        ModelParams p;
        std::string label_prefix;
    };
    // The printed transition-scenario parameter lists use the spillover scale
    // at its upper boundary value 1, where direct evaluation shows the break
    // condition never turns positive and the even split stays stable for all
    // phi (the break-existence window is empty there).  The figures are
    // reproduced just inside the window, at 0.9; both readings are checked.
    std::vector<Case> cases = {
        {ModelParams(8, 2, 0.9, 0.33, 0.5), "scenario (i)"},
        {ModelParams(8, 2, 0.9, 0.338, 0.5), "scenario (ii)"},
        {ModelParams(8, 2, 0.9, 0.339, 0.5), "scenario (iii)"},
        {ModelParams(8, 2, 0.9, 0.35, 0.5), "scenario (iv)"},
        {ModelParams(8, 2, 1, 0.55, 0.5), "scenario (v)"},
        {ModelParams(8, 4, 1, 0.55, 0.5), "scenario (vi)"},
        {ModelParams(8, 1, 0.9, 0.1405, 0.5),
         "detached agglomeration branch with locational hysteresis"},
        {ModelParams(8, 1, 0.9, 0.15, 0.5),
         "smooth agglomeration then discontinuous re-dispersion with hysteresis"},
    };
    bool ok = true;
    for (const auto& c : cases) {
        auto d = sweep(kAdd, c.p, SweptParameter::Phi, 1e-4, 0.9999, 300, 1500);
        auto cls = classify_scenario(d);
        if (cls.label.rfind(c.label_prefix, 0) != 0) {
            std::fprintf(stderr, "  criterion 7: b=%g gave \"%s\"\n", c.p.b,
                         cls.label.c_str());
            ok = false;
        }
        if (c.label_prefix == "scenario (iii)") {
            // The fold terminating the delayed asymmetric branch lies above
            // the second break point.
            auto bp = break_points(c.p);
            bool fold = false;
            for (const auto& e : d.events)
                if (e.kind == EventKind::LimitPoint && e.z > 0.8 &&
                    e.param > bp.phi_b2 && e.param < 1.0)
                    fold = true;
            ok &= fold;
        }
        if (c.p.b == 0.15) {
            auto hw = hysteresis_windows(d);
            auto bp = break_points(c.p);
            auto sp = sustain_points(c.p);
            ok &= hw.size() == 1 && sp.phi_s.size() == 2 &&
                  std::abs(hw[0].param_lo - bp.phi_b2) < 2e-3 &&
                  std::abs(hw[0].param_hi - sp.phi_s[1]) < 2e-3;
        }
    }
    // The printed boundary-value tuples: even split stable throughout.
    for (double b : {0.33, 0.338, 0.339, 0.35}) {
        ModelParams p(8, 2, 1, b, 0.5);
        auto d = sweep(kAdd, p, SweptParameter::Phi, 1e-4, 0.9999, 150, 1000);
        ok &= classify_scenario(d).label == "symmetric dispersion stable throughout";
    }
    note = "scenarios (i)-(iv) evaluated at spillover scale 0.9 (the printed "
           "value 1 sits on the boundary of the break-existence window, where "
           "the even split is verified stable for every phi)";
    return ok;
}

// --- criterion 8 -----------------------------------------------------------

bool crit8(std::string& note) {
    bool ok = true;
    std::mt19937_64 rng(1008);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Corner differential and the impossibility of full agglomeration.
    for (int i = 0; i < 100; ++i) {
        ModelParams p = draw_params(rng);
        double expect = p.mu * std::log(p.phi) / (p.sigma - 1.0);
        if (std::abs(delta_v(kCD, p, 1.0) - expect) > 1e-12) ok = false;
        if (expect >= 0) ok = false;
    }
    for (double phi : {0.05, 0.3, 0.7, 0.95}) {
        auto s = find_equilibria(kCD, ModelParams(8, 4, 1, 0.6, phi), 1000);
        if (has_stable(s, EquilibriumKind::Agglomeration)) ok = false;
    }
    // Break points coincide with the additive closed form.
    for (int i = 0; i < 100; ++i) {
        ModelParams p = draw_params(rng);
        auto cd = general_break_points(kCD, p);
        auto add = general_break_points(kAdd, p);
        if (std::abs(cd.phi_b1 - add.phi_b1) > 1e-10 * std::abs(add.phi_b1) ||
            std::abs(cd.phi_b2 - add.phi_b2) > 1e-10 * std::abs(add.phi_b2))
            ok = false;
        auto e18 = break_points(p);
        if (std::isfinite(e18.phi_b1) &&
            std::abs(add.phi_b1 - e18.phi_b1) > 1e-10 * (1 + std::abs(e18.phi_b1)))
            ok = false;
    }
    // The six qualitative panels.
    auto panel = [&](double b) {
        ModelParams p(8, 4, 1, b, 0.5);
        auto d = sweep(kCD, p, SweptParameter::Phi, 1e-4, 0.9999, 300, 1500);
        return classify_scenario(d).label;
    };
    ok &= panel(0.10) == "symmetric dispersion stable throughout";
    ok &= panel(0.44) == "symmetric dispersion stable throughout";
    ok &= panel(0.45) ==
          "symmetric dispersion stable outside an interior window with no stable "
          "equilibria";
    ok &= panel(0.50) == "subcritical break: no stable equilibria beyond the break point";
    ok &= panel(0.65) ==
          "subcritical break: asymmetric phase then no stable equilibria at high "
          "integration";
    ok &= panel(0.75) == "no stable equilibria except at vanishing trade frictions";
    note = "at b=0.75 a stable asymmetric sliver survives below phi ~ 7e-4; "
           "'no stable equilibria' holds on the rest of (0,1)";
    return ok;
}

// --- criterion 9 -----------------------------------------------------------

bool crit9(std::string& note) {
    ModelParams p07(8, 4, 1, 0.7, 0.3);
    ModelParams p09(8, 4, 1, 0.9, 0.3);
    auto b07 = break_points(p07);
    auto b09 = break_points(p09);
    auto c07 = pitchfork_classify(p07, b07.phi_b1);
    auto c09 = pitchfork_classify(p09, b09.phi_b1);
    bool ok = c07.type == PitchforkType::Supercritical &&
              c09.type == PitchforkType::Supercritical && b09.phi_b1 < b07.phi_b1;
    // Branch emergence on the correct side: the break point sits below the
    // admissible range, so a stable asymmetric pair already exists at small
    // phi for both weights.
    for (const ModelParams& p : {p07, p09}) {
        auto s = find_equilibria(kAdd, p.with_phi(0.02), 2000);
        ok &= has_stable(s, EquilibriumKind::AsymmetricDispersion) &&
              !has_stable(s, EquilibriumKind::SymmetricDispersion);
    }
    note = "both first break points fall below phi = 0: the stable asymmetric "
           "branch occupies the whole low-integration range";
    return ok;
}

// --- criterion 10 ----------------------------------------------------------

bool crit10(std::string&) {
    std::mt19937_64 rng(1010);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        ModelParams p(2 + 8 * u(rng), 0.5 + 4 * u(rng), 0.1 + 0.9 * u(rng),
                      0.5 + 0.49 * u(rng) + 1e-9, 0.3);
        const InnovationSpec& spec = (i % 2 == 0) ? kAdd : kCD;
        auto g = general_break_points(spec, p);
        if (g.g_prime_half <= 0) return false;
        if (g.b2_in_range) return false;
    }
    return true;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "equilibrium sets and stability across the five integration levels", crit1},
        {2, "break/sustain back-substitution and independent bisection", crit2},
        {3, "corner and even-split sign identities", crit3},
        {4, "at most two interior equilibria in the upper half", crit4},
        {5, "inverse equilibrium curve consistency and stability agreement", crit5},
        {6, "closed-form derivatives against finite differences", crit6},
        {7, "transition-scenario taxonomy over the eight fixture configs", crit7},
        {8, "multiplicative-spec suite and the six qualitative panels", crit8},
        {9, "pitchfork criticality and leftward shift", crit9},
        {10, "no complete re-dispersion under positive even-split slope", crit10},
    };
    bool all_ok = true;
    for (auto& c : criteria) {
        std::string note;
        bool ok = false;
        try {
            ok = c.run(note);
        } catch (const std::exception& e) {
            note = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2d: %s - %s\n", c.number, ok ? "PASS" : "FAIL",
                    c.title.c_str());
        if (!note.empty()) std::printf("              note: %s\n", note.c_str());
        all_ok &= ok;
    }
    std::printf(all_ok ? "all criteria satisfied\n" : "criteria failures present\n");
    return all_ok ? 0 : 1;
}
