#include "geobif/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "geobif/errors.hpp"
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace geobif {

namespace {

constexpr double kParamEps = 1e-4;          // model degenerates at phi,b in {0,1}
constexpr double kBoundaryResolution = 1e-7;  // regime boundaries localized to this
constexpr double kLinkThreshold = 0.08;     // max |dz| for branch continuation
constexpr double kAmbiguityThreshold = 1e-3;

ModelParams with_swept(const ModelParams& base, SweptParameter swept, double p) {
    return swept == SweptParameter::Phi ? base.with_phi(p) : base.with_b(p);
}

struct GridPoint {
    double p;
    EquilibriumSet set;
    std::string signature;  // stable-set label + interior count
    std::string stable_set;
};

std::string stable_label(const EquilibriumSet& set) {
    std::set<std::string> kinds;
    for (const auto& e : set.equilibria) {
        if (e.stability != Stability::Stable) continue;
        switch (e.kind) {
            case EquilibriumKind::SymmetricDispersion: kinds.insert("sym"); break;
            case EquilibriumKind::AsymmetricDispersion: kinds.insert("asym"); break;
            case EquilibriumKind::Agglomeration: kinds.insert("agg"); break;
        }
    }
    if (kinds.empty()) return "none";
    std::string out;
    for (const auto& k : kinds) {
        if (!out.empty()) out += "+";
        out += k;
    }
    return out;
}

GridPoint make_point(const InnovationSpec& spec, const ModelParams& base,
                     SweptParameter swept, double p, int eq_grid) {
    GridPoint gp;
    gp.p = p;
    gp.set = find_equilibria(spec, with_swept(base, swept, p), eq_grid);
    gp.stable_set = stable_label(gp.set);
    gp.signature = gp.stable_set + "#" + std::to_string(gp.set.interior_count_upper_half);
    return gp;
}

/// Damped Newton on F(z,p) = (delta_v, delta_v') from a fold seed.
struct FoldSolution {
    double z, p;
    double res_v, res_vp;
    bool converged;
};

FoldSolution polish_fold(const InnovationSpec& spec, const ModelParams& base,
                         SweptParameter swept, double z0, double p0,
                         double p_lo, double p_hi) {
    auto F = [&](double z, double p, double& f1, double& f2) {
        ModelParams mp = with_swept(base, swept, p);
        f1 = delta_v(spec, mp, z);
        f2 = delta_v_prime(spec, mp, z, DerivMethod::FiniteDifference);
    };
    double z = z0, p = p0;
    double f1, f2;
    F(z, p, f1, f2);
    double best = std::abs(f1) + std::abs(f2);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(f1) < 1e-11 && std::abs(f2) < 1e-9)
            return {z, p, std::abs(f1), std::abs(f2), true};
        const double hz = 1e-7, hp = 1e-7;
        double g1, g2, h1, h2;
        F(z + hz, p, g1, g2);
        F(z, p + hp, h1, h2);
        double j11 = (g1 - f1) / hz, j12 = (h1 - f1) / hp;
        double j21 = (g2 - f2) / hz, j22 = (h2 - f2) / hp;
        double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;
        double dz = -(j22 * f1 - j12 * f2) / det;
        double dp = -(-j21 * f1 + j11 * f2) / det;
        // Damping: halve the step until the residual shrinks.
        double step = 1.0;
        bool accepted = false;
        for (int cut = 0; cut < 25; ++cut) {
            double zn = std::clamp(z + step * dz, 0.5 + 1e-6, 1.0 - 1e-9);
            double pn = std::clamp(p + step * dp, p_lo, p_hi);
            double t1, t2;
            F(zn, pn, t1, t2);
            double norm = std::abs(t1) + std::abs(t2);
            if (norm < best) {
                z = zn;
                p = pn;
                f1 = t1;
                f2 = t2;
                best = norm;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    return {z, p, std::abs(f1), std::abs(f2), std::abs(f1) < 1e-8 && std::abs(f2) < 1e-8};
}

struct ActiveBranch {
    int branch_index;
    double last_z;
};

}  // namespace

BifurcationDiagram sweep(const InnovationSpec& spec, const ModelParams& base,
                         SweptParameter swept, double lo, double hi, int n_grid,
                         int eq_grid) {
    if (n_grid < 50) throw std::invalid_argument("n_grid must be at least 50");
    lo = std::max(lo, kParamEps);
    hi = std::min(hi, 1.0 - kParamEps);
    if (!(lo < hi)) throw std::invalid_argument("sweep range is empty after clamping");

    BifurcationDiagram d;
    d.swept = swept;
    d.base = base;
    d.spec_kind = spec.kind();

    // Uniform pass.
    std::vector<GridPoint> pts;
    pts.reserve(static_cast<size_t>(n_grid));
    for (int k = 0; k < n_grid; ++k) {
        double p = lo + (hi - lo) * static_cast<double>(k) / (n_grid - 1);
        pts.push_back(make_point(spec, base, swept, p, eq_grid));
    }
    for (const auto& gp : pts)
        for (const auto& w : gp.set.warnings)
            d.warnings.push_back("p=" + std::to_string(gp.p) + ": " + w);

    // Localize every signature change by bisection, inserting the probes so
    // branches stay well sampled near events.
    for (size_t i = 0; i + 1 < pts.size();) {
        if (pts[i].signature == pts[i + 1].signature ||
            pts[i + 1].p - pts[i].p <= kBoundaryResolution) {
            ++i;
            continue;
        }
        double mid = 0.5 * (pts[i].p + pts[i + 1].p);
        pts.insert(pts.begin() + static_cast<long>(i) + 1,
                   make_point(spec, base, swept, mid, eq_grid));
    }

    d.grid.reserve(pts.size());
    for (const auto& gp : pts) d.grid.push_back(gp.p);

    // --- Branch assembly -------------------------------------------------
    std::vector<ActiveBranch> active;
    auto new_branch = [&](EquilibriumKind kind, const Equilibrium& e, double p) {
        Branch br;
        br.id = static_cast<int>(d.branches.size());
        br.kind = kind;
        br.points.push_back({p, e.z_star, e.stability});
        d.branches.push_back(std::move(br));
        return d.branches.back().id;
    };

    for (size_t i = 0; i < pts.size(); ++i) {
        const auto& gp = pts[i];
        std::vector<ActiveBranch> next_active;
        std::vector<bool> eq_taken(gp.set.equilibria.size(), false);
        std::vector<bool> branch_taken(active.size(), false);

        // Candidate (distance, branch, equilibrium) matches within kind.
        struct Cand {
            double dist;
            size_t bi, ei;
        };
        std::vector<Cand> cands;
        for (size_t bi = 0; bi < active.size(); ++bi) {
            const Branch& br = d.branches[static_cast<size_t>(active[bi].branch_index)];
            for (size_t ei = 0; ei < gp.set.equilibria.size(); ++ei) {
                const auto& e = gp.set.equilibria[ei];
                if (e.kind != br.kind) continue;
                double dist = std::abs(e.z_star - active[bi].last_z);
                if (dist <= kLinkThreshold) cands.push_back({dist, bi, ei});
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
        for (size_t ci = 0; ci < cands.size(); ++ci) {
            const auto& c = cands[ci];
            if (branch_taken[c.bi] || eq_taken[c.ei]) continue;
            // Ambiguity: another unmatched branch nearly as close.
            for (size_t cj = ci + 1; cj < cands.size(); ++cj) {
                if (cands[cj].ei == c.ei && cands[cj].bi != c.bi &&
                    !branch_taken[cands[cj].bi] &&
                    cands[cj].dist - c.dist < kAmbiguityThreshold &&
                    cands[cj].dist - c.dist < 1e-4) {
                    d.warnings.push_back("LinkingAmbiguity at p=" + std::to_string(gp.p));
                    break;
                }
            }
            branch_taken[c.bi] = true;
            eq_taken[c.ei] = true;
            const auto& e = gp.set.equilibria[c.ei];
            Branch& br = d.branches[static_cast<size_t>(active[c.bi].branch_index)];
            br.points.push_back({gp.p, e.z_star, e.stability});
            next_active.push_back({active[c.bi].branch_index, e.z_star});
        }
        for (size_t bi = 0; bi < active.size(); ++bi) {
            if (branch_taken[bi]) continue;
            const Branch& br = d.branches[static_cast<size_t>(active[bi].branch_index)];
            if (br.kind == EquilibriumKind::AsymmetricDispersion && gp.p < hi - 1e-12)
                d.events.push_back({EventKind::BranchDisappears, pts[i - 1].p,
                                    br.points.back().z, std::nullopt,
                                    "asymmetric branch ends"});
        }
        for (size_t ei = 0; ei < gp.set.equilibria.size(); ++ei) {
            if (eq_taken[ei]) continue;
            const auto& e = gp.set.equilibria[ei];
            int id = new_branch(e.kind, e, gp.p);
            next_active.push_back({id, e.z_star});
            if (e.kind == EquilibriumKind::AsymmetricDispersion && i > 0)
                d.events.push_back({EventKind::BranchAppears, gp.p, e.z_star,
                                    std::nullopt, "asymmetric branch appears"});
        }
        active = std::move(next_active);
    }

    // --- Regime segments --------------------------------------------------
    for (size_t i = 0; i < pts.size(); ++i) {
        if (d.regimes.empty() || d.regimes.back().stable_set != pts[i].stable_set)
            d.regimes.push_back({pts[i].stable_set, pts[i].p, pts[i].p});
        else
            d.regimes.back().param_hi = pts[i].p;
    }
    // At an exact transition the boundary bisection can land on sliver
    // regimes of the localization width (e.g. an asymmetric branch meeting
    // the corner); these are artifacts, not phases.
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < d.regimes.size(); ++i) {
            if (d.regimes.size() > 1 &&
                d.regimes[i].param_hi - d.regimes[i].param_lo < 1e-6) {
                d.regimes.erase(d.regimes.begin() + static_cast<long>(i));
                changed = true;
                break;
            }
        }
        for (size_t i = 0; i + 1 < d.regimes.size(); ++i) {
            if (d.regimes[i].stable_set == d.regimes[i + 1].stable_set) {
                d.regimes[i].param_hi = d.regimes[i + 1].param_hi;
                d.regimes.erase(d.regimes.begin() + static_cast<long>(i) + 1);
                changed = true;
                break;
            }
        }
    }

    // --- Analytic events --------------------------------------------------
    if (spec.kind() == GKind::Additive) {
        if (swept == SweptParameter::Phi) {
            BreakPoints bp = break_points(base);
            for (double phi_b : {bp.phi_b1, bp.phi_b2}) {
                if (std::isnan(phi_b) || phi_b < lo || phi_b > hi) continue;
                std::optional<PitchforkType> crit;
                try {
                    crit = pitchfork_classify(base, phi_b).type;
                } catch (const NotABreakPointError&) {
                }
                d.events.push_back({EventKind::BreakPoint, phi_b, 0.5, crit,
                                    "symmetric dispersion changes stability"});
            }
            for (double phi_s : sustain_points(base).phi_s)
                if (phi_s >= lo && phi_s <= hi)
                    d.events.push_back({EventKind::SustainPoint, phi_s, 1.0,
                                        std::nullopt,
                                        "agglomeration changes stability"});
        } else {
            // Both conditions are linear in b at fixed phi.
            double phi = base.phi;
            double bc_slope = base.gamma * (base.sigma - 1.0) * 2.0 *
                              (base.lambda + 1.0) * (phi + 1.0) * (phi + 1.0);
            double bc0 = break_condition(base.with_b(0.5), phi) - bc_slope * 0.5;
            double b_break = -bc0 / bc_slope;
            if (b_break >= lo && b_break <= hi) {
                std::optional<PitchforkType> crit;
                try {
                    crit = pitchfork_classify(base.with_b(b_break), phi).type;
                } catch (const NotABreakPointError&) {
                }
                d.events.push_back({EventKind::BreakPoint, b_break, 0.5, crit,
                                    "symmetric dispersion changes stability"});
            }
            double b_s = agglomeration_b_thresholds(base, phi).b_s;
            if (b_s >= lo && b_s <= hi)
                d.events.push_back({EventKind::SustainPoint, b_s, 1.0, std::nullopt,
                                    "agglomeration changes stability"});
        }
    } else if (swept == SweptParameter::Phi) {
        GeneralBreakPoints gbp = general_break_points(spec, base);
        if (gbp.phi_b1 >= lo && gbp.phi_b1 <= hi)
            d.events.push_back({EventKind::BreakPoint, gbp.phi_b1, 0.5, std::nullopt,
                                "symmetric dispersion changes stability"});
        if (gbp.b2_in_range && gbp.phi_b2 >= lo && gbp.phi_b2 <= hi)
            d.events.push_back({EventKind::BreakPoint, gbp.phi_b2, 0.5, std::nullopt,
                                "symmetric dispersion changes stability"});
    }

    // --- Limit points from fold seeds -------------------------------------
    std::vector<std::pair<double, double>> seeds;  // (z, p)
    for (const Branch& br : d.branches) {
        if (br.kind != EquilibriumKind::AsymmetricDispersion) continue;
        for (size_t k = 0; k + 2 < br.points.size(); ++k) {
            double d1 = br.points[k + 1].z - br.points[k].z;
            double d2 = br.points[k + 2].z - br.points[k + 1].z;
            if (d1 * d2 < 0.0)
                seeds.emplace_back(br.points[k + 1].z, br.points[k + 1].param);
        }
        double z_first = br.points.front().z, z_last = br.points.back().z;
        double zf = z_first > 0.5 ? z_first : 1.0 - z_first;
        double zl = z_last > 0.5 ? z_last : 1.0 - z_last;
        if (br.points.front().param > lo + 1e-12 && zf > 0.52 && zf < 0.995)
            seeds.emplace_back(zf, br.points.front().param);
        if (br.points.back().param < hi - 1e-12 && zl > 0.52 && zl < 0.995)
            seeds.emplace_back(zl, br.points.back().param);
    }
    for (const auto& [z0, p0] : seeds) {
        FoldSolution sol = polish_fold(spec, base, swept, z0, p0, lo, hi);
        if (!sol.converged || sol.res_v > 1e-8 || sol.res_vp > 1e-8) continue;
        // A fold collapsing onto z = 1/2 is the pitchfork itself, not a
        // saddle-node of the asymmetric branch.
        if (sol.z < 0.505 || sol.z > 1.0 - 1e-7) continue;
        bool dup = false;
        for (const Event& e : d.events)
            if (e.kind == EventKind::LimitPoint && std::abs(e.param - sol.p) < 1e-6 &&
                std::abs(e.z - sol.z) < 1e-4)
                dup = true;
        if (!dup)
            d.events.push_back({EventKind::LimitPoint, sol.p, sol.z, std::nullopt,
                                "two asymmetric equilibria coalesce"});
    }

    std::sort(d.events.begin(), d.events.end(),
              [](const Event& a, const Event& b) { return a.param < b.param; });
    return d;
}

namespace {

bool contains(const std::vector<std::string>& seq, const std::string& s) {
    return std::find(seq.begin(), seq.end(), s) != seq.end();
}

bool has_kind(const std::string& regime, const std::string& kind) {
    std::stringstream ss(regime);
    std::string tok;
    while (std::getline(ss, tok, '+'))
        if (tok == kind) return true;
    return false;
}

/// z of the stable asymmetric branch just below the upper end of the last
/// regime containing a stable asymmetric equilibrium; 0.5 when none.
double asym_z_before_redispersion(const BifurcationDiagram& d) {
    double p_end = -1.0;
    for (const auto& seg : d.regimes)
        if (has_kind(seg.stable_set, "asym")) p_end = seg.param_hi;
    if (p_end < 0.0) return 0.5;
    // z of the stable point closest to the regime end, so the verdict does
    // not depend on how the grid happens to approach the boundary.
    double best = 0.5, best_param = -1.0;
    for (const auto& br : d.branches) {
        if (br.kind != EquilibriumKind::AsymmetricDispersion) continue;
        for (const auto& pt : br.points) {
            if (pt.param > p_end + 1e-9) continue;
            if (pt.stability != Stability::Stable) continue;
            if (pt.param > best_param) {
                best_param = pt.param;
                best = pt.z > 0.5 ? pt.z : 1.0 - pt.z;
            }
        }
    }
    return best;
}

}  // namespace

ScenarioClassification classify_scenario(const BifurcationDiagram& d) {
    ScenarioClassification out;
    for (const auto& seg : d.regimes) out.regime_sequence.push_back(seg.stable_set);
    const auto& seq = out.regime_sequence;

    auto add_limit_points = [&] {
        for (const auto& e : d.events)
            if (e.kind == EventKind::LimitPoint)
                out.features.push_back("limit point at p=" + std::to_string(e.param) +
                                       ", z=" + std::to_string(e.z));
    };
    auto add_hysteresis = [&] {
        for (const auto& w : hysteresis_windows(d))
            out.features.push_back("hysteresis window (" + std::to_string(w.param_lo) +
                                   ", " + std::to_string(w.param_hi) + ")");
    };

    bool any_agg = false, any_asym = false, any_none = false, all_sym = !seq.empty();
    for (const auto& r : seq) {
        if (has_kind(r, "agg")) any_agg = true;
        if (has_kind(r, "asym")) any_asym = true;
        if (r == "none") any_none = true;
        if (r != "sym") all_sym = false;
    }
    bool starts_sym = !seq.empty() && seq.front() == "sym";
    bool ends_sym = !seq.empty() && seq.back() == "sym";
    bool ends_agg = !seq.empty() && has_kind(seq.back(), "agg");
    bool starts_asym_only = !seq.empty() && seq.front() == "asym";

    // Position of the last agglomeration regime, and whether a stable
    // asymmetric regime reappears after it.
    int last_agg = -1;
    for (size_t i = 0; i < seq.size(); ++i)
        if (has_kind(seq[i], "agg")) last_agg = static_cast<int>(i);
    bool asym_after_agg = false;
    if (last_agg >= 0)
        for (size_t i = static_cast<size_t>(last_agg) + 1; i < seq.size(); ++i)
            if (has_kind(seq[i], "asym")) asym_after_agg = true;

    double z_jump = asym_z_before_redispersion(d);
    bool discontinuous = z_jump > 0.55;

    out.matched = true;
    if (seq.empty()) {
        out.matched = false;
        out.label = "unclassified: empty diagram";
    } else if (std::all_of(seq.begin(), seq.end(),
                           [](const std::string& r) { return r == "none"; })) {
        out.label = "no stable equilibria";
    } else if (all_sym) {
        out.label = "symmetric dispersion stable throughout";
    } else if (starts_sym && ends_sym && !any_agg && any_asym && !any_none) {
        if (!discontinuous) {
            out.label = "scenario (i): smooth bubble re-dispersion";
            out.features.push_back("asymmetric phase opens and closes smoothly");
        } else {
            out.label =
                "scenario (ii): discontinuous re-dispersion from asymmetric equilibrium";
            out.features.push_back("stable asymmetric branch vanishes at z=" +
                                   std::to_string(z_jump));
            add_limit_points();
        }
        add_hysteresis();
    } else if (starts_sym && ends_sym && any_agg && asym_after_agg) {
        out.label =
            "scenario (iii): interior agglomeration window with discontinuous "
            "re-dispersion";
        add_limit_points();
        add_hysteresis();
    } else if (starts_sym && ends_sym && any_agg && !asym_after_agg) {
        out.label =
            "scenario (iv): sudden re-dispersion from full agglomeration to "
            "symmetric dispersion";
        add_hysteresis();
    } else if (starts_asym_only && ends_agg) {
        out.label =
            "scenario (v): no-black-hole condition violated; asymmetric dispersion "
            "then full agglomeration";
    } else if (starts_sym && ends_agg && any_asym && !any_none) {
        out.label = "scenario (vi): supercritical pitchfork to agglomeration";
        for (const auto& e : d.events)
            if (e.kind == EventKind::BreakPoint && e.criticality)
                out.features.push_back(
                    "break point at p=" + std::to_string(e.param) + " is " +
                    (*e.criticality == PitchforkType::Supercritical ? "supercritical"
                     : *e.criticality == PitchforkType::Subcritical ? "subcritical"
                                                                    : "degenerate"));
    } else if (starts_asym_only && ends_sym && any_agg && last_agg >= 0 &&
               !has_kind(seq[1 < seq.size() ? 1 : 0], "agg")) {
        // Agglomeration confined to an interior window never touched by the
        // asymmetric branch: a detached agglomeration branch.
        bool agg_interior = !has_kind(seq.back(), "agg") && !has_kind(seq.front(), "agg");
        if (agg_interior && contains(seq, "agg+sym")) {
            out.label = "detached agglomeration branch with locational hysteresis";
            add_limit_points();
            add_hysteresis();
        } else {
            out.matched = false;
        }
    } else if (starts_asym_only && ends_sym && any_agg) {
        out.label =
            "smooth agglomeration then discontinuous re-dispersion with hysteresis";
        add_hysteresis();
    } else if (starts_sym && seq.back() == "none" && any_asym) {
        out.label =
            "subcritical break: asymmetric phase then no stable equilibria at high "
            "integration";
        add_limit_points();
    } else if (starts_sym && seq.back() == "none") {
        out.label = "subcritical break: no stable equilibria beyond the break point";
    } else if (starts_sym && ends_sym && any_none) {
        out.label =
            "symmetric dispersion stable outside an interior window with no stable "
            "equilibria";
    } else if (seq.back() == "none" &&
               d.regimes.back().param_hi - d.regimes.back().param_lo >
                   0.98 * (d.regimes.back().param_hi - d.regimes.front().param_lo)) {
        out.label = "no stable equilibria except at vanishing trade frictions";
    } else {
        out.matched = false;
    }
    if (!out.matched && !seq.empty()) {
        std::string raw;
        for (const auto& r : seq) raw += (raw.empty() ? "" : " -> ") + r;
        out.label = "unclassified: " + raw;
    }
    return out;
}

std::vector<HysteresisWindow> hysteresis_windows(const BifurcationDiagram& d) {
    // Count distinct stable equilibria with z in [1/2, 1] at each grid value.
    std::vector<HysteresisWindow> out;
    bool open = false;
    double open_lo = 0.0, last_p = 0.0;
    for (double p : d.grid) {
        int count = 0;
        for (const auto& br : d.branches) {
            for (const auto& pt : br.points) {
                if (std::abs(pt.param - p) > 1e-15) continue;
                if (pt.stability != Stability::Stable) continue;
                if (pt.z >= 0.5 - 1e-15) ++count;
            }
        }
        bool multi = count >= 2;
        if (multi && !open) {
            open = true;
            open_lo = p;
        } else if (!multi && open) {
            open = false;
            out.push_back({open_lo, last_p});
        }
        last_p = p;
    }
    if (open) out.push_back({open_lo, last_p});
    return out;
}

}  // namespace geobif
