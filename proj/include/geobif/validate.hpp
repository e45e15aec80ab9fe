#ifndef GEOBIF_VALIDATE_HPP
#define GEOBIF_VALIDATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "geobif/innovation.hpp"
#include "geobif/params.hpp"

namespace geobif {

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;  // first failure, or summary counts
};

struct ValidationOptions {
    std::uint64_t seed = 42;
    int n_perturb = 100;
    // Test hook: perturb the closed-form derivative's quartic coefficients so
    // the derivative-agreement check must fail (negative control).
    bool corrupt_quartic = false;
};

/// Cross-validation invariant suite at the given parameter point plus random
/// perturbations.  Checks that do not apply to the supplied spec are skipped.
std::vector<CheckResult> run_validation(const InnovationSpec& spec,
                                        const ModelParams& base,
                                        const ValidationOptions& opts = {});

}  // namespace geobif

#endif
