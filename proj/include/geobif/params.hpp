#ifndef GEOBIF_PARAMS_HPP
#define GEOBIF_PARAMS_HPP

#include <stdexcept>
#include <string>

namespace geobif {

/// Parameter tuple of the two-region model.  All fields are validated on
/// construction; instances are plain values and safe to copy freely.
struct ModelParams {
    double mu = 1.0;     // utility weight on manufactures, mu > 0
    double sigma = 5.0;  // elasticity of substitution, sigma > 1
    double lambda = 1.0; // mass of immobile workers, lambda > 0
    double gamma = 1.0;  // innovation efficiency, gamma > 0
    double b = 0.5;      // related-variety weight, 0 < b < 1
    double phi = 0.5;    // freeness of trade, 0 < phi < 1

    ModelParams() = default;

    ModelParams(double sigma_, double lambda_, double gamma_, double b_,
                double phi_, double mu_ = 1.0)
        : mu(mu_), sigma(sigma_), lambda(lambda_), gamma(gamma_), b(b_), phi(phi_) {
        validate();
    }

    void validate() const {
        if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
        if (!(sigma > 1.0)) throw std::invalid_argument("sigma must exceed 1");
        if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
        if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("b must lie in (0,1)");
        if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("phi must lie in (0,1)");
    }

    ModelParams with_phi(double phi_) const {
        ModelParams p = *this;
        p.phi = phi_;
        p.validate();
        return p;
    }
    ModelParams with_b(double b_) const {
        ModelParams p = *this;
        p.b = b_;
        p.validate();
        return p;
    }
    ModelParams with_lambda(double lambda_) const {
        ModelParams p = *this;
        p.lambda = lambda_;
        p.validate();
        return p;
    }
};

/// Constants that enter the raw innovation probability but cancel out of the
/// utility differential.  Used only by diagnostic operations.
struct DiagnosticConstants {
    double A;      // aggregate knowledge index, A > 0
    double a;      // variety quality level, a > 1
    double alpha;  // scientists per R&D firm, alpha > 0
    double beta;   // variable labour requirement, beta > 0
    double B_bar;  // numeraire endowment, B_bar > mu

    DiagnosticConstants(double A_, double a_, double alpha_, double beta_, double B_bar_)
        : A(A_), a(a_), alpha(alpha_), beta(beta_), B_bar(B_bar_) {}

    void validate(const ModelParams& params) const {
        if (!(A > 0.0)) throw std::invalid_argument("A must be positive");
        if (!(a > 1.0)) throw std::invalid_argument("a must exceed 1");
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
        if (!(B_bar > params.mu)) throw std::invalid_argument("B_bar must exceed mu");
    }
};

}  // namespace geobif

#endif
