#ifndef GEOBIF_ERRORS_HPP
#define GEOBIF_ERRORS_HPP

#include <stdexcept>

namespace geobif {

struct SpecMismatchError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct AsymptoteError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InvalidEquilibriumError : std::domain_error {
    using std::domain_error::domain_error;
};

struct NotABreakPointError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace geobif

#endif
