#ifndef BRST_REDUCTION_HPP
#define BRST_REDUCTION_HPP

#include <vector>

#include "brst/poly.hpp"

namespace brst {

struct ReductionResult {
    GradedPoly remainder;
    std::vector<GradedPoly> quotients;  // one per generator
};

/// Leading (maximal) monomial under the global degree-lex order.
inline const Monomial* leadingMonomial(const GradedPoly& p) {
    if (p.isZero()) return nullptr;
    return &p.terms().rbegin()->first;
}

/// Multivariate division by the given generators in order; remainder has
/// no monomial divisible by any generator's leading monomial.  Plain
/// reduction (the generators are used as given, no completion).
ReductionResult reduceModulo(const GradedPoly& x, const std::vector<GradedPoly>& gens);

} // namespace brst

#endif
