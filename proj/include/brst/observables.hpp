#ifndef BRST_OBSERVABLES_HPP
#define BRST_OBSERVABLES_HPP

#include "brst/reduction.hpp"
#include "brst/solver.hpp"

namespace brst {

struct FirstClassCheck {
    bool firstClass = false;
    /// Index of the first constraint whose bracket fails to reduce, with
    /// the remainder as certificate; only set when not first class.
    int failingConstraint = -1;
    GradedPoly remainder;
};

/// True iff every {phi0, T_a} reduces to 0 modulo the ideal generated by
/// the constraints (polynomial reduction, fixed monomial order).
FirstClassCheck checkFirstClass(const Theory& th, const GradedPoly& phi0);

struct ObservableLift {
    GradedPoly phi0;
    GradedPoly K;         // ghost correction, (c,pi)-degree >= 1
    GradedPoly phiPrime;  // phi0 + K
    int cutoff = 3;
    Sp2Tensor residual;   // rank 1: {Omega^a, phiPrime}, exact
    bool residualZeroToCutoff = false;
};

/// Lifts a first-class function to a BRST observable to the given cutoff.
ObservableLift liftObservable(Theory& th, const IndexSplit& split, const ChargeExpansion& charge,
                              const GradedPoly& phi0, int cutoff);

/// L^{-1}: restriction at P' = c = lambda' = pi = 0, mapped back to xi.
GradedPoly restrictObservable(Theory& th, const IndexSplit& split, const Omega1Params& params,
                              const GradedPoly& phiPrime);

struct HomomorphismReport {
    bool bracketEqual = false;
    bool productEqual = false;
};

/// Restriction-homomorphism identities for two lifts over one charge.
HomomorphismReport verifyHomomorphism(Theory& th, const IndexSplit& split,
                                      const ChargeExpansion& charge, const ObservableLift& l1,
                                      const ObservableLift& l2);

} // namespace brst

#endif
