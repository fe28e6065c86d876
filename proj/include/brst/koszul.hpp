#ifndef BRST_KOSZUL_HPP
#define BRST_KOSZUL_HPP

#include "brst/model.hpp"
#include "brst/sp2.hpp"

namespace brst {

/// The Koszul-Tate layer bound to one theory and one parameter set:
/// generator tables for delta, Omega_1 assembly, the operators A and B,
/// and the pieces of the lowest-order master equation.
class KoszulOps {
  public:
    KoszulOps(const Theory& th, const Omega1Params& params);

    const Theory& theory() const { return *th_; }
    const Omega1Params& params() const { return params_; }

    /// delta^a as a generator-table derivation (a = 1,2).
    const Derivation& delta(int a) const { return delta_[a - 1]; }
    const Derivation& deltaFree(int a) const { return deltaFree_[a - 1]; }

    const GradedPoly& omega1(int a) const { return omega1_[a - 1]; }
    Sp2Tensor omega1Tensor() const;

    Sp2Tensor deltaOnScalar(const GradedPoly& x) const;
    /// Unnormalized (plain cyclic sum) lift of delta to tensors.
    Sp2Tensor deltaLift(const Sp2Tensor& x) const;
    /// Normalized lift per the operator-pair definition.
    Sp2Tensor deltaLiftNormalized(const Sp2Tensor& x) const;

    GradedPoly applyA(int a, const GradedPoly& x) const;
    Sp2Tensor operatorA(const GradedPoly& x) const;
    Sp2Tensor liftA(const Sp2Tensor& x) const;  // unnormalized

    GradedPoly applyB(int a, const GradedPoly& x) const;
    Sp2Tensor operatorB(const GradedPoly& x) const;

    Sp2Tensor computeF() const;   // rank 2: {Omega1^a, Omega1^b}_xi
    Sp2Tensor computeQ() const;   // rank 2: free-part residual
    Sp2Tensor computeW() const;   // rank 1: parameter part of Omega1
    /// Left side of the lowest-order master equation; zero iff the
    /// parameters solve it.
    Sp2Tensor lowestResidual() const;
    /// delta^{(a} Omega_1^{b)} computed directly; equals lowestResidual.
    Sp2Tensor ruuResidual() const;

  private:
    void buildTables();
    GradedPoly assemble(const Derivation& d1, const Derivation& d2, int a,
                        bool skipStage0Lambda) const;

    const Theory* th_;
    Omega1Params params_;
    Derivation delta_[2], deltaFree_[2];
    GradedPoly omega1_[2], freeOmega1_[2], vB_[2];
};

/// Omega_1 per the ansatz; wrapper kept close to the operation surface.
Sp2Tensor buildOmega1(const Theory& th, const Omega1Params& params);

/// Closed-form stage-2 parameters for an L=2 theory with A-functions.
Omega1Params closedFormL2Params(const Theory& th);

} // namespace brst

#endif
