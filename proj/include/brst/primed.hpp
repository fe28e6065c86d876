#ifndef BRST_PRIMED_HPP
#define BRST_PRIMED_HPP

#include "brst/koszul.hpp"
#include "brst/split.hpp"

namespace brst {

/// The primed coordinate system of an index split: variable families,
/// the exact substitutions both ways, the linear-form delta, the
/// derivations sigma_a, the counting operator N, M = sigma_a delta^a,
/// U, delta^+ = U sigma and the decomposition operator Lambda.
class PrimedWorld {
  public:
    /// Extends the catalog (idempotent), builds both substitution tables
    /// and the delta/sigma generator tables.  Params are needed because
    /// the change of variables involves M/N.
    PrimedWorld(Theory& th, const IndexSplit& split, const Omega1Params& params);

    Theory& theory() const { return *th_; }
    const IndexSplit& split() const { return split_; }

    GradedPoly toPrimed(const GradedPoly& x) const;
    GradedPoly fromPrimed(const GradedPoly& x) const;
    Sp2Tensor toPrimed(const Sp2Tensor& x) const;
    Sp2Tensor fromPrimed(const Sp2Tensor& x) const;

    const Derivation& deltaPrimed(int a) const { return deltaP_[a - 1]; }
    const Derivation& sigma(int a) const { return sigmaP_[a - 1]; }

    Sp2Tensor deltaPrimedLift(const Sp2Tensor& x) const;   // plain cyclic sum
    Sp2Tensor deltaPrimedOnScalar(const GradedPoly& x) const;
    Sp2Tensor sigmaContract(const Sp2Tensor& x) const;     // S^n -> S^{n-1}

    /// Counting operator: multiplies each monomial by its number of
    /// resolution-variable factors.
    GradedPoly opN(const GradedPoly& x) const;
    /// N^power on a monomial basis; power may be negative, which requires
    /// every monomial to contain a resolution variable (membership in V).
    GradedPoly opNpow(const GradedPoly& x, int power) const;
    GradedPoly opM(const GradedPoly& x) const;  // sigma_a delta^a

    bool inV(const GradedPoly& x) const;
    bool inV(const Sp2Tensor& x) const;

    /// U = (nN+M)^{-1} for n >= 1 and the displayed n = 0 formula.
    Sp2Tensor opU(const Sp2Tensor& x) const;
    /// Generalized inverse delta^+ = U sigma.
    Sp2Tensor deltaPlus(const Sp2Tensor& x) const;
    /// Connecting map of the decomposition X = d+ d X + d Lambda d+ X.
    /// On its domain (V) the decomposition holds with Lambda acting as
    /// the identity; validated and returned as such.
    Sp2Tensor lambdaOp(const Sp2Tensor& x) const;

    /// Conjugated scalar operator: toPrimed . f . fromPrimed.
    GradedPoly conjugate(const std::function<GradedPoly(const GradedPoly&)>& f,
                         const GradedPoly& xPrimed) const;

    /// Test hook: corrupts one sigma table entry (identity-suite demo).
    void corruptSigmaForTesting();

    VarId xiPrimeFVar(int i) const { return th_->cat.xiPrimeF(i); }
    VarId xiPrimeAVar(int j) const { return th_->cat.xiPrimeA(j); }

    /// All primed resolution variables plus ghosts (sampling support).
    std::vector<VarId> primedVars() const { return primedVars_; }

  private:
    void ensureVars();
    void buildXiChange();
    void buildTables(const Omega1Params& params);
    void buildDeltaSigma();
    GradedPoly scalarU0(const GradedPoly& x) const;

    Theory* th_;
    IndexSplit split_;
    std::vector<std::optional<GradedPoly>> fwd_, bwd_;
    Derivation deltaP_[2], sigmaP_[2];
    std::vector<VarId> primedVars_;
};

} // namespace brst

#endif
