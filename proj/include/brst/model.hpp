#ifndef BRST_MODEL_HPP
#define BRST_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "brst/poly.hpp"
#include "brst/sp2.hpp"

namespace brst {

/// One reducibility stage: the matrix Z^{alpha_k}_{alpha_{k+1}} and the
/// declared parities of the stage-(k+1) index family.
struct Stage {
    int size = 0;                 // m_{k+1}
    std::vector<int> parity;      // per alpha_{k+1}
    std::vector<std::vector<GradedPoly>> Z;  // m_k rows x m_{k+1} cols
};

/// A-functions A^{beta0 alpha_k}_{alpha_{k+2}} for one k.
struct AFunctions {
    int k = 0;
    // A[b0][ak][ak2]
    std::vector<std::vector<std::vector<GradedPoly>>> A;
};

struct UserSplit {
    std::vector<std::vector<int>> A;       // A[k], k = 1..L (A[0] derived, index 0 unused)
    std::vector<std::vector<int>> aprime;  // aprime[k], k = 0..L-1 (pivot rows)
    // Zinv[k] supplied for k = 1..L: |A_k| x |A_k| polynomial inverse
    std::vector<std::vector<std::vector<GradedPoly>>> Zinv;
};

/// Constraint system: original pairs, constraints T, reducibility data,
/// optional structure functions and regularity functions.
struct Model {
    int m = 0;                       // canonical pairs (p_i, q^i)
    std::vector<int> pairParity;     // per pair
    std::vector<std::string> pName, qName;

    std::vector<GradedPoly> T;       // m0 constraints (built over the catalog)
    std::vector<int> tParity;

    std::vector<Stage> stages;       // k = 0..L-1

    std::vector<AFunctions> aFuns;   // optional, per k
    // U[g0][a0][b0] with {T_a0, T_b0} = sum_g0 T_g0 * U^{g0}_{a0 b0}
    std::optional<std::vector<std::vector<std::vector<GradedPoly>>>> U;

    std::vector<GradedPoly> F;       // optional regularity functions (else default)
    std::map<VarId, Rat> refPoint;   // optional reference point
    std::optional<UserSplit> userSplit;

    std::string sourceText;          // original model file, embedded in artifacts

    int L() const { return static_cast<int>(stages.size()); }
    int mk(int k) const {
        if (k == 0) return static_cast<int>(T.size());
        return stages[static_cast<size_t>(k - 1)].size;
    }
    int stageParity(int k, int a) const {
        if (k == 0) return tParity[static_cast<size_t>(a)];
        return stages[static_cast<size_t>(k - 1)].parity[static_cast<size_t>(a)];
    }
};

/// Model plus its extended-phase-space catalog.  The unprimed sector is
/// built from the declared sizes; constraint polynomials are filled in
/// afterwards (they only use xi variables).  The primed sector is added
/// by PrimedWorld once a split is known.
class Theory {
  public:
    Model model;
    Catalog cat;

    /// Declares sizes first; T/Z/... polynomials are set on `model` after
    /// construction, built over `cat`.
    Theory(int m, std::vector<int> pairParity, std::vector<std::string> pNames,
           std::vector<std::string> qNames, int m0, std::vector<int> tParity,
           std::vector<std::pair<int, std::vector<int>>> stageSizes) {
        model.m = m;
        model.pairParity = std::move(pairParity);
        model.pName = std::move(pNames);
        model.qName = std::move(qNames);
        model.tParity = std::move(tParity);
        model.T.resize(static_cast<size_t>(m0));
        for (auto& [size, par] : stageSizes) {
            Stage st;
            st.size = size;
            st.parity = par;
            model.stages.push_back(std::move(st));
        }
        buildUnprimed();
        for (auto& t : model.T) t = GradedPoly(&cat);
        for (int k = 0; k < model.L(); ++k) {
            auto& st = model.stages[static_cast<size_t>(k)];
            st.Z.assign(static_cast<size_t>(model.mk(k)),
                        std::vector<GradedPoly>(static_cast<size_t>(st.size), GradedPoly(&cat)));
        }
    }

    int L() const { return model.L(); }
    int mk(int k) const { return model.mk(k); }

    GradedPoly poly(const Rat& q) const { return GradedPoly::constant(&cat, q); }
    GradedPoly v(VarId id) const { return GradedPoly::variable(&cat, id); }
    GradedPoly pVar(int i) const { return v(cat.xi(i)); }
    GradedPoly qVar(int i) const { return v(cat.xi(model.m + i)); }

    /// Runs the structural identities; returns human-readable failures.
    std::vector<std::string> validate() const;

  private:
    void buildUnprimed();
};

/// Reduced-form parameter functions: Mred[s][a] is the rank-s tensor
/// M_{alpha_s}, Nred[s][a] the rank-(s-1) tensor N_{alpha_s}, s = 1..L.
struct Omega1Params {
    std::vector<std::vector<Sp2Tensor>> Mred, Nred;  // index 0 unused

    static Omega1Params zeros(const Theory& th) {
        Omega1Params p;
        int L = th.L();
        p.Mred.resize(static_cast<size_t>(L) + 1);
        p.Nred.resize(static_cast<size_t>(L) + 1);
        for (int s = 1; s <= L; ++s) {
            p.Mred[static_cast<size_t>(s)].assign(static_cast<size_t>(th.mk(s)),
                                                  Sp2Tensor(&th.cat, s));
            p.Nred[static_cast<size_t>(s)].assign(static_cast<size_t>(th.mk(s)),
                                                  Sp2Tensor(&th.cat, s - 1));
        }
        return p;
    }

    bool operator==(const Omega1Params& o) const { return Mred == o.Mred && Nred == o.Nred; }
    bool operator!=(const Omega1Params& o) const { return !(*this == o); }

    bool isZero() const {
        for (const auto& fam : Mred)
            for (const auto& t : fam)
                if (!t.isZero()) return false;
        for (const auto& fam : Nred)
            for (const auto& t : fam)
                if (!t.isZero()) return false;
        return true;
    }

    /// Grading and dependency-restriction checks; names the violation.
    std::vector<std::string> validate(const Theory& th) const;
};

} // namespace brst

#endif
