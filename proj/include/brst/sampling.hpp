#ifndef BRST_SAMPLING_HPP
#define BRST_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "brst/poly.hpp"
#include "brst/sp2.hpp"

namespace brst {

/// splitmix64: tiny, seeded, bit-stable across platforms.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform in [0, n).
    uint64_t below(uint64_t n) { return n ? next() % n : 0; }
    int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1))); }

    /// Bounded-height nonzero rational.
    Rat rat() {
        int num = 0;
        while (num == 0) num = range(-9, 9);
        int den = range(1, 9);
        Rat q(num, den);
        q.canonicalize();
        return q;
    }
    Rat ratMaybeZero() {
        if (below(6) == 0) return Rat(0);
        return rat();
    }

  private:
    uint64_t state_;
};

/// Random polynomial over the given variables: up to `terms` monomials of
/// degree <= maxDeg (odd variables squarefree by construction).
inline GradedPoly randomPoly(const Catalog& cat, const std::vector<VarId>& vars, Rng& rng,
                             int terms, int maxDeg) {
    GradedPoly p(&cat);
    for (int i = 0; i < terms; ++i) {
        int deg = rng.range(0, maxDeg);
        GradedPoly mono = GradedPoly::constant(&cat, rng.rat());
        for (int d = 0; d < deg; ++d) {
            VarId v = vars[static_cast<size_t>(rng.below(vars.size()))];
            mono *= GradedPoly::variable(&cat, v);
            if (mono.isZero()) break;
        }
        p += mono;
    }
    return p;
}

/// Homogeneous-parity sample (may be zero; callers retry).
inline GradedPoly randomHomogeneous(const Catalog& cat, const std::vector<VarId>& vars, Rng& rng,
                                    int terms, int maxDeg, int parity) {
    return randomPoly(cat, vars, rng, terms, maxDeg).parityPart(parity);
}

inline Sp2Tensor randomTensor(const Catalog& cat, const std::vector<VarId>& vars, Rng& rng,
                              int rank, int terms, int maxDeg, int parity) {
    Sp2Tensor x(&cat, rank);
    for (int t = 0; t <= rank; ++t)
        x.byT(t) = randomHomogeneous(cat, vars, rng, terms, maxDeg, parity);
    return x;
}

} // namespace brst

#endif
