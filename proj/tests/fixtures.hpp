#ifndef BRST_TESTS_FIXTURES_HPP
#define BRST_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "brst/io.hpp"
#include "brst/sampling.hpp"

inline brst::LoadedTheory loadFixture(const std::string& name) {
    return brst::parseModelFile(std::string(FIXTURES_DIR) + "/" + name);
}

inline std::string fixtureText(const std::string& name) {
    return brst::readFileOrThrow(std::string(FIXTURES_DIR) + "/" + name);
}

/// All unprimed variables of a theory.
inline std::vector<brst::VarId> unprimedVars(const brst::Theory& th) {
    std::vector<brst::VarId> vs;
    for (brst::VarId v = 0; v < th.cat.size(); ++v)
        if (!th.cat.isPrimedKind(v)) vs.push_back(v);
    return vs;
}

/// Nonzero homogeneous-parity sample, retrying until nonzero.
inline brst::GradedPoly sampleHomogeneous(const brst::Theory& th, const std::vector<brst::VarId>& vars,
                                          brst::Rng& rng, int parity, int terms = 3, int maxDeg = 3) {
    for (int tries = 0; tries < 200; ++tries) {
        brst::GradedPoly p = brst::randomHomogeneous(th.cat, vars, rng, terms, maxDeg, parity);
        if (!p.isZero()) return p;
    }
    throw brst::Error("sampleHomogeneous: could not draw a nonzero sample");
}

#endif
