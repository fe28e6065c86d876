#ifndef BRST_IO_HPP
#define BRST_IO_HPP

#include <iosfwd>
#include <memory>
#include <string>

#include "brst/observables.hpp"
#include "brst/solver.hpp"

namespace brst {

/// Canonical text form: terms in descending monomial order, explicit '*'
/// and '^', rational literals a/b.
std::string printPoly(const GradedPoly& p);

/// Parses the canonical syntax over the catalog's variable names.
GradedPoly parsePoly(const Catalog& cat, const std::string& text);

/// Theory owner returned by the model parser (catalog must outlive polys).
struct LoadedTheory {
    std::unique_ptr<Theory> theory;
    Theory& get() { return *theory; }
};

/// Parses a model file; throws Error with a location-tagged message on
/// syntax problems, and reports failed structural identities.
LoadedTheory parseModelText(const std::string& text, bool validate = true);
LoadedTheory parseModelFile(const std::string& path, bool validate = true);

struct ChargeArtifact {
    std::string modelText;
    int cutoff = 3;
    uint64_t seed = 0;
    ChargeExpansion charge;   // params + pi (+ residual summary flags)
};

std::string writeChargeArtifact(const Theory& th, const ChargeArtifact& art);
/// Re-parses an artifact; rebuilds the embedded model and the expansion.
struct LoadedCharge {
    LoadedTheory model;
    ChargeArtifact artifact;
};
LoadedCharge readChargeArtifact(const std::string& text);

struct LiftArtifact {
    std::string modelText;
    int cutoff = 3;
    GradedPoly phi0, K;
    bool residualZero = false;
};
std::string writeLiftArtifact(const Theory& th, const LiftArtifact& art);

std::string readFileOrThrow(const std::string& path);
void writeFileOrThrow(const std::string& path, const std::string& text);

} // namespace brst

#endif
