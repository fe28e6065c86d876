#ifndef BRST_VARIABLES_HPP
#define BRST_VARIABLES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "brst/rational.hpp"

namespace brst {

using VarId = int32_t;
constexpr VarId kNoVar = -1;

/// Variable kinds in the published canonical order.  Monomials sort by
/// VarId, and VarIds are assigned in (kind, stage, sub, base, t) order.
enum class VarKind : uint8_t {
    Xi = 0,         // original phase space (p_1..p_m, q^1..q^m)
    MomentumP = 1,  // P_{alpha_s|(r,t)}, r+t = s+1
    GhostC = 2,     // c^{alpha_s|(r,t)}, r+t = s+1
    Lambda = 3,     // lambda_{alpha_s|(r,t)}, r+t = s
    Pi = 4,         // pi^{alpha_s|(r,t)}, r+t = s
    XiPrime = 5,    // xi'_{scriptA} (= F) and xi'_{A0} (= T_{A0})
    MomentumPPrime = 6,
    LambdaPrime = 7,
};

/// Sub-family of a variable: F/G distinguish the f(A_{k}) and g(A_k)
/// families of primed momenta; ScriptA/A0 split the primed coordinates.
enum class Sub : uint8_t { None = 0, ScriptA = 1, A0 = 2, F = 3, G = 4 };

struct VarInfo {
    VarKind kind = VarKind::Xi;
    Sub sub = Sub::None;
    int stage = 0;  // ghost stage s; for primed P'/lambda' families: the A-stage k
    int base = 0;   // index within the family
    int r = 0, t = 0;
    int parity = 0;
    long ngh = 0;
    VarId conj = kNoVar;  // canonical partner (unprimed sector only)
    bool isMomentum = false;   // left-derivative side of its pair
    bool resolution = false;   // counted by the operator N (primed sector)
    std::string name;
};

/// Variable table for one model's extended phase space.  Unprimed
/// variables are created at construction; the primed sector is appended
/// once an index split is known.  Ids are stable.
class Catalog {
  public:
    std::vector<VarInfo> vars;

    const VarInfo& info(VarId v) const { return vars[static_cast<size_t>(v)]; }
    int size() const { return static_cast<int>(vars.size()); }

    VarId add(const VarInfo& vi) {
        VarId id = static_cast<VarId>(vars.size());
        vars.push_back(vi);
        index_[key(vi)] = id;
        return id;
    }

    VarId find(VarKind k, Sub sub, int stage, int base, int r, int t) const {
        auto it = index_.find(std::make_tuple(k, sub, stage, base, r, t));
        return it == index_.end() ? kNoVar : it->second;
    }
    VarId get(VarKind k, Sub sub, int stage, int base, int r, int t) const {
        VarId v = find(k, sub, stage, base, r, t);
        if (v == kNoVar) throw Error("catalog: no such variable");
        return v;
    }

    // unprimed accessors
    VarId xi(int alpha) const { return get(VarKind::Xi, Sub::None, 0, alpha, 0, 0); }
    VarId momP(int s, int a, int r, int t) const { return get(VarKind::MomentumP, Sub::None, s, a, r, t); }
    VarId ghostC(int s, int a, int r, int t) const { return get(VarKind::GhostC, Sub::None, s, a, r, t); }
    VarId lambda(int s, int a, int r, int t) const { return get(VarKind::Lambda, Sub::None, s, a, r, t); }
    VarId pi(int s, int a, int r, int t) const { return get(VarKind::Pi, Sub::None, s, a, r, t); }

    // primed accessors; for P'/lambda' the stage argument is the A-stage k
    VarId xiPrimeF(int i) const { return get(VarKind::XiPrime, Sub::ScriptA, 0, i, 0, 0); }
    VarId xiPrimeA(int j) const { return get(VarKind::XiPrime, Sub::A0, 0, j, 0, 0); }
    VarId pPrime(Sub fg, int k, int a, int r, int t) const { return get(VarKind::MomentumPPrime, fg, k, a, r, t); }
    VarId lPrime(Sub fg, int k, int a, int r, int t) const { return get(VarKind::LambdaPrime, fg, k, a, r, t); }

    VarId findPPrime(Sub fg, int k, int a, int r, int t) const { return find(VarKind::MomentumPPrime, fg, k, a, r, t); }
    VarId findLPrime(Sub fg, int k, int a, int r, int t) const { return find(VarKind::LambdaPrime, fg, k, a, r, t); }

    bool isGhostKind(VarId v) const {
        VarKind k = info(v).kind;
        return k == VarKind::GhostC || k == VarKind::Pi;
    }
    bool isPrimedKind(VarId v) const {
        VarKind k = info(v).kind;
        return k == VarKind::XiPrime || k == VarKind::MomentumPPrime || k == VarKind::LambdaPrime;
    }

  private:
    using Key = std::tuple<VarKind, Sub, int, int, int, int>;
    static Key key(const VarInfo& vi) {
        return std::make_tuple(vi.kind, vi.sub, vi.stage, vi.base, vi.r, vi.t);
    }
    std::map<Key, VarId> index_;
};

} // namespace brst

#endif
