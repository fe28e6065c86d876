#include "brst/reduction.hpp"

namespace brst {

namespace {

/// Quotient monomial q with q * d = +- m, or false when d does not divide m.
bool divideMono(const Monomial& m, const Monomial& d, Monomial& q) {
    q.clear();
    size_t i = 0;
    for (const auto& f : d) {
        while (i < m.size() && m[i].var < f.var) {
            q.push_back(m[i]);
            ++i;
        }
        if (i == m.size() || m[i].var != f.var || m[i].exp < f.exp) return false;
        if (m[i].exp > f.exp) q.push_back(VarPow{m[i].var, m[i].exp - f.exp});
        ++i;
    }
    while (i < m.size()) {
        q.push_back(m[i]);
        ++i;
    }
    return true;
}

} // namespace

ReductionResult reduceModulo(const GradedPoly& x, const std::vector<GradedPoly>& gens) {
    const Catalog& cat = *x.cat();
    ReductionResult out;
    out.remainder = x;
    out.quotients.assign(gens.size(), GradedPoly(&cat));

    bool reduced = true;
    while (reduced && !out.remainder.isZero()) {
        reduced = false;
        // scan monomials from the largest down
        for (auto it = out.remainder.terms().rbegin(); it != out.remainder.terms().rend(); ++it) {
            const Monomial& m = it->first;
            const Rat coeff = it->second;
            for (size_t g = 0; g < gens.size(); ++g) {
                const Monomial* lead = leadingMonomial(gens[g]);
                if (!lead) continue;
                Monomial q;
                if (!divideMono(m, *lead, q)) continue;
                Monomial prod;
                int sign;
                if (!GradedPoly::mulMono(cat, q, *lead, prod, sign)) continue;
                Rat leadCoeff = gens[g].terms().rbegin()->second;
                Rat factor = coeff / leadCoeff;
                if (sign) factor = -factor;
                GradedPoly qp(&cat);
                qp.addTerm(q, factor);
                out.remainder -= qp * gens[g];
                out.quotients[g] += qp;
                reduced = true;
                break;
            }
            if (reduced) break;
        }
    }
    return out;
}

} // namespace brst
