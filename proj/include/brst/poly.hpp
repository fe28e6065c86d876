#ifndef BRST_POLY_HPP
#define BRST_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "brst/rational.hpp"
#include "brst/variables.hpp"

namespace brst {

struct VarPow {
    VarId var;
    int exp;
    bool operator==(const VarPow& o) const { return var == o.var && exp == o.exp; }
};

/// Sorted variable-power sequence; odd variables carry exponent 1.
using Monomial = std::vector<VarPow>;

inline int totalDegree(const Monomial& m) {
    int d = 0;
    for (const auto& f : m) d += f.exp;
    return d;
}

/// Degree-then-lex order ("a < b"): higher total degree is bigger; ties
/// broken so that a larger exponent on the smallest differing VarId wins.
struct MonoLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = totalDegree(a), db = totalDegree(b);
        if (da != db) return da < db;
        size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
            if (a[i].var != b[i].var) return a[i].var > b[i].var;
            if (a[i].exp != b[i].exp) return a[i].exp < b[i].exp;
        }
        return a.size() < b.size();
    }
};

/// Exact supercommutative polynomial over Q in the catalog's variables.
/// Monomials are kept in canonical order with normalized signs; no zero
/// coefficients are stored, the empty map is 0.
class GradedPoly {
  public:
    using Terms = std::map<Monomial, Rat, MonoLess>;

    GradedPoly() : cat_(nullptr) {}
    explicit GradedPoly(const Catalog* cat) : cat_(cat) {}

    static GradedPoly constant(const Catalog* cat, const Rat& q) {
        GradedPoly p(cat);
        if (q != 0) p.terms_[Monomial{}] = q;
        return p;
    }
    static GradedPoly variable(const Catalog* cat, VarId v) {
        GradedPoly p(cat);
        p.terms_[Monomial{VarPow{v, 1}}] = 1;
        return p;
    }

    const Catalog* cat() const { return cat_; }
    const Terms& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    size_t termCount() const { return terms_.size(); }

    bool operator==(const GradedPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const GradedPoly& o) const { return !(*this == o); }

    void addTerm(const Monomial& m, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    GradedPoly& operator+=(const GradedPoly& o) {
        bind(o);
        for (const auto& [m, c] : o.terms_) addTerm(m, c);
        return *this;
    }
    GradedPoly& operator-=(const GradedPoly& o) {
        bind(o);
        for (const auto& [m, c] : o.terms_) addTerm(m, -c);
        return *this;
    }
    friend GradedPoly operator+(GradedPoly a, const GradedPoly& b) { return a += b; }
    friend GradedPoly operator-(GradedPoly a, const GradedPoly& b) { return a -= b; }
    GradedPoly operator-() const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    GradedPoly& operator*=(const Rat& q) {
        if (q == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= q;
        }
        return *this;
    }
    friend GradedPoly operator*(GradedPoly a, const Rat& q) { return a *= q; }
    friend GradedPoly operator*(const Rat& q, GradedPoly a) { return a *= q; }

    friend GradedPoly operator*(const GradedPoly& a, const GradedPoly& b) {
        const Catalog* cat = a.cat_ ? a.cat_ : b.cat_;
        GradedPoly r(cat);
        Monomial prod;
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                int sign;
                if (!mulMono(*cat, ma, mb, prod, sign)) continue;
                r.addTerm(prod, sign ? Rat(-ca * cb) : Rat(ca * cb));
            }
        }
        return r;
    }
    GradedPoly& operator*=(const GradedPoly& o) { return *this = *this * o; }

    /// Left derivative: factors before v are jumped over.
    GradedPoly leftDerivative(VarId v) const { return derivative(v, /*left=*/true); }
    /// Right derivative: factors after v are jumped over.
    GradedPoly rightDerivative(VarId v) const { return derivative(v, /*left=*/false); }

    /// Substitutes images[v] for each variable that has one; variables
    /// without an image stay put.  Factor order of each monomial is kept,
    /// so Grassmann signs come out of the ring product.
    GradedPoly substitute(const std::vector<std::optional<GradedPoly>>& images) const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_) {
            GradedPoly acc = GradedPoly::constant(cat_, c);
            for (const auto& f : m) {
                const auto& img = images[static_cast<size_t>(f.var)];
                if (!img) {
                    GradedPoly vp = GradedPoly::variable(cat_, f.var);
                    for (int e = 0; e < f.exp; ++e) acc *= vp;
                } else {
                    for (int e = 0; e < f.exp; ++e) acc *= *img;
                }
                if (acc.isZero()) break;
            }
            r += acc;
        }
        return r;
    }

    /// Numeric substitution of all even variables occurring in the
    /// polynomial; throws if one is missing from the assignment.
    GradedPoly evalEven(const std::map<VarId, Rat>& point) const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_) {
            Rat coeff = c;
            Monomial rest;
            for (const auto& f : m) {
                if (cat_->info(f.var).parity == 0) {
                    auto it = point.find(f.var);
                    if (it == point.end())
                        throw Error("evalEven: no value for even variable " + cat_->info(f.var).name);
                    for (int e = 0; e < f.exp; ++e) coeff *= it->second;
                } else {
                    rest.push_back(f);
                }
            }
            r.addTerm(rest, coeff);
        }
        return r;
    }

    int monoParity(const Monomial& m) const {
        int p = 0;
        for (const auto& f : m) p += f.exp * cat_->info(f.var).parity;
        return p & 1;
    }
    long monoNgh(const Monomial& m) const {
        long g = 0;
        for (const auto& f : m) g += static_cast<long>(f.exp) * cat_->info(f.var).ngh;
        return g;
    }
    int monoGhostDegree(const Monomial& m) const {
        int d = 0;
        for (const auto& f : m)
            if (cat_->isGhostKind(f.var)) d += f.exp;
        return d;
    }

    /// Parity if homogeneous (0 for the zero polynomial).
    std::optional<int> parity() const {
        std::optional<int> p;
        for (const auto& [m, c] : terms_) {
            int mp = monoParity(m);
            if (!p) p = mp;
            else if (*p != mp) return std::nullopt;
        }
        return p ? p : std::optional<int>(0);
    }
    std::optional<long> ngh() const {
        std::optional<long> g;
        for (const auto& [m, c] : terms_) {
            long mg = monoNgh(m);
            if (!g) g = mg;
            else if (*g != mg) return std::nullopt;
        }
        return g ? g : std::optional<long>(0);
    }

    GradedPoly parityPart(int p) const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_)
            if (monoParity(m) == p) r.terms_[m] = c;
        return r;
    }
    GradedPoly ghostDegreePart(int n) const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_)
            if (monoGhostDegree(m) == n) r.terms_[m] = c;
        return r;
    }
    GradedPoly ghostDegreeAtMost(int n) const {
        GradedPoly r(cat_);
        for (const auto& [m, c] : terms_)
            if (monoGhostDegree(m) <= n) r.terms_[m] = c;
        return r;
    }
    int maxGhostDegree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, monoGhostDegree(m));
        return d;
    }

    /// Lists the distinct variables occurring in the polynomial.
    std::vector<VarId> support() const {
        std::vector<VarId> s;
        for (const auto& [m, c] : terms_)
            for (const auto& f : m) s.push_back(f.var);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

    /// Supercommutative monomial product; false when an odd square kills it.
    static bool mulMono(const Catalog& cat, const Monomial& A, const Monomial& B, Monomial& out,
                        int& signOut) {
        out.clear();
        out.reserve(A.size() + B.size());
        // suffix counts of odd factors in A
        static thread_local std::vector<int> suffOdd;
        suffOdd.assign(A.size() + 1, 0);
        for (size_t i = A.size(); i-- > 0;)
            suffOdd[i] = suffOdd[i + 1] + (cat.info(A[i].var).parity & 1);
        int sign = 0;
        size_t i = 0, j = 0;
        while (i < A.size() || j < B.size()) {
            bool takeA = j == B.size() || (i < A.size() && A[i].var <= B[j].var);
            if (takeA && j < B.size() && i < A.size() && A[i].var == B[j].var) {
                if (cat.info(A[i].var).parity & 1) return false;  // odd square
                out.push_back(VarPow{A[i].var, A[i].exp + B[j].exp});
                ++i;
                ++j;
            } else if (takeA) {
                out.push_back(A[i]);
                ++i;
            } else {
                if (cat.info(B[j].var).parity & 1) sign ^= (suffOdd[i] & 1);
                out.push_back(B[j]);
                ++j;
            }
        }
        signOut = sign;
        return true;
    }

  private:
    GradedPoly derivative(VarId v, bool left) const {
        GradedPoly r(cat_);
        const bool vOdd = cat_->info(v).parity & 1;
        for (const auto& [m, c] : terms_) {
            size_t pos = m.size();
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i].var == v) { pos = i; break; }
            if (pos == m.size()) continue;
            Monomial d = m;
            Rat coeff = c * m[pos].exp;
            if (d[pos].exp == 1) d.erase(d.begin() + static_cast<long>(pos));
            else d[pos].exp -= 1;
            if (vOdd) {
                int crossings = 0;
                if (left) {
                    for (size_t i = 0; i < pos; ++i) crossings += cat_->info(m[i].var).parity & 1;
                } else {
                    for (size_t i = pos + 1; i < m.size(); ++i) crossings += cat_->info(m[i].var).parity & 1;
                }
                if (crossings & 1) coeff = -coeff;
            }
            r.addTerm(d, coeff);
        }
        return r;
    }

    void bind(const GradedPoly& o) {
        if (!cat_) cat_ = o.cat_;
    }

    const Catalog* cat_;
    Terms terms_;
};

} // namespace brst

#endif
