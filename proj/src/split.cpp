#include "brst/split.hpp"

#include <algorithm>

namespace brst {

std::vector<std::pair<int, int>> rowEchelonPivots(QMatrix m) {
    std::vector<std::pair<int, int>> pivots;
    std::vector<bool> used(static_cast<size_t>(m.rows), false);
    for (int col = 0; col < m.cols; ++col) {
        int prow = -1;
        for (int i = 0; i < m.rows; ++i) {
            if (!used[static_cast<size_t>(i)] && m.at(i, col) != 0) { prow = i; break; }
        }
        if (prow < 0) continue;
        used[static_cast<size_t>(prow)] = true;
        pivots.emplace_back(prow, col);
        Rat inv = 1 / m.at(prow, col);
        for (int j = 0; j < m.cols; ++j) m.at(prow, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == prow || m.at(i, col) == 0) continue;
            Rat f = m.at(i, col);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) -= f * m.at(prow, j);
        }
    }
    return pivots;
}

QMatrix invert(const QMatrix& m) {
    if (m.rows != m.cols) throw Error("invert: non-square matrix");
    int n = m.rows;
    QMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    for (int col = 0; col < n; ++col) {
        int prow = -1;
        for (int i = col; i < n; ++i)
            if (aug.at(i, col) != 0) { prow = i; break; }
        if (prow < 0) throw Error("invert: singular matrix");
        if (prow != col)
            for (int j = 0; j < 2 * n; ++j) std::swap(aug.at(prow, j), aug.at(col, j));
        Rat inv = 1 / aug.at(col, col);
        for (int j = 0; j < 2 * n; ++j) aug.at(col, j) *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == col || aug.at(i, col) == 0) continue;
            Rat f = aug.at(i, col);
            for (int j = 0; j < 2 * n; ++j) aug.at(i, j) -= f * aug.at(col, j);
        }
    }
    QMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

namespace {

bool constantValue(const GradedPoly& p, Rat& out) {
    if (p.isZero()) { out = 0; return true; }
    if (p.termCount() != 1) return false;
    const auto& [m, c] = *p.terms().begin();
    if (!m.empty()) return false;
    out = c;
    return true;
}

std::vector<int> complement(int n, const std::vector<int>& sub) {
    std::vector<bool> in(static_cast<size_t>(n), false);
    for (int i : sub) in[static_cast<size_t>(i)] = true;
    std::vector<int> out;
    for (int i = 0; i < n; ++i)
        if (!in[static_cast<size_t>(i)]) out.push_back(i);
    return out;
}

int rankOf(QMatrix m) { return static_cast<int>(rowEchelonPivots(std::move(m)).size()); }

IndexSplit userSuppliedSplit(const Theory& th) {
    const Model& mo = th.model;
    const UserSplit& us = *mo.userSplit;
    const int L = mo.L();
    IndexSplit sp;
    sp.L = L;
    sp.A.resize(static_cast<size_t>(L) + 1);
    sp.aprime.resize(static_cast<size_t>(L));
    sp.Zsub.resize(static_cast<size_t>(L) + 1);
    sp.Zinv.resize(static_cast<size_t>(L) + 1);
    if (static_cast<int>(us.A.size()) != L + 1 || static_cast<int>(us.Zinv.size()) != L + 1 ||
        static_cast<int>(us.aprime.size()) != L)
        throw Error("user split: wrong number of stages");
    for (int k = 1; k <= L; ++k) {
        sp.A[static_cast<size_t>(k)] = us.A[static_cast<size_t>(k)];
        std::sort(sp.A[static_cast<size_t>(k)].begin(), sp.A[static_cast<size_t>(k)].end());
    }
    std::vector<int> all(static_cast<size_t>(mo.mk(L)));
    for (int i = 0; i < mo.mk(L); ++i) all[static_cast<size_t>(i)] = i;
    if (sp.A[static_cast<size_t>(L)] != all) throw Error("user split: A_L must equal alpha_L");
    for (int k = 0; k < L; ++k) {
        sp.aprime[static_cast<size_t>(k)] = us.aprime[static_cast<size_t>(k)];
        std::sort(sp.aprime[static_cast<size_t>(k)].begin(), sp.aprime[static_cast<size_t>(k)].end());
        if (sp.aprime[static_cast<size_t>(k)].size() != sp.A[static_cast<size_t>(k + 1)].size())
            throw Error("user split: |alpha'_" + std::to_string(k) + "| != |A_" + std::to_string(k + 1) + "|");
        if (k >= 1 && complement(mo.mk(k), sp.aprime[static_cast<size_t>(k)]) != sp.A[static_cast<size_t>(k)])
            throw Error("user split: alpha'_" + std::to_string(k) + " is not the complement of A_" + std::to_string(k));
    }
    sp.A[0] = complement(mo.mk(0), sp.aprime[0]);
    // build submatrices and verify the supplied inverses exactly
    for (int k = 1; k <= L; ++k) {
        const auto& rows = sp.aprime[static_cast<size_t>(k - 1)];
        const auto& colsA = sp.A[static_cast<size_t>(k)];
        int q = static_cast<int>(colsA.size());
        const Stage& st = mo.stages[static_cast<size_t>(k - 1)];
        auto& sub = sp.Zsub[static_cast<size_t>(k)];
        sub.assign(static_cast<size_t>(q), std::vector<GradedPoly>(static_cast<size_t>(q), GradedPoly(&th.cat)));
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                sub[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    st.Z[static_cast<size_t>(rows[static_cast<size_t>(i)])]
                        [static_cast<size_t>(colsA[static_cast<size_t>(j)])];
        const auto& inv = us.Zinv[static_cast<size_t>(k)];
        if (static_cast<int>(inv.size()) != q)
            throw Error("user split: Zinv[" + std::to_string(k) + "] has wrong size");
        for (int i = 0; i < q; ++i) {
            for (int j = 0; j < q; ++j) {
                GradedPoly se(&th.cat), es(&th.cat);
                for (int l = 0; l < q; ++l) {
                    se += sub[static_cast<size_t>(i)][static_cast<size_t>(l)] * inv[static_cast<size_t>(l)][static_cast<size_t>(j)];
                    es += inv[static_cast<size_t>(i)][static_cast<size_t>(l)] * sub[static_cast<size_t>(l)][static_cast<size_t>(j)];
                }
                GradedPoly want = (i == j) ? GradedPoly::constant(&th.cat, 1) : GradedPoly(&th.cat);
                if (se != want || es != want)
                    throw Error("user split: Zinv[" + std::to_string(k) + "] is not an exact inverse");
            }
        }
        sp.Zinv[static_cast<size_t>(k)] = inv;
    }
    return sp;
}

} // namespace

IndexSplit computeSplit(const Theory& th) {
    const Model& mo = th.model;
    if (mo.userSplit) return userSuppliedSplit(th);

    const int L = mo.L();
    IndexSplit sp;
    sp.L = L;
    sp.A.resize(static_cast<size_t>(L) + 1);
    sp.aprime.resize(static_cast<size_t>(L) == 0 ? 0 : static_cast<size_t>(L));
    sp.Zsub.resize(static_cast<size_t>(L) + 1);
    sp.Zinv.resize(static_cast<size_t>(L) + 1);
    if (L == 0) {
        sp.A[0].resize(static_cast<size_t>(mo.mk(0)));
        for (int i = 0; i < mo.mk(0); ++i) sp.A[0][static_cast<size_t>(i)] = i;
        return sp;
    }

    // constant-rational Z required for the automatic split
    std::vector<QMatrix> Zq(static_cast<size_t>(L));
    for (int k = 0; k < L; ++k) {
        const Stage& st = mo.stages[static_cast<size_t>(k)];
        QMatrix zq(mo.mk(k), st.size);
        for (int i = 0; i < mo.mk(k); ++i) {
            for (int j = 0; j < st.size; ++j) {
                Rat cval;
                if (!constantValue(st.Z[static_cast<size_t>(i)][static_cast<size_t>(j)], cval))
                    throw Error("computeSplit: non-constant Z at stage " + std::to_string(k) +
                                "; supply an explicit split");
                zq.at(i, j) = cval;
            }
        }
        Zq[static_cast<size_t>(k)] = std::move(zq);
    }

    sp.A[static_cast<size_t>(L)].resize(static_cast<size_t>(mo.mk(L)));
    for (int i = 0; i < mo.mk(L); ++i) sp.A[static_cast<size_t>(L)][static_cast<size_t>(i)] = i;

    for (int k = L; k >= 1; --k) {
        const auto& Ak = sp.A[static_cast<size_t>(k)];
        int q = static_cast<int>(Ak.size());
        if (q == 0) {
            sp.aprime[static_cast<size_t>(k - 1)] = {};
            sp.A[static_cast<size_t>(k - 1)].resize(static_cast<size_t>(mo.mk(k - 1)));
            for (int i = 0; i < mo.mk(k - 1); ++i) sp.A[static_cast<size_t>(k - 1)][static_cast<size_t>(i)] = i;
            continue;
        }
        // columns A_k of Z^{alpha_{k-1}}_{alpha_k}
        QMatrix sub(mo.mk(k - 1), q);
        for (int i = 0; i < mo.mk(k - 1); ++i)
            for (int j = 0; j < q; ++j)
                sub.at(i, j) = Zq[static_cast<size_t>(k - 1)].at(i, Ak[static_cast<size_t>(j)]);
        auto pivots = rowEchelonPivots(sub);
        if (static_cast<int>(pivots.size()) != q)
            throw Error("computeSplit: rank Z^{alpha_" + std::to_string(k - 1) + "}_{A_" +
                        std::to_string(k) + "} = " + std::to_string(pivots.size()) +
                        " < " + std::to_string(q) + " (inconsistent reducibility)");
        if (rankOf(Zq[static_cast<size_t>(k - 1)]) != q)
            throw Error("computeSplit: rank Z^{alpha_" + std::to_string(k - 1) + "}_{alpha_" +
                        std::to_string(k) + "} != |A_" + std::to_string(k) + "|");
        std::vector<int> prows;
        for (auto& [r, c] : pivots) prows.push_back(r);
        std::sort(prows.begin(), prows.end());
        sp.aprime[static_cast<size_t>(k - 1)] = prows;
        sp.A[static_cast<size_t>(k - 1)] = complement(mo.mk(k - 1), prows);

        QMatrix sq(q, q);
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                sq.at(i, j) = Zq[static_cast<size_t>(k - 1)].at(prows[static_cast<size_t>(i)],
                                                                Ak[static_cast<size_t>(j)]);
        QMatrix inv = invert(sq);
        auto toPoly = [&](const QMatrix& mq) {
            std::vector<std::vector<GradedPoly>> out(static_cast<size_t>(mq.rows),
                                                     std::vector<GradedPoly>(static_cast<size_t>(mq.cols), GradedPoly(&th.cat)));
            for (int i = 0; i < mq.rows; ++i)
                for (int j = 0; j < mq.cols; ++j)
                    out[static_cast<size_t>(i)][static_cast<size_t>(j)] = GradedPoly::constant(&th.cat, mq.at(i, j));
            return out;
        };
        sp.Zsub[static_cast<size_t>(k)] = toPoly(sq);
        sp.Zinv[static_cast<size_t>(k)] = toPoly(inv);
    }
    return sp;
}

} // namespace brst
