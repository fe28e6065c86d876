#ifndef BRST_SPLIT_HPP
#define BRST_SPLIT_HPP

#include <vector>

#include "brst/model.hpp"

namespace brst {

/// Small dense matrix over Q for the exact rank/inverse work.
struct QMatrix {
    int rows = 0, cols = 0;
    std::vector<Rat> a;

    QMatrix() = default;
    QMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rat(0)) {}
    Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

/// Row-echelon reduction picking the first usable pivot row per column,
/// in index order.  Returns pivot (row, col) pairs.
std::vector<std::pair<int, int>> rowEchelonPivots(QMatrix m);

/// Exact inverse; throws on singular input.
QMatrix invert(const QMatrix& m);

/// Per-stage partition alpha_k = alpha'_k u A_k with the invertible
/// submatrices Z^{alpha'_{k-1}}_{A_k} and their exact inverses.
struct IndexSplit {
    int L = 0;
    std::vector<std::vector<int>> A;       // A[k], k = 0..L; A[L] = alpha_L
    std::vector<std::vector<int>> aprime;  // aprime[k], k = 0..L-1
    // k = 1..L (index 0 unused): Zsub[k] = Z^{aprime[k-1]}_{A[k]}, Zinv[k] its inverse
    std::vector<std::vector<std::vector<GradedPoly>>> Zsub, Zinv;
    std::vector<int> scriptA;              // xi indices of the default F coordinates (empty if F user-supplied)

    int posInA(int k, int idx) const {
        const auto& v = A[static_cast<size_t>(k)];
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] == idx) return static_cast<int>(i);
        return -1;
    }
    int posInAprime(int k, int idx) const {
        const auto& v = aprime[static_cast<size_t>(k)];
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] == idx) return static_cast<int>(i);
        return -1;
    }
};

/// Builds the split from constant-rational Z matrices (deterministic
/// first-pivot-in-index-order), or validates a user-supplied split with
/// explicit polynomial inverses.  Throws on rank deficiencies.
IndexSplit computeSplit(const Theory& th);

} // namespace brst

#endif
