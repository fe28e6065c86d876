#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "brst/io.hpp"
#include "brst/reduction.hpp"
#include "fixtures.hpp"

using namespace brst;

namespace {

std::vector<int> canonicalTuple(int r, int t) {
    std::vector<int> tup;
    for (int i = 0; i < r; ++i) tup.push_back(1);
    for (int i = 0; i < t; ++i) tup.push_back(2);
    return tup;
}

int onesAmong(const std::vector<int>& tup, const std::vector<int>& positions, int count) {
    int ones = 0;
    for (int i = 0; i < count; ++i)
        if (tup[static_cast<size_t>(positions[static_cast<size_t>(i)])] == 1) ++ones;
    return ones;
}

/// Literal permutation-sum definition of the symmetric product.
Sp2Tensor symProductLiteral(const Sp2Tensor& X, const Sp2Tensor& Y) {
    int q = X.rank(), p = Y.rank(), n = p + q;
    Sp2Tensor Z(X.cat() ? X.cat() : Y.cat(), n);
    for (int t = 0; t <= n; ++t) {
        int r = n - t;
        std::vector<int> tup = canonicalTuple(r, t);
        std::vector<int> perm(static_cast<size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        GradedPoly acc(Z.cat());
        long count = 0;
        std::sort(perm.begin(), perm.end());
        do {
            int rx = onesAmong(tup, perm, q);
            int tx = q - rx;
            int ryOnes = r - rx;
            acc += X.at(rx, tx) * Y.at(ryOnes, p - ryOnes);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        Rat norm(1, count == 0 ? 1 : count);
        Z.at(r, t) = norm * acc;
    }
    return Z;
}

/// Literal cyclic-sum definition of the operator lift (with 1/(n+1)).
Sp2Tensor liftLiteral(const OperatorPair& u, const Sp2Tensor& X) {
    int n = X.rank();
    Sp2Tensor Z(X.cat(), n + 1);
    for (int t = 0; t <= n + 1; ++t) {
        int r = n + 1 - t;
        std::vector<int> tup = canonicalTuple(r, t);
        GradedPoly acc(X.cat());
        for (int k = 0; k <= n; ++k) {
            int head = tup[static_cast<size_t>(k)];
            int onesRest = r - (head == 1 ? 1 : 0);
            acc += u.apply(head, X.at(onesRest, n - onesRest));
        }
        Z.at(r, t) = frac(1, n + 1) * acc;
    }
    return Z;
}

Sp2Tensor sampleTensor(const Theory& th, const std::vector<VarId>& vars, Rng& rng, int rank,
                       int parity) {
    for (int tries = 0; tries < 100; ++tries) {
        Sp2Tensor x = randomTensor(th.cat, vars, rng, rank, 2, 2, parity);
        if (!x.isZero()) return x;
    }
    throw Error("sampleTensor failed");
}

} // namespace

TEST_CASE("symmetric product: identities and examples") {
    auto lt = loadFixture("model_b.brst");
    Theory& th = lt.get();

    // x o 1 = x for the rank-0 constant 1
    Sp2Tensor one = Sp2Tensor::scalar(th.poly(1));
    Sp2Tensor x(&th.cat, 2);
    x.at(2, 0) = th.pVar(0);
    x.at(1, 1) = th.qVar(1) * th.pVar(2);
    x.at(0, 2) = th.poly(5);
    CHECK(symProduct(x, one) == x);
    CHECK(symProduct(one, x) == x);

    // rank1 o rank1 with even components
    Sp2Tensor a(&th.cat, 1), b(&th.cat, 1);
    a.at(1, 0) = th.pVar(0);
    a.at(0, 1) = th.pVar(1);
    b.at(1, 0) = th.qVar(0);
    b.at(0, 1) = th.qVar(1);
    Sp2Tensor ab = symProduct(a, b);
    CHECK(ab.at(2, 0) == th.pVar(0) * th.qVar(0));
    CHECK(ab.at(1, 1) == frac(1, 2) * (th.pVar(0) * th.qVar(1) + th.pVar(1) * th.qVar(0)));
    CHECK(ab.at(0, 2) == th.pVar(1) * th.qVar(1));

    // odd rank-0 scalars anticommute under o
    Sp2Tensor c = Sp2Tensor::scalar(th.v(th.cat.ghostC(0, 0, 1, 0)));
    Sp2Tensor P = Sp2Tensor::scalar(th.v(th.cat.momP(0, 1, 0, 1)));
    CHECK(symProduct(c, P) == -symProduct(P, c));
}

TEST_CASE("component formulas match the literal definitions at ranks <= 3") {
    auto lt = loadFixture("model_b.brst");
    Theory& th = lt.get();
    auto vars = unprimedVars(th);
    Rng rng(11);

    for (int i = 0; i < 30; ++i) {
        int q = rng.range(0, 3), p = rng.range(0, 3 - q >= 0 ? std::min(3, 3) : 0);
        p = rng.range(0, 3);
        int ex = static_cast<int>(rng.below(2)), ey = static_cast<int>(rng.below(2));
        Sp2Tensor X = sampleTensor(th, vars, rng, q, ex);
        Sp2Tensor Y = sampleTensor(th, vars, rng, p, ey);
        CHECK(symProduct(X, Y) == symProductLiteral(X, Y));
    }

    // operator lift vs literal cyclic sum, for a derivation-like pair
    KoszulOps ops(th, Omega1Params::zeros(th));
    OperatorPair dpair{[&](const GradedPoly& v) { return ops.delta(1).apply(v); },
                       [&](const GradedPoly& v) { return ops.delta(2).apply(v); }};
    for (int i = 0; i < 30; ++i) {
        int n = rng.range(0, 3);
        Sp2Tensor X = sampleTensor(th, vars, rng, n, static_cast<int>(rng.below(2)));
        CHECK(liftPair(dpair, X, true) == liftLiteral(dpair, X));
    }
}

TEST_CASE("operator lift examples") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly f = th.pVar(0) * th.qVar(1);
    OperatorPair u{[&](const GradedPoly& v) { return th.pVar(0) * v; },
                   [&](const GradedPoly& v) { return th.qVar(0) * v; }};

    Sp2Tensor x0 = Sp2Tensor::scalar(f);
    Sp2Tensor l0 = liftPair(u, x0, true);
    CHECK(l0.at(1, 0) == th.pVar(0) * f);
    CHECK(l0.at(0, 1) == th.qVar(0) * f);

    Sp2Tensor x1(&th.cat, 1);
    x1.at(1, 0) = th.pVar(1);
    x1.at(0, 1) = th.qVar(1);
    Sp2Tensor l1 = liftPair(u, x1, true);
    CHECK(l1.at(1, 1) == frac(1, 2) * (th.pVar(0) * th.qVar(1) + th.qVar(0) * th.pVar(1)));

    OperatorPair zero{[&](const GradedPoly&) { return GradedPoly(&th.cat); },
                      [&](const GradedPoly&) { return GradedPoly(&th.cat); }};
    CHECK(liftPair(zero, x1, true).isZero());
}

TEST_CASE("contraction") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    OperatorPair s{[&](const GradedPoly& v) { return th.pVar(0) * v; },
                   [&](const GradedPoly& v) { return th.pVar(1) * v; }};
    CHECK(contractPair(s, Sp2Tensor::scalar(th.poly(7))).isZero());

    Sp2Tensor x1(&th.cat, 1);
    x1.at(1, 0) = th.qVar(0);
    x1.at(0, 1) = th.qVar(1);
    Sp2Tensor c = contractPair(s, x1);
    CHECK(c.rank() == 0);
    CHECK(c.at(0, 0) == th.pVar(0) * th.qVar(0) + th.pVar(1) * th.qVar(1));
}

TEST_CASE("cyclic symmetrization") {
    auto lt = loadFixture("model_a.brst");
    Theory& th = lt.get();
    GradedPoly f = th.pVar(0), g = th.qVar(1);

    // n = 1: identity
    Sp2Tensor s1 = cyclicSymmetrize(&th.cat, 1, [&](const std::vector<int>& tup) {
        return tup[0] == 1 ? f : g;
    });
    CHECK(s1.at(1, 0) == f);
    CHECK(s1.at(0, 1) == g);

    // n = 2 with X_{12} = f, X_{21} = g
    Sp2Tensor s2 = cyclicSymmetrize(&th.cat, 2, [&](const std::vector<int>& tup) {
        if (tup[0] == 1 && tup[1] == 2) return f;
        if (tup[0] == 2 && tup[1] == 1) return g;
        return GradedPoly(&th.cat);
    });
    CHECK(s2.at(1, 1) == f + g);
    CHECK(s2.at(2, 0).isZero());

    // n = 3: three terms per component
    int calls = 0;
    cyclicSymmetrize(&th.cat, 3, [&](const std::vector<int>&) {
        ++calls;
        return th.poly(1);
    });
    CHECK(calls == 3 * 4);
}

TEST_CASE("tensor bracket identities") {
    auto lt = loadFixture("model_b.brst");
    Theory& th = lt.get();
    auto vars = unprimedVars(th);
    Rng rng(23);

    // rank-0 reduction to the Poisson bracket
    for (int i = 0; i < 10; ++i) {
        GradedPoly x = sampleHomogeneous(th, vars, rng, static_cast<int>(rng.below(2)));
        GradedPoly y = sampleHomogeneous(th, vars, rng, static_cast<int>(rng.below(2)));
        Sp2Tensor b = tensorBracket(Sp2Tensor::scalar(x), Sp2Tensor::scalar(y));
        CHECK(b.at(0, 0) == poissonBracket(x, y));
        Sp2Tensor d = diamondTensorBracket(Sp2Tensor::scalar(x), Sp2Tensor::scalar(y));
        CHECK(d.at(0, 0) == diamondBracket(x, y));
    }
    // [x, 1]_diamond = 0
    CHECK(diamondTensorBracket(Sp2Tensor::scalar(th.pVar(0)), Sp2Tensor::scalar(th.poly(1))).isZero());

    for (int i = 0; i < 25; ++i) {
        int rx = rng.range(0, 1), ry = rng.range(0, 1), rz = rng.range(0, 1);
        int ex = static_cast<int>(rng.below(2)), ey = static_cast<int>(rng.below(2)),
            ez = static_cast<int>(rng.below(2));
        Sp2Tensor X = sampleTensor(th, vars, rng, rx, ex);
        Sp2Tensor Y = sampleTensor(th, vars, rng, ry, ey);
        Sp2Tensor Z = sampleTensor(th, vars, rng, rz, ez);

        // graded antisymmetry
        Sp2Tensor bxy = tensorBracket(X, Y);
        Sp2Tensor byx = tensorBracket(Y, X);
        CHECK(bxy == ((ex & ey) ? byx : -byx));

        // Leibniz over o
        Sp2Tensor lhs = tensorBracket(X, symProduct(Y, Z));
        Sp2Tensor rhs = symProduct(bxy, Z);
        Sp2Tensor t2 = symProduct(Y, tensorBracket(X, Z));
        rhs += (ex & ey) ? -t2 : t2;
        CHECK(lhs == rhs);

        // graded Jacobi
        auto J = [&](const Sp2Tensor& a, const Sp2Tensor& b, const Sp2Tensor& c, int ea, int ec) {
            Sp2Tensor t = tensorBracket(a, tensorBracket(b, c));
            return (ea & ec) ? -t : t;
        };
        Sp2Tensor jac = J(X, Y, Z, ex, ez) + J(Y, Z, X, ey, ex) + J(Z, X, Y, ez, ey);
        CHECK(jac.isZero());
    }
}

TEST_CASE("V is closed under o and the bracket (first-class input)") {
    auto lt = loadFixture("model_d.brst");
    Theory& th = lt.get();
    Rng rng(31);
    auto vars = unprimedVars(th);

    // elements vanishing at T = P = lambda = 0: random multiples of T/P/lambda
    auto sampleV = [&](int parity) {
        for (int tries = 0; tries < 200; ++tries) {
            GradedPoly gen(&th.cat);
            int pick = rng.range(0, 3);
            if (pick == 0) gen = th.model.T[rng.below(th.model.T.size())];
            else if (pick == 1) gen = th.v(th.cat.momP(0, rng.range(0, 1), 1, 0));
            else if (pick == 2) gen = th.v(th.cat.momP(0, rng.range(0, 1), 0, 1));
            else gen = th.v(th.cat.lambda(0, rng.range(0, 1), 0, 0));
            GradedPoly res = (randomPoly(th.cat, vars, rng, 2, 1) * gen).parityPart(parity);
            if (!res.isZero()) return res;
        }
        throw Error("sampleV failed");
    };
    auto vanishes = [&](const GradedPoly& x) {
        // substitute P = lambda = 0, then reduce modulo the constraints
        std::vector<std::optional<GradedPoly>> images(static_cast<size_t>(th.cat.size()), std::nullopt);
        for (VarId v = 0; v < th.cat.size(); ++v) {
            VarKind k = th.cat.info(v).kind;
            if (k == VarKind::MomentumP || k == VarKind::Lambda) images[static_cast<size_t>(v)] = GradedPoly(&th.cat);
        }
        GradedPoly rest = x.substitute(images);
        return reduceModulo(rest, th.model.T).remainder.isZero();
    };

    for (int i = 0; i < 20; ++i) {
        int ex = static_cast<int>(rng.below(2)), ey = static_cast<int>(rng.below(2));
        GradedPoly x = sampleV(ex), y = sampleV(ey);
        CHECK(vanishes(x * y));
        CHECK(vanishes(poissonBracket(x, y)));
    }
}
