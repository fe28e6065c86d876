#include "doctest.h"

#include "fixtures.hpp"

using namespace brst;

TEST_CASE("fixture models validate") {
    for (const char* name : {"model_a.brst", "model_b.brst", "model_c.brst", "model_d.brst"}) {
        auto lt = loadFixture(name);
        CHECK(lt.get().validate().empty());
    }
}

TEST_CASE("grading tables") {
    auto lt = loadFixture("model_c.brst");
    Theory& th = lt.get();
    const Catalog& cat = th.cat;

    for (int s = 0; s <= th.L(); ++s) {
        for (int a = 0; a < th.mk(s); ++a) {
            VarId c = cat.ghostC(s, a, s + 1, 0), P = cat.momP(s, a, s + 1, 0);
            VarId l = cat.lambda(s, a, s, 0), piv = cat.pi(s, a, s, 0);
            CHECK(cat.info(c).ngh == s + 1);
            CHECK(cat.info(P).ngh == -(s + 1));
            CHECK(cat.info(piv).ngh == s + 2);
            CHECK(cat.info(l).ngh == -(s + 2));
            CHECK(cat.info(c).parity == ((th.model.stageParity(s, a) + s + 1) & 1));
            CHECK(cat.info(l).parity == ((th.model.stageParity(s, a) + s) & 1));
            // conjugation is an involution pairing P-types with Q-types
            CHECK(cat.info(c).conj == P);
            CHECK(cat.info(P).conj == c);
            CHECK(cat.info(l).conj == piv);
            CHECK(cat.info(piv).conj == l);
            CHECK(cat.info(P).isMomentum);
            CHECK(!cat.info(c).isMomentum);
        }
    }
    CHECK(cat.info(cat.xi(0)).ngh == 0);
}

TEST_CASE("bad reducibility data is rejected") {
    std::string text = fixtureText("model_b_bad_z.brst");
    CHECK_THROWS_WITH_AS(parseModelText(text), doctest::Contains("TZ != 0 at alpha_1=0"),
                         Error);
}

TEST_CASE("non-first-class constraints are rejected") {
    std::string text = R"([phase_space]
pair p1 q1 0
[constraints]
p1
q1
)";
    CHECK_THROWS_WITH_AS(parseModelText(text), doctest::Contains("not in the constraint ideal"),
                         Error);
}

TEST_CASE("wrong structure functions are rejected") {
    std::string text = R"([phase_space]
pair p1 q1 0
pair p2 q2 0
[constraints]
p1
p2+q1*p1
[structure]
0 0 1 : 1
)";
    CHECK_THROWS_WITH_AS(parseModelText(text), doctest::Contains("!= T*U"), Error);
}

TEST_CASE("A-function antisymmetry is enforced") {
    // model C with one A entry flipped
    std::string text = fixtureText("model_c.brst");
    auto pos = text.find("1 0 0 : 2");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 9, "1 0 0 : 3");
    CHECK_THROWS_WITH_AS(parseModelText(text), doctest::Contains("antisymmetric"), Error);
}

TEST_CASE("automatic split on models B and C") {
    auto ltB = loadFixture("model_b.brst");
    IndexSplit spB = computeSplit(ltB.get());
    CHECK(spB.A[1] == std::vector<int>{0});
    CHECK(spB.aprime[0] == std::vector<int>{0});
    CHECK(spB.A[0] == std::vector<int>{1, 2});
    CHECK(spB.Zinv[1][0][0] == ltB.get().poly(1));

    auto ltC = loadFixture("model_c.brst");
    IndexSplit spC = computeSplit(ltC.get());
    CHECK(spC.A[2] == std::vector<int>{0});
    CHECK(spC.aprime[1] == std::vector<int>{0});
    CHECK(spC.A[1] == std::vector<int>{1, 2});
    CHECK(spC.aprime[0] == std::vector<int>{0, 1});
    CHECK(spC.A[0] == std::vector<int>{2, 3});

    // L = 0: empty split
    auto ltA = loadFixture("model_a.brst");
    IndexSplit spA = computeSplit(ltA.get());
    CHECK(spA.A[0] == std::vector<int>{0});

    // Z = 0 at a stage with m_{k+1} > 0 is a rank error
    std::string text = fixtureText("model_b.brst");
    auto pos = text.find("row 1");
    text.replace(pos, 5, "row 0");
    pos = text.find("row 1", pos);
    text.replace(pos, 5, "row 0");
    pos = text.find("row -1", pos);
    text.replace(pos, 6, "row 0");
    auto lt = parseModelText(text);
    CHECK_THROWS_WITH_AS(computeSplit(lt.get()), doctest::Contains("rank"), Error);
}

TEST_CASE("user-supplied split is verified") {
    std::string text = fixtureText("model_b.brst");
    text += R"(
[split]
A 1 : 0
aprime 0 : 1
zinv 1 row 1
)";
    auto lt = parseModelText(text);
    IndexSplit sp = computeSplit(lt.get());
    CHECK(sp.aprime[0] == std::vector<int>{1});
    CHECK(sp.A[0] == std::vector<int>{0, 2});

    // wrong inverse rejected
    std::string bad = text;
    auto pos = bad.find("zinv 1 row 1");
    bad.replace(pos, 12, "zinv 1 row 2");
    auto lt2 = parseModelText(bad);
    CHECK_THROWS_WITH_AS(computeSplit(lt2.get()), doctest::Contains("not an exact inverse"), Error);
}

TEST_CASE("omega1 parameter validation") {
    auto lt = loadFixture("model_c.brst");
    Theory& th = lt.get();
    Omega1Params p = Omega1Params::zeros(th);
    CHECK(p.validate(th).empty());

    // wrong parity entry flagged
    p.Mred[2][0].at(2, 0) = th.v(th.cat.momP(0, 0, 1, 0));  // odd, should be even
    auto errs = p.validate(th);
    CHECK(!errs.empty());

    // stage-0 momenta are allowed at stage 2 (s-2 = 0), stage-1 are not
    Omega1Params p2 = Omega1Params::zeros(th);
    p2.Mred[2][0].at(2, 0) = th.v(th.cat.momP(1, 0, 2, 0)) * th.v(th.cat.momP(0, 0, 1, 0));
    auto errs2 = p2.validate(th);
    bool found = false;
    for (auto& e : errs2)
        if (e.find("stage-1 momenta") != std::string::npos) found = true;
    CHECK(found);
}
