#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <tuple>

#include "fgt/counting.hpp"
#include "fgt/geometry.hpp"

using namespace fgt;

TEST_CASE("point encode/decode round trip") {
    Space sp(5, 3);
    for (PointId p = 0; p < sp.num_points(); ++p) REQUIRE(sp.encode(sp.decode(p)) == p);
    CHECK(sp.num_points() == 125);
    CHECK_THROWS_AS(Space(3, 0), InvalidParams);
}

TEST_CASE("flat enumeration counts match q^{n-m} qbinom(n,m)") {
    struct Case {
        uint32_t q, n, m;
        int64_t expect;
    };
    for (Case c : {Case{2, 3, 1, 28}, Case{3, 2, 1, 12}, Case{2, 4, 2, 140}, Case{4, 2, 1, 20},
                   Case{3, 3, 2, 39}}) {
        Space sp(c.q, c.n);
        FlatEnumerator en(sp, c.m);
        CAPTURE(c.q, c.n, c.m);
        CHECK(en.size() == c.expect);
        CHECK(BigInt(en.size()) == count_m_flats(c.q, c.n, c.m));
    }
}

TEST_CASE("enumerated flats are distinct point sets") {
    using T = std::tuple<uint32_t, uint32_t, uint32_t>;
    for (auto [q, n, m] : {T{2, 4, 2}, T{3, 2, 1}, T{2, 3, 1}, T{4, 2, 1}}) {
        Space sp(q, n);
        FlatEnumerator en(sp, m);
        std::set<std::vector<PointId>> seen;
        for (int64_t i = 0; i < en.size(); ++i) {
            std::vector<PointId> pts = flat_points(sp, en.at(i));
            std::sort(pts.begin(), pts.end());
            REQUIRE(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
            REQUIRE(seen.insert(pts).second);
        }
    }
}

TEST_CASE("planes of F_2^4 independently derived from spans agree") {
    // enumerate all {a + span(u, v)} point sets and deduplicate
    Space sp(2, 4);
    std::set<std::set<PointId>> planes;
    for (PointId a = 0; a < 16; ++a)
        for (PointId u = 1; u < 16; ++u)
            for (PointId v = 1; v < 16; ++v) {
                if (v == u) continue;
                std::set<PointId> pts;
                for (uint32_t cu = 0; cu < 2; ++cu)
                    for (uint32_t cv = 0; cv < 2; ++cv) {
                        PointId p = a;
                        if (cu) p = sp.point_add(p, u);
                        if (cv) p = sp.point_add(p, v);
                        pts.insert(p);
                    }
                if (pts.size() == 4) planes.insert(pts);
            }
    CHECK(planes.size() == 140);
}

TEST_CASE("flat_points yields q^m distinct points containing the translate") {
    Space sp(3, 3);
    FlatEnumerator en(sp, 2);
    for (int64_t i = 0; i < en.size(); ++i) {
        Flat f = en.at(i);
        std::vector<PointId> pts = flat_points(sp, f);
        REQUIRE(pts.size() == 9);
        std::set<PointId> uniq(pts.begin(), pts.end());
        REQUIRE(uniq.size() == 9);
        REQUIRE(uniq.count(sp.encode(f.translate)) == 1);
    }
}

TEST_CASE("0-flat and axis line examples") {
    Space sp(3, 2);
    Flat pt = affine_span(sp, {PointId(5)});
    CHECK(pt.m == 0);
    CHECK(flat_points(sp, pt) == std::vector<PointId>{5});

    // line through 0 with direction e1 in F_3^2: {(0,0),(1,0),(2,0)} = codes 0,1,2
    Flat line = affine_span(sp, {PointId(0), PointId(1)});
    CHECK(line.m == 1);
    std::vector<PointId> pts = flat_points(sp, line);
    std::sort(pts.begin(), pts.end());
    CHECK(pts == std::vector<PointId>{0, 1, 2});
    CHECK(flat_contains(sp, line, PointId(2)));
    CHECK(flat_contains(sp, line, sp.encode(line.translate)));
    CHECK_FALSE(flat_contains(sp, line, sp.encode({0, 1})));
}

TEST_CASE("affine span of a spanning triple in F_2^2 is the whole plane") {
    Space sp(2, 2);
    Flat f = affine_span(sp, {sp.encode({0, 0}), sp.encode({1, 0}), sp.encode({0, 1})});
    CHECK(f.m == 2);
    CHECK(flat_points(sp, f).size() == 4);
    CHECK_THROWS_AS(affine_span(sp, {}), EmptyInput);
}

TEST_CASE("two distinct points determine a unique line") {
    Space sp(3, 2);
    Flat l1 = affine_span(sp, {PointId(1), PointId(7)});
    Flat l2 = affine_span(sp, {PointId(7), PointId(1)});
    CHECK(l1.m == 1);
    CHECK(l1 == l2);
}

TEST_CASE("canonicity: affine_span(flat_points(f)) == f for every flat") {
    using P = std::pair<uint32_t, uint32_t>;
    for (auto [q, n] : {P{2, 4}, P{3, 2}, P{2, 3}, P{4, 2}, P{3, 3}, P{2, 5}, P{5, 2}}) {
        Space sp(q, n);
        if (sp.num_points() > 256) continue;
        for (uint32_t m = 0; m <= n; ++m) {
            FlatEnumerator en(sp, m);
            for (int64_t i = 0; i < en.size(); ++i) {
                Flat f = en.at(i);
                Flat g = affine_span(sp, flat_points(sp, f));
                REQUIRE(g == f);
            }
        }
    }
}

TEST_CASE("double counting: sum over m-flats of q^m = q^n qbinom(n,m)") {
    using T = std::tuple<uint32_t, uint32_t, uint32_t>;
    for (auto [q, n, m] : {T{2, 4, 2}, T{3, 3, 1}, T{3, 3, 2}, T{2, 5, 1}}) {
        Space sp(q, n);
        FlatEnumerator en(sp, m);
        int64_t qm = 1;
        for (uint32_t i = 0; i < m; ++i) qm *= q;
        CHECK(BigInt(en.size()) * qm == big_pow(q, n) * gaussian_binomial(n, m, q));
    }
}

TEST_CASE("any two distinct points lie on exactly one common line") {
    using P = std::pair<uint32_t, uint32_t>;
    for (auto [q, n] : {P{3, 4}, P{2, 4}, P{3, 2}, P{2, 6}}) {
        Space sp(q, n);
        if (sp.num_points() > 81) continue;
        FlatEnumerator en(sp, 1);
        std::vector<std::vector<PointId>> line_pts;
        for (int64_t i = 0; i < en.size(); ++i) line_pts.push_back(flat_points(sp, en.at(i)));
        for (PointId a = 0; a < sp.num_points(); ++a)
            for (PointId b = a + 1; b < sp.num_points(); ++b) {
                int found = 0;
                for (const auto& pts : line_pts) {
                    bool ha = false, hb = false;
                    for (PointId p : pts) {
                        ha |= p == a;
                        hb |= p == b;
                    }
                    found += ha && hb;
                }
                REQUIRE(found == 1);
            }
    }
}

TEST_CASE("flats through a fixed flat match qbinom(n-d, m-d)") {
    {
        Space sp(2, 3);  // lines through a fixed point: 7
        Flat pt = affine_span(sp, {PointId(3)});
        CHECK(flats_through(sp, pt, 1).size() == 7);
    }
    {
        Space sp(3, 3);  // planes through a fixed line: 4
        Flat line = affine_span(sp, {PointId(0), PointId(4)});
        CHECK(flats_through(sp, line, 2).size() == 4);
    }
    {
        Space sp(2, 4);  // planes through a fixed point: 35
        Flat pt = affine_span(sp, {PointId(9)});
        CHECK(flats_through(sp, pt, 2).size() == 35);
    }
    using P = std::pair<uint32_t, uint32_t>;
    for (auto [q, n] : {P{2, 4}, P{3, 3}}) {
        Space sp(q, n);
        for (uint32_t d = 0; d + 1 < n; ++d) {
            FlatEnumerator den(sp, d);
            Flat fixed = den.at(den.size() / 2);
            for (uint32_t m = d; m <= n; ++m) {
                auto through = flats_through(sp, fixed, m);
                REQUIRE(BigInt(through.size()) == gaussian_binomial(n - d, m - d, q));
            }
        }
    }
}

TEST_CASE("enumeration budget") {
    Space sp(5, 3);
    CHECK_THROWS_AS(FlatEnumerator(sp, 1, 100), BudgetExceeded);
}

TEST_CASE("line_key matches the canonical RREF form") {
    Space sp(5, 2);
    std::map<uint64_t, Flat> by_key;
    for (PointId a = 0; a < sp.num_points(); ++a)
        for (PointId b = 0; b < sp.num_points(); ++b) {
            if (a == b) continue;
            uint64_t key = line_key(sp, a, b);
            Flat canon = affine_span(sp, {a, b});
            auto it = by_key.find(key);
            if (it == by_key.end())
                by_key.emplace(key, canon);
            else
                REQUIRE(it->second == canon);
        }
    CHECK(by_key.size() == 30);  // lines of F_5^2
}

TEST_CASE("PointSet complement and cardinality") {
    PointSet X(100);
    X.insert(3);
    X.insert(64);
    X.insert(99);
    CHECK(X.size() == 3);
    PointSet C = X.complement();
    CHECK(C.size() == 97);
    CHECK_FALSE(C.contains(64));
    CHECK(C.contains(0));
    X.erase(3);
    CHECK(X.size() == 2);
    CHECK(X.to_points() == std::vector<PointId>{64, 99});
}
