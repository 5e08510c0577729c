#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "slag/registry.hpp"

using namespace slag;
using Catch::Approx;

namespace {

const RootDatum* find_root(const HermannAction& a,
                           const std::vector<int>& lattice) {
    for (const auto& rd : a.roots)
        if (rd.lattice == lattice) return &rd;
    return nullptr;
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        path = std::string("registry_test_") +
               std::to_string(reinterpret_cast<uintptr_t>(this)) + ".json";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("built-in catalog carries the classification rows") {
    ActionCatalog cat = load_catalog();

    const auto& rho1 = cat.lookup("rho1(SO(3)) on SU(3)/SO(3)");
    REQUIRE(rho1.roots.size() == 3);
    CHECK(find_root(rho1, {1, 0})->m_v == 1);
    CHECK(find_root(rho1, {1, 0})->m_h == 0);
    CHECK(find_root(rho1, {0, 1})->m_v == 0);
    CHECK(find_root(rho1, {0, 1})->m_h == 1);
    CHECK(find_root(rho1, {1, 1})->m_v == 0);
    CHECK(find_root(rho1, {1, 1})->m_h == 1);

    const auto& so6 = cat.lookup("SO(6) on SU(6)/Sp(3)");
    REQUIRE(so6.roots.size() == 3);
    for (const auto& rd : so6.roots) {
        CHECK(rd.m_v == 2);
        CHECK(rd.m_h == 2);
    }
    CHECK(so6.family == Family::a2);
    CHECK(so6.dim.value() == 14);
}

TEST_CASE("lookup: g2 row, rank-one rows, not-found") {
    ActionCatalog cat = load_catalog();

    const auto& g2 = cat.lookup("SU(2)^4 on (G2 x G2)/G2");
    CHECK(g2.family == Family::g2);
    REQUIRE(g2.roots.size() == 6);
    for (const auto& rd : g2.roots) {
        CHECK(rd.m_v == 1);
        CHECK(rd.m_h == 1);
    }

    const auto& cp2 = cat.lookup("CPm isotropy, m=2");
    REQUIRE(cp2.rank1.has_value());
    CHECK(cp2.rank1->d == 2);
    CHECK(cp2.rank1->m_v == 2);
    CHECK(cp2.rank1->m_h == 0);
    const RootDatum* dbl = find_root(cp2, {2});
    REQUIRE(dbl != nullptr);
    CHECK(dbl->m_v == 1);  // d - 1
    CHECK(dbl->m_h == 0);

    CHECK_THROWS_AS(cat.lookup("nonexistent"), not_found_error);
    try {
        cat.lookup("sphere-n2");
    } catch (const not_found_error& e) {
        CHECK(std::string(e.what()).find("sphere-n2-p1") != std::string::npos);
    }
}

TEST_CASE("root_frequency realizes lattice keys through the frame") {
    ActionCatalog cat = load_catalog();

    auto a2 = root_frequency(cat.lookup("so6-on-su6-sp3"), {1, 1});
    CHECK(a2[0] == Approx(1.0));
    CHECK(a2[1] == Approx(std::sqrt(3.0)));

    auto g2 = root_frequency(cat.lookup("su2p4-on-g2xg2-g2"), {3, 2});
    CHECK(g2[0] == Approx(4.0 * std::sqrt(3.0)));
    CHECK(g2[1] == Approx(2.0));

    auto r1 = root_frequency(cat.lookup("sphere-n2-p1"), {2});
    CHECK(r1[0] == Approx(2.0));

    CHECK_THROWS_AS(root_frequency(cat.lookup("so6-on-su6-sp3"), {1}),
                    domain_error);
}

TEST_CASE("every built-in rank-2 root set lies in its family's positive system") {
    ActionCatalog cat = load_catalog();
    for (const auto& a : cat.actions()) {
        if (a.rank != 2) continue;
        const auto& ok = allowed_lattices(a.family);
        for (const auto& rd : a.roots)
            CHECK(std::find(ok.begin(), ok.end(), rd.lattice) != ok.end());
        if (a.family == Family::a2) {
            // a2 rows carry the full reduced system {(1,0),(0,1),(1,1)}
            for (auto want : {std::vector<int>{1, 0}, std::vector<int>{0, 1},
                              std::vector<int>{1, 1}}) {
                bool found = false;
                for (const auto& rd : a.roots)
                    if (rd.lattice == want) found = true;
                CHECK(found);
            }
        }
    }
}

TEST_CASE("catalog serializes and reparses to an equal catalog") {
    ActionCatalog cat = load_catalog();
    TempFile f(cat.serialize().dump());
    // parse the round-tripped file as a pure user registry: every entry
    // overrides its built-in twin, so the merge equals the original
    ActionCatalog back = load_catalog(f.path);
    CHECK(back == cat);
}

TEST_CASE("rank-one bookkeeping: m_v + m_h = d(m-1) = dim - d") {
    ActionCatalog cat = load_catalog();
    int seen = 0;
    for (const auto& a : cat.actions()) {
        if (!a.rank1 || !a.dim) continue;
        CHECK(a.rank1->m_v + a.rank1->m_h == *a.dim - a.rank1->d);
        ++seen;
    }
    CHECK(seen >= 10);
}

TEST_CASE("printed-data dimension mismatches carry notes, not dim claims") {
    ActionCatalog cat = load_catalog();
    for (const char* name :
         {"s-u3xu5-on-su8-s-u2xu6", "sp4xsp3-on-sp7-sp2xsp5",
          "sp4-on-e6-spin10u1"}) {
        const auto& a = cat.lookup(name);
        CHECK_FALSE(a.dim.has_value());
        REQUIRE(a.notes.has_value());
        CHECK(a.notes->find("dimension") != std::string::npos);
    }
}

TEST_CASE("user registry files: override, malformed lattice, bad schema") {
    {
        TempFile f(R"({"actions":[{
            "name":"sphere-n2-p1","display":"override","family":"rank1",
            "rank":1,"frame":{"basis":[[1.0]]},
            "roots":[{"lattice":[1],"mv":1,"mh":0}],
            "rank1":{"four_c":4.0,"d":1,"mv":1,"mh":0},
            "dual":null,"notes":null}]})");
        ActionCatalog cat = load_catalog(f.path);
        CHECK(cat.lookup("sphere-n2-p1").display == "override");
    }
    {
        // rank-2 zero lattice vector
        TempFile f(R"({"actions":[{
            "name":"bad2","display":"bad2","family":"a2",
            "rank":2,"frame":{"basis":[[2.0,-1.0],[0.0,1.7320508075688772]]},
            "roots":[{"lattice":[0,0],"mv":1,"mh":0}],
            "rank1":null}]})");
        CHECK_THROWS_AS(load_catalog(f.path), validation_error);
    }
    {
        TempFile f(R"({"actions":[{
            "name":"bad","display":"bad","family":"rank1",
            "rank":1,"frame":{"basis":[[1.0]]},
            "roots":[{"lattice":[0],"mv":1,"mh":0}],
            "rank1":{"four_c":4.0,"d":1,"mv":1,"mh":0}}]})");
        CHECK_THROWS_AS(load_catalog(f.path), validation_error);
    }
    {
        TempFile f(R"({"actions":[{"name":"x"}]})");
        CHECK_THROWS_AS(load_catalog(f.path), parse_error);
    }
    {
        TempFile f("{\"nothing\": 1}");
        CHECK_THROWS_AS(load_catalog(f.path), parse_error);
    }
    CHECK_THROWS_AS(load_catalog(std::string("no_such_file.json")),
                    parse_error);
}

TEST_CASE("spec invariants: rank1 root shape is enforced") {
    HermannAction a;
    a.name = "broken";
    a.display = "broken";
    a.family = Family::rank1;
    a.rank = 1;
    a.frame = FrequencyFrame::rank1();
    a.rank1 = Rank1Params{4.0, 2, 3, 0};
    a.roots.push_back(RootDatum{{1}, 3, 0});
    // missing the 2e* root for d = 2
    CHECK_THROWS_AS(a.validate(), validation_error);
    a.roots.push_back(RootDatum{{2}, 1, 0});
    CHECK_NOTHROW(a.validate());
    // wrong double-root multiplicity
    a.roots.back().m_v = 2;
    CHECK_THROWS_AS(a.validate(), validation_error);
}

TEST_CASE("dimension bookkeeping is enforced when dim is asserted") {
    ActionCatalog cat = load_catalog();
    HermannAction a = cat.lookup("so6-on-su6-sp3");
    a.dim = 15;  // wrong on purpose
    CHECK_THROWS_AS(a.validate(), validation_error);
}
