#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slag/common.hpp"
#include "slag/frame.hpp"

namespace slag {

// A restricted root, keyed by integer coordinates in the simple-root basis,
// with its multiplicity split: m_v = dim(p_beta ∩ q), m_h = dim(p_beta ∩ h).
// A root appears with m_v > 0 iff it lies in the V-system and m_h > 0 iff it
// lies in the H-system; both may be positive.
struct RootDatum {
    std::vector<int> lattice;
    int m_v = 0;
    int m_h = 0;
};

enum class Family { a2, b2, g2, rank1 };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::a2: return "a2";
        case Family::b2: return "b2";
        case Family::g2: return "g2";
        case Family::rank1: return "rank1";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    if (s == "a2") return Family::a2;
    if (s == "b2") return Family::b2;
    if (s == "g2") return Family::g2;
    if (s == "rank1") return Family::rank1;
    throw parse_error("unknown family \"" + s + "\"");
}

struct Rank1Params {
    double four_c = 4.0;
    int d = 1;     // 1 sphere, 2 complex, 4 quaternionic, 8 octonionic
    int m_v = 0;   // split of the e* root
    int m_h = 0;
};

struct HermannAction {
    std::string name;     // ASCII slug, the primary key
    std::string display;  // human-readable "H on G/K" string
    Family family = Family::rank1;
    int rank = 1;
    FrequencyFrame frame;
    std::vector<RootDatum> roots;
    std::optional<Rank1Params> rank1;
    std::optional<std::string> dual;   // inert metadata
    std::optional<std::string> notes;  // validation notes, e.g. printed-data
                                       // dimension mismatches
    std::optional<int> dim;            // dim G/K when asserted

    void validate() const;
};

inline const std::vector<std::vector<int>>& allowed_lattices(Family f) {
    static const std::vector<std::vector<int>> a2 = {
        {1, 0}, {0, 1}, {1, 1}, {2, 0}, {2, 2}, {2, 1}};
    static const std::vector<std::vector<int>> b2 = {
        {1, 0}, {0, 1}, {1, 1}, {2, 1}, {2, 0}, {2, 2}};
    static const std::vector<std::vector<int>> g2 = {
        {1, 0}, {0, 1}, {1, 1}, {1, 2}, {1, 3}, {2, 3}};
    static const std::vector<std::vector<int>> r1 = {{1}, {2}};
    switch (f) {
        case Family::a2: return a2;
        case Family::b2: return b2;
        case Family::g2: return g2;
        case Family::rank1: return r1;
    }
    return r1;
}

inline void HermannAction::validate() const {
    auto fail = [&](const std::string& msg) {
        throw validation_error("action \"" + name + "\": " + msg);
    };
    if (rank != 1 && rank != 2) fail("rank must be 1 or 2");
    if ((family == Family::rank1) != (rank == 1))
        fail("family rank1 iff rank 1");
    if ((family == Family::rank1) != rank1.has_value())
        fail("rank1 parameters present iff family rank1");
    if (frame.rank() != rank) fail("frame rank mismatch");
    if (roots.empty()) fail("empty root list");
    std::vector<std::vector<int>> seen;
    for (const auto& rd : roots) {
        if (static_cast<int>(rd.lattice.size()) != rank)
            fail("root lattice length mismatch");
        bool zero = true;
        for (int v : rd.lattice)
            if (v != 0) zero = false;
        if (zero) fail("zero lattice vector in root list");
        if (rd.m_v < 0 || rd.m_h < 0) fail("negative multiplicity");
        if (rd.m_v + rd.m_h < 1)
            fail("root listed with m_v + m_h = 0");
        if (std::find(seen.begin(), seen.end(), rd.lattice) != seen.end())
            fail("duplicate lattice key in root list");
        seen.push_back(rd.lattice);
        const auto& ok = allowed_lattices(family);
        if (std::find(ok.begin(), ok.end(), rd.lattice) == ok.end()) {
            std::ostringstream os;
            os << "lattice (";
            for (size_t i = 0; i < rd.lattice.size(); ++i)
                os << (i ? "," : "") << rd.lattice[i];
            os << ") not in the " << family_name(family)
               << " positive system";
            fail(os.str());
        }
    }
    if (rank1) {
        // exact Eq-shape: e* with (m_v, m_h); 2e* with (d-1, 0) when d > 1
        const auto& p = *rank1;
        if (p.four_c <= 0.0) fail("four_c must be positive");
        if (p.d < 1) fail("d must be >= 1");
        size_t expect = p.d > 1 ? 2 : 1;
        if (roots.size() != expect) fail("rank1 root list has wrong size");
        const RootDatum* e = nullptr;
        const RootDatum* e2 = nullptr;
        for (const auto& rd : roots) {
            if (rd.lattice == std::vector<int>{1}) e = &rd;
            if (rd.lattice == std::vector<int>{2}) e2 = &rd;
        }
        if (!e || e->m_v != p.m_v || e->m_h != p.m_h)
            fail("rank1 e* root does not carry (m_v, m_h)");
        if (p.d > 1 && (!e2 || e2->m_v != p.d - 1 || e2->m_h != 0))
            fail("rank1 2e* root must carry (d-1, 0)");
    }
    if (dim) {
        int total = rank;
        for (const auto& rd : roots) total += rd.m_v + rd.m_h;
        if (total != *dim)
            fail("multiplicities sum to " + std::to_string(total) +
                 " but dim G/K = " + std::to_string(*dim));
    }
}

// --- JSON (registry schema) -------------------------------------------------

inline nlohmann::json to_json(const HermannAction& a) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& rd : a.roots)
        roots.push_back(
            {{"lattice", rd.lattice}, {"mv", rd.m_v}, {"mh", rd.m_h}});
    nlohmann::json j{{"name", a.name},
                     {"display", a.display},
                     {"family", family_name(a.family)},
                     {"rank", a.rank},
                     {"frame", {{"basis", a.frame.basis()}}},
                     {"roots", roots}};
    if (a.rank1)
        j["rank1"] = {{"four_c", a.rank1->four_c},
                      {"d", a.rank1->d},
                      {"mv", a.rank1->m_v},
                      {"mh", a.rank1->m_h}};
    else
        j["rank1"] = nullptr;
    j["dual"] = a.dual ? nlohmann::json(*a.dual) : nlohmann::json(nullptr);
    j["notes"] = a.notes ? nlohmann::json(*a.notes) : nlohmann::json(nullptr);
    if (a.dim) j["dim"] = *a.dim;
    return j;
}

inline HermannAction action_from_json(const nlohmann::json& j) {
    HermannAction a;
    try {
        a.name = j.at("name").get<std::string>();
        a.display = j.value("display", a.name);
        a.family = family_from_name(j.at("family").get<std::string>());
        a.rank = j.at("rank").get<int>();
        auto basis =
            j.at("frame").at("basis").get<std::vector<std::vector<double>>>();
        a.frame = FrequencyFrame(a.rank, basis);
        for (const auto& rj : j.at("roots")) {
            RootDatum rd;
            rd.lattice = rj.at("lattice").get<std::vector<int>>();
            rd.m_v = rj.at("mv").get<int>();
            rd.m_h = rj.at("mh").get<int>();
            a.roots.push_back(std::move(rd));
        }
        if (j.contains("rank1") && !j.at("rank1").is_null()) {
            Rank1Params p;
            const auto& rj = j.at("rank1");
            p.four_c = rj.at("four_c").get<double>();
            p.d = rj.at("d").get<int>();
            p.m_v = rj.at("mv").get<int>();
            p.m_h = rj.at("mh").get<int>();
            a.rank1 = p;
        }
        if (j.contains("dual") && !j.at("dual").is_null())
            a.dual = j.at("dual").get<std::string>();
        if (j.contains("notes") && !j.at("notes").is_null())
            a.notes = j.at("notes").get<std::string>();
        if (j.contains("dim") && !j.at("dim").is_null())
            a.dim = j.at("dim").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("registry entry \"" + a.name +
                          (a.name.empty() ? "(unnamed)" : "") +
                          "\": " + e.what());
    }
    a.validate();
    return a;
}

// --- Catalog -----------------------------------------------------------------

class ActionCatalog {
  public:
    void insert(HermannAction a) {
        a.validate();
        auto it = index_.find(a.name);
        if (it != index_.end())
            actions_[it->second] = std::move(a);
        else {
            index_[a.name] = actions_.size();
            actions_.push_back(std::move(a));
        }
    }

    const std::vector<HermannAction>& actions() const { return actions_; }
    size_t size() const { return actions_.size(); }
    bool contains(const std::string& name) const {
        return find_ptr(name) != nullptr;
    }

    const HermannAction& lookup(const std::string& name) const {
        const HermannAction* p = find_ptr(name);
        if (p) return *p;
        std::string msg = "unknown action \"" + name + "\"";
        auto near = near_misses(name, 3);
        if (!near.empty()) {
            msg += "; closest names:";
            for (const auto& n : near) msg += " \"" + n + "\"";
        }
        throw not_found_error(msg);
    }

    std::vector<std::string> near_misses(const std::string& name,
                                         size_t count) const {
        std::vector<std::pair<int, std::string>> scored;
        for (const auto& a : actions_) {
            int d = std::min(edit_distance(name, a.name),
                             edit_distance(name, a.display));
            scored.push_back({d, a.name});
        }
        std::sort(scored.begin(), scored.end());
        std::vector<std::string> out;
        for (size_t i = 0; i < scored.size() && i < count; ++i)
            out.push_back(scored[i].second);
        return out;
    }

    nlohmann::json serialize() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& a : actions_) arr.push_back(to_json(a));
        return nlohmann::json{{"actions", arr}};
    }

    bool operator==(const ActionCatalog& o) const {
        return serialize() == o.serialize();
    }

  private:
    const HermannAction* find_ptr(const std::string& name) const {
        auto it = index_.find(name);
        if (it != index_.end()) return &actions_[it->second];
        for (const auto& a : actions_)
            if (a.display == name) return &a;
        return nullptr;
    }

    static int edit_distance(const std::string& a, const std::string& b) {
        std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
        for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
        auto low = [](char c) {
            return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        };
        for (size_t i = 1; i <= a.size(); ++i) {
            cur[0] = static_cast<int>(i);
            for (size_t j = 1; j <= b.size(); ++j) {
                int sub = prev[j - 1] + (low(a[i - 1]) == low(b[j - 1]) ? 0 : 1);
                cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
            }
            std::swap(prev, cur);
        }
        return prev[b.size()];
    }

    std::vector<HermannAction> actions_;
    std::map<std::string, size_t> index_;
};

inline std::vector<double> root_frequency(const HermannAction& a,
                                          const std::vector<int>& lattice) {
    return a.frame.frequency(lattice);
}

// --- Built-in table ----------------------------------------------------------

namespace detail {

struct RootSpec {
    int l1, l2, mv, mh;
};

inline HermannAction make2(Family fam, const std::string& name,
                           const std::string& display,
                           std::vector<RootSpec> roots,
                           std::optional<int> dim,
                           std::optional<std::string> dual = std::nullopt,
                           std::optional<std::string> notes = std::nullopt) {
    HermannAction a;
    a.name = name;
    a.display = display;
    a.family = fam;
    a.rank = 2;
    a.frame = fam == Family::a2   ? FrequencyFrame::a2()
              : fam == Family::b2 ? FrequencyFrame::b2()
                                  : FrequencyFrame::g2();
    for (const auto& r : roots)
        a.roots.push_back(RootDatum{{r.l1, r.l2}, r.mv, r.mh});
    a.dim = dim;
    a.dual = std::move(dual);
    a.notes = std::move(notes);
    return a;
}

inline HermannAction make1(const std::string& name, const std::string& display,
                           int d, int mv, int mh, std::optional<int> dim,
                           double four_c = 4.0,
                           std::optional<std::string> dual = std::nullopt) {
    HermannAction a;
    a.name = name;
    a.display = display;
    a.family = Family::rank1;
    a.rank = 1;
    a.frame = FrequencyFrame::rank1(four_c);
    a.rank1 = Rank1Params{four_c, d, mv, mh};
    a.roots.push_back(RootDatum{{1}, mv, mh});
    if (d > 1) a.roots.push_back(RootDatum{{2}, d - 1, 0});
    a.dim = dim;
    a.dual = std::move(dual);
    return a;
}

}  // namespace detail

// The full catalog of cohomogeneity-two Hermann actions on irreducible rank
// two symmetric spaces, plus the rank-one families on FP^m(4c) and on
// spheres.  Rows with free parameters (q, j, m) are instantiated once at the
// smallest values keeping every printed multiplicity positive.  Three rows
// fail the dimension bookkeeping with the multiplicities exactly as printed;
// those carry a note instead of a dim assertion.
inline ActionCatalog builtin_catalog() {
    using detail::make1;
    using detail::make2;
    using F = Family;
    ActionCatalog cat;

    // a2 family
    cat.insert(make2(F::a2, "rho1-so3-on-su3-so3",
                     "rho1(SO(3)) on SU(3)/SO(3)",
                     {{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 0, 1}}, 5,
                     "SO_0(1,2) on SL(3,R)/SO(3)"));
    cat.insert(make2(F::a2, "so6-on-su6-sp3", "SO(6) on SU(6)/Sp(3)",
                     {{1, 0, 2, 2}, {0, 1, 2, 2}, {1, 1, 2, 2}}, 14));
    cat.insert(make2(F::a2, "rho2-sp3-on-su6-sp3",
                     "rho2(Sp(3)) on SU(6)/Sp(3)",
                     {{1, 0, 4, 0}, {0, 1, 0, 4}, {1, 1, 0, 4}}, 14,
                     "Sp(1,2) on SU*(6)/Sp(3)"));
    cat.insert(make2(F::a2, "sp4-on-e6-f4", "Sp(4) on E6/F4",
                     {{1, 0, 4, 4}, {0, 1, 4, 4}, {1, 1, 4, 4}}, 26));
    cat.insert(make2(F::a2, "rho13-f4-on-e6-f4", "rho13(F4) on E6/F4",
                     {{1, 0, 8, 0}, {0, 1, 0, 8}, {1, 1, 0, 8}}, 26,
                     "F4^{-20} on E6^{-26}/F4"));

    // b2 family
    cat.insert(make2(F::b2, "so5-on-su5-s-u2xu3",
                     "SO(5) on SU(5)/S(U(2)xU(3)), q=3",
                     {{1, 0, 1, 1},
                      {0, 1, 1, 1},
                      {1, 1, 1, 1},
                      {2, 1, 1, 1},
                      {2, 0, 0, 1},
                      {2, 2, 0, 1}},
                     12));
    cat.insert(make2(F::b2, "s-u3xu5-on-su8-s-u2xu6",
                     "S(U(3)xU(5)) on SU(8)/S(U(2)xU(6)), j=2 q=6",
                     {{1, 0, 2, 2},
                      {0, 1, 0, 2},
                      {1, 1, 6, 2},
                      {2, 1, 0, 2},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0}},
                     std::nullopt, std::nullopt,
                     "dimension bookkeeping fails with the multiplicities as "
                     "printed: sum 18 + rank 2 = 20, but dim G/K = 24"));
    cat.insert(make2(F::b2, "s-u2xu2-on-su4-s-u2xu2",
                     "S(U(2)xU(2)) on SU(4)/S(U(2)xU(2)) (non-isotropy)",
                     {{1, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1}, {2, 1, 0, 1}},
                     8));
    cat.insert(make2(F::b2, "so3xso3-on-so6-so2xso4",
                     "SO(3)xSO(3) on SO(6)/SO(2)xSO(4), j=2 q=4",
                     {{1, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1}, {2, 1, 0, 1}},
                     8));
    cat.insert(make2(F::b2, "so4xso4-on-so8-u4", "SO(4)xSO(4) on SO(8)/U(4)",
                     {{1, 0, 2, 2}, {0, 1, 1, 0}, {1, 1, 2, 2}, {2, 1, 1, 0}},
                     12));
    cat.insert(make2(F::b2, "rho3-so4xso4-on-so8-u4",
                     "rho3(SO(4)xSO(4)) on SO(8)/U(4)",
                     {{1, 0, 2, 2}, {0, 1, 0, 1}, {1, 1, 2, 2}, {2, 1, 0, 1}},
                     12, "SO(4,C) on SO*(8)/U(4)"));
    cat.insert(make2(F::b2, "rho4-u4-on-so8-u4", "rho4(U(4)) on SO(8)/U(4)",
                     {{1, 0, 1, 3}, {0, 1, 0, 1}, {1, 1, 1, 3}, {2, 1, 0, 1}},
                     12, "U(2,2) on SO*(8)/U(4)"));
    cat.insert(make2(F::b2, "so4xso6-on-so10-u5",
                     "SO(4)xSO(6) on SO(10)/U(5)",
                     {{1, 0, 2, 2},
                      {0, 1, 2, 2},
                      {1, 1, 2, 2},
                      {2, 1, 2, 2},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0}},
                     20));
    cat.insert(make2(F::b2, "so5xso5-on-so10-u5",
                     "SO(5)xSO(5) on SO(10)/U(5)",
                     {{1, 0, 2, 2},
                      {0, 1, 2, 2},
                      {1, 1, 2, 2},
                      {2, 1, 2, 2},
                      {2, 0, 0, 1},
                      {2, 2, 0, 1}},
                     20));
    cat.insert(make2(F::b2, "rho5-u5-on-so10-u5", "rho5(U(5)) on SO(10)/U(5)",
                     {{1, 0, 4, 0},
                      {0, 1, 0, 4},
                      {1, 1, 0, 4},
                      {2, 1, 0, 4},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0}},
                     20, "U(2,3) on SO*(10)/U(5)"));
    cat.insert(make2(F::b2, "so2sq-x-so3sq-on-so5xso5-so5",
                     "SO(2)^2xSO(3)^2 on (SO(5)xSO(5))/SO(5)",
                     {{1, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 1, 1}, {2, 1, 1, 1}},
                     10));
    cat.insert(make2(F::b2, "rho6-so5-on-so5xso5-so5",
                     "rho6(SO(5)) on (SO(5)xSO(5))/SO(5)",
                     {{1, 0, 2, 0}, {0, 1, 0, 2}, {1, 1, 0, 2}, {2, 1, 0, 2}},
                     10, "SO_0(2,3) on SO(5,C)/SO(5)"));
    cat.insert(make2(F::b2, "rho7-u2-on-sp2-u2", "rho7(U(2)) on Sp(2)/U(2)",
                     {{1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 1, 0}, {2, 1, 0, 1}},
                     6, "U(1,1) on Sp(2,R)/U(2)"));
    cat.insert(make2(F::b2, "su5-on-sp5-sp2xsp3",
                     "SU(5) on Sp(5)/Sp(2)xSp(3), q=3",
                     {{1, 0, 2, 2},
                      {0, 1, 2, 2},
                      {1, 1, 2, 2},
                      {2, 1, 2, 2},
                      {2, 0, 1, 2},
                      {2, 2, 1, 2}},
                     24));
    cat.insert(make2(F::b2, "su4-on-sp4-sp2xsp2",
                     "SU(4) on Sp(4)/Sp(2)xSp(2)",
                     {{1, 0, 2, 2}, {0, 1, 1, 2}, {1, 1, 2, 1}, {2, 1, 1, 3}},
                     16));
    cat.insert(make2(F::b2, "u4-on-sp4-sp2xsp2", "U(4) on Sp(4)/Sp(2)xSp(2)",
                     {{1, 0, 2, 2}, {0, 1, 2, 1}, {1, 1, 2, 1}, {2, 1, 2, 2}},
                     16));
    cat.insert(make2(F::b2, "sp4xsp3-on-sp7-sp2xsp5",
                     "Sp(4)xSp(3) on Sp(7)/Sp(2)xSp(5), j=3 q=5",
                     {{1, 0, 2, 4},
                      {0, 1, 0, 4},
                      {1, 1, 4, 8},
                      {2, 1, 0, 4},
                      {2, 0, 3, 0},
                      {2, 2, 3, 0}},
                     std::nullopt, std::nullopt,
                     "dimension bookkeeping fails with the multiplicities as "
                     "printed: sum 32 + rank 2 = 34, but dim G/K = 40"));
    cat.insert(make2(F::b2, "sp2xsp2-on-sp4-sp2xsp2",
                     "Sp(2)xSp(2) on Sp(4)/Sp(2)xSp(2)",
                     {{1, 0, 3, 1}, {0, 1, 0, 3}, {1, 1, 3, 0}, {2, 1, 0, 4}},
                     16));
    cat.insert(make2(F::b2, "su2sq-so2sq-on-sp2xsp2-sp2",
                     "SU(2)^2.SO(2)^2 on (Sp(2)xSp(2))/Sp(2)",
                     {{1, 0, 1, 1}, {0, 1, 1, 1}, {1, 1, 1, 1}, {2, 1, 1, 1}},
                     10));
    cat.insert(make2(F::b2, "rho8-sp2-on-sp2xsp2-sp2",
                     "rho8(Sp(2)) on (Sp(2)xSp(2))/Sp(2)",
                     {{1, 0, 2, 0}, {0, 1, 0, 2}, {1, 1, 2, 0}, {2, 1, 0, 2}},
                     10, "Sp(2,R) on Sp(2,C)/Sp(2)"));
    cat.insert(make2(F::b2, "rho9-sp2-on-sp2xsp2-sp2",
                     "rho9(Sp(2)) on (Sp(2)xSp(2))/Sp(2)",
                     {{1, 0, 2, 0}, {0, 1, 0, 2}, {1, 1, 2, 0}, {2, 1, 0, 2}},
                     10, "Sp(1,1) on Sp(2,C)/Sp(2)"));
    cat.insert(make2(F::b2, "sp4-on-e6-spin10u1",
                     "Sp(4) on E6/Spin(10).U(1)",
                     {{1, 0, 4, 4}, {0, 1, 3, 3}, {1, 1, 3, 6}, {2, 1, 4, 1}},
                     std::nullopt, std::nullopt,
                     "dimension bookkeeping fails with the multiplicities as "
                     "printed: sum 28 + rank 2 = 30, but dim G/K = 32"));
    cat.insert(make2(F::b2, "su6su2-on-e6-spin10u1",
                     "SU(6).SU(2) on E6/Spin(10).U(1)",
                     {{1, 0, 4, 4},
                      {0, 1, 2, 4},
                      {1, 1, 4, 5},
                      {2, 1, 2, 3},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0}},
                     32));
    cat.insert(make2(F::b2, "rho10-su6su2-on-e6-spin10u1",
                     "rho10(SU(6).SU(2)) on E6/Spin(10).U(1)",
                     {{1, 0, 4, 4},
                      {0, 1, 4, 2},
                      {1, 1, 4, 5},
                      {2, 1, 4, 1},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0}},
                     32, "SU(1,5).SL(2,R) on E6^{-14}/Spin(10).U(1)"));
    cat.insert(make2(F::b2, "rho11-spin10u1-on-e6-spin10u1",
                     "rho11(Spin(10).U(1)) on E6/Spin(10).U(1)",
                     {{1, 0, 8, 0},
                      {2, 0, 1, 0},
                      {2, 2, 1, 0},
                      {0, 1, 0, 6},
                      {1, 1, 0, 9},
                      {2, 1, 0, 5}},
                     32, "SO*(10).U(1) on E6^{-14}/Spin(10).U(1)"));
    cat.insert(make2(F::b2, "rho12-spin10u1-on-e6-spin10u1",
                     "rho12(Spin(10).U(1)) on E6/Spin(10).U(1)",
                     {{1, 0, 6, 2},
                      {0, 1, 1, 5},
                      {1, 1, 6, 3},
                      {2, 1, 1, 4},
                      {2, 0, 0, 1},
                      {2, 2, 0, 1}},
                     32, "SO_0(2,8).U(1) on E6^{-14}/Spin(10).U(1)"));

    // g2 family (coordinates transposed into the preamble (beta_1, beta_2)
    // frame, beta_1 long)
    cat.insert(make2(F::g2, "rho14-so4-on-g2-so4", "rho14(SO(4)) on G2/SO(4)",
                     {{0, 1, 1, 0},
                      {2, 3, 1, 0},
                      {1, 0, 0, 1},
                      {1, 1, 0, 1},
                      {1, 2, 0, 1},
                      {1, 3, 0, 1}},
                     8, "SL(2,R)xSL(2,R) on G2^2/SO(4)"));
    cat.insert(make2(F::g2, "rho15-so4-on-g2-so4", "rho15(SO(4)) on G2/SO(4)",
                     {{0, 1, 1, 0},
                      {2, 3, 1, 0},
                      {1, 0, 0, 1},
                      {1, 1, 0, 1},
                      {1, 2, 0, 1},
                      {1, 3, 0, 1}},
                     8, "rho15*(SO(4)) on G2^2/SO(4)"));
    cat.insert(make2(F::g2, "rho16-g2-on-g2xg2-g2",
                     "rho16(G2) on (G2 x G2)/G2",
                     {{0, 1, 2, 0},
                      {2, 3, 2, 0},
                      {1, 0, 0, 2},
                      {1, 1, 0, 2},
                      {1, 2, 0, 2},
                      {1, 3, 0, 2}},
                     14, "G2^2 on G2^C/G2"));
    cat.insert(make2(F::g2, "su2p4-on-g2xg2-g2", "SU(2)^4 on (G2 x G2)/G2",
                     {{1, 0, 1, 1},
                      {0, 1, 1, 1},
                      {1, 1, 1, 1},
                      {1, 2, 1, 1},
                      {1, 3, 1, 1},
                      {2, 3, 1, 1}},
                     14));

    // rank one: FP^m(4c) rows of the classification, instantiated at m = 2
    // (plus m = 3 for the CP isotropy row)
    cat.insert(make1("cpm-isotropy-m2", "CPm isotropy, m=2", 2, 2, 0, 4));
    cat.insert(make1("cpm-isotropy-m3", "CPm isotropy, m=3", 2, 4, 0, 6));
    cat.insert(make1("s-umxu1-on-cpm-m2", "S(U(m)xU(1)) on CP^m, m=2", 2, 0,
                     2, 4));
    cat.insert(make1("som1-on-cpm-m2", "SO(m+1) on CP^m, m=2", 2, 1, 1, 4));
    cat.insert(make1("hpm-isotropy-m2", "HPm isotropy, m=2", 4, 4, 0, 8));
    cat.insert(make1("spmxsp1-on-hpm-m2", "Sp(m)xSp(1) on HP^m, m=2", 4, 0, 4,
                     8));
    cat.insert(make1("um1-on-hpm-m2", "U(m+1) on HP^m, m=2", 4, 2, 2, 8));
    cat.insert(make1("op2-isotropy", "OP2 isotropy", 8, 8, 0, 16));
    cat.insert(make1("sp3sp1-on-op2", "Sp(3).Sp(1) on OP2", 8, 4, 4, 16));

    // spheres S^n(1) under SO(p)xSO(n+1-p); the base point sits in the
    // size-p block, so p = 1 is the isotropy action
    cat.insert(make1("sphere-n2-p1", "SO(1)xSO(2) on S^2 (n=2, p=1)", 1, 1, 0,
                     2));
    cat.insert(make1("sphere-n2-p2", "SO(2)xSO(1) on S^2 (n=2, p=2)", 1, 0, 1,
                     2));
    cat.insert(make1("sphere-n3-p1", "SO(1)xSO(3) on S^3 (n=3, p=1)", 1, 2, 0,
                     3));
    cat.insert(make1("sphere-n3-p2", "SO(2)xSO(2) on S^3 (n=3, p=2)", 1, 1, 1,
                     3));
    cat.insert(make1("sphere-n3-p3", "SO(3)xSO(1) on S^3 (n=3, p=3)", 1, 0, 2,
                     3));

    return cat;
}

// Built-in catalog merged with an optional user registry file; user entries
// with duplicate names override built-ins.
inline ActionCatalog load_catalog(
    const std::optional<std::string>& path = std::nullopt) {
    ActionCatalog cat = builtin_catalog();
    if (!path) return cat;
    std::ifstream in(*path);
    if (!in) throw parse_error("cannot open registry file \"" + *path + "\"");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("registry file \"" + *path + "\": " + e.what());
    }
    if (!j.contains("actions") || !j["actions"].is_array())
        throw parse_error("registry file \"" + *path +
                          "\": top-level \"actions\" array missing");
    for (const auto& aj : j["actions"]) cat.insert(action_from_json(aj));
    return cat;
}

}  // namespace slag
