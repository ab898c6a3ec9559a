#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "tdsynth/coset.hpp"
#include "tdsynth/gen_set.hpp"
#include "tdsynth/tableau.hpp"

using namespace tdsynth;

namespace {

RpUnit unit(const std::string& pauli, bool dagger = false) {
    return RpUnit{pauli_index(pauli_parse("+" + pauli)), dagger};
}

Block blk(int n, std::initializer_list<RpUnit> units) {
    return make_block(n, std::vector<RpUnit>(units));
}

/** Exact entry-level serialization (not the coset label). */
std::string raw_channel_str(const ChannelMatrix& m) {
    std::ostringstream os;
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) {
            const auto& v = m.at(r, c);
            os << v.a() << ',' << v.b() << ',' << v.k() << ';';
        }
    return os.str();
}

}  // namespace

TEST_CASE("cardinalities n=1..3 with T-count splits") {
    GenSet g1 = build_vn(1);
    CHECK(g1.size() == 6);
    CHECK(g1.by_tcount[0].size() == 6);

    GenSet g2 = build_vn(2);
    CHECK(g2.size() == 122);
    CHECK(g2.by_tcount[0].size() == 30);
    CHECK(g2.by_tcount[1].size() == 92);

    GenSet g3 = build_vn(3);
    CHECK(g3.size() == 2282);
    CHECK(g3.by_tcount[0].size() == 126);
    CHECK(g3.by_tcount[1].size() == 708);
    CHECK(g3.by_tcount[2].size() == 1448);
}

TEST_CASE("n=1 equals the brute-force conjugation set") {
    // All C T~ C' over the 24 single-qubit Cliffords, signs folded.
    std::set<std::string> brute;
    for (const auto& c : enumerate_cliffords(1)) {
        SignedPauli img = conjugate(c, pauli_parse("+Z"));
        for (bool dag : {false, true}) {
            Block b{1, {RpUnit{pauli_index(img.unsigned_part()), dag != img.neg}}};
            brute.insert(block_key(b));
        }
    }
    CHECK(brute.size() == 6);
    GenSet g = build_vn(1);
    CHECK(g.keys == std::unordered_set<std::string>(brute.begin(), brute.end()));
    for (const std::string& p : {"X", "Y", "Z"}) {
        CHECK(g.contains(blk(1, {unit(p, false)})));
        CHECK(g.contains(blk(1, {unit(p, true)})));
    }
}

TEST_CASE("upper bound") {
    CHECK(vn_upper_bound(1) == 32);
    CHECK(vn_upper_bound(2) == 3072);
    for (int n = 1; n <= 3; ++n)
        CHECK(static_cast<long long>(build_vn(n).size()) <= vn_upper_bound(n));
}

TEST_CASE("every emitted block is valid and keys are unique") {
    for (int n = 1; n <= 3; ++n) {
        GenSet g = build_vn(n);
        std::set<std::string> keys;
        for (const auto& b : g.all()) {
            CHECK(block_valid(n, b.units));
            CHECK(keys.insert(block_key(b)).second);
        }
        CHECK(keys.size() == g.size());
    }
}

TEST_CASE("determinism") {
    GenSet a = build_vn(2), b = build_vn(2);
    auto fa = a.all(), fb = b.all();
    REQUIRE(fa.size() == fb.size());
    for (size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == fb[i]);
}

TEST_CASE("block validity rejections") {
    CHECK(!block_valid(1, {}));
    CHECK(!block_valid(2, {unit("IZ"), unit("IZ", true)}));       // duplicate Pauli
    CHECK(!block_valid(2, {unit("XI"), unit("ZI")}));             // anticommuting
    CHECK(!block_valid(2, {unit("ZI"), unit("IZ"), unit("ZZ")})); // dependent
    CHECK(block_valid(2, {unit("ZZ"), unit("XX")}));
    CHECK_THROWS_AS(make_block(2, {unit("XI"), unit("ZI")}), ValidationError);
}

TEST_CASE("block_channel against dense references") {
    // Single R(Z) is T itself.
    Circuit t;
    t.n = 1;
    t.append(GateKind::T, 0);
    CHECK(block_channel(blk(1, {unit("Z")})) == channel_of(simulate_exact(t)));

    // Parallel T on both qubits.
    Circuit tt;
    tt.n = 2;
    tt.append(GateKind::T, 0);
    tt.append(GateKind::T, 1);
    CHECK(block_channel(blk(2, {unit("ZI"), unit("IZ")})) == channel_of(simulate_exact(tt)));

    // Unit application order is irrelevant: factors commute.
    ChannelMatrix fwd = ChannelMatrix::identity(2);
    fwd = rp_apply_left(unit("ZZ"), fwd);
    fwd = rp_apply_left(unit("XX", true), fwd);
    ChannelMatrix rev = ChannelMatrix::identity(2);
    rev = rp_apply_left(unit("XX", true), rev);
    rev = rp_apply_left(unit("ZZ"), rev);
    CHECK(fwd == rev);
    CHECK(fwd == block_channel(blk(2, {unit("ZZ"), unit("XX", true)})));
}

TEST_CASE("distinct blocks give distinct channels (n <= 2, exhaustive)") {
    for (int n = 1; n <= 2; ++n) {
        GenSet g = build_vn(n);
        std::map<std::string, std::string> by_matrix;
        for (const auto& b : g.all()) {
            auto [it, fresh] = by_matrix.emplace(raw_channel_str(block_channel(b)), block_key(b));
            CHECK_MESSAGE(fresh, "collision: ", it->second, " vs ", block_key(b));
        }
    }
}

TEST_CASE("can_merge and merge_blocks") {
    CHECK(can_merge(blk(2, {unit("ZI")}), blk(2, {unit("IZ")})));
    CHECK(!can_merge(blk(1, {unit("Z")}), blk(1, {unit("X")})));
    CHECK(can_merge(blk(2, {unit("ZZ")}), blk(2, {unit("XX")})));
    CHECK(!can_merge(blk(2, {unit("ZI")}), blk(2, {unit("ZI")})));          // duplicate
    CHECK(!can_merge(blk(2, {unit("ZI"), unit("IZ")}), blk(2, {unit("XX")})));  // too large
    CHECK(!can_merge(blk(2, {unit("ZI"), unit("IZ")}), blk(2, {unit("ZZ")})));  // dependent

    Block m = merge_blocks(blk(2, {unit("IZ")}), blk(2, {unit("ZI", true)}));
    CHECK(m.tcount() == 2);
    CHECK(block_channel(m) ==
          channel_mul(block_channel(blk(2, {unit("IZ")})), block_channel(blk(2, {unit("ZI", true)}))));
    CHECK_THROWS_AS(merge_blocks(blk(1, {unit("Z")}), blk(1, {unit("X")})), ValidationError);
}

TEST_CASE("vn_dprime n=1 is the three R(P) cosets") {
    auto labels = build_vn_dprime(1);
    CHECK(labels.size() == 3);
    std::set<std::string> digs;
    for (const auto& l : labels) {
        CHECK(coset_label(l) == l);
        digs.insert(label_digest(l));
    }
    for (const std::string& p : {"X", "Y", "Z"}) {
        CHECK(digs.count(coset_digest(block_channel(blk(1, {unit(p, false)})))) == 1);
        // Adjoint units land in the same coset: R'(P) = R(P) * Clifford.
        CHECK(digs.count(coset_digest(block_channel(blk(1, {unit(p, true)})))) == 1);
    }
}

TEST_CASE("vn_dprime n=2 equals the exhaustive Clifford-conjugation brute force") {
    std::set<std::string> dprime;
    for (const auto& l : build_vn_dprime(2)) dprime.insert(label_digest(l));

    // Independent route: <C> * <T-layer>, label drops the right Clifford factor
    // of the conjugation, so label(<C L C'>) = label(<C><L>).
    std::set<std::string> brute;
    std::vector<ChannelMatrix> layers;
    for (int l = 1; l < 9; ++l) {
        std::vector<RpUnit> units;
        int rem = l;
        for (int q = 0; q < 2; ++q) {
            int choice = rem % 3;
            rem /= 3;
            if (choice == 0) continue;
            units.push_back(RpUnit{pauli_index(pauli_parse(q == 0 ? "+ZI" : "+IZ")), choice == 2});
        }
        layers.push_back(block_channel(make_block(2, units)));
    }
    for (const auto& c : enumerate_cliffords(2)) {
        ChannelMatrix cc = channel_of_tableau(c);
        for (const auto& l : layers) brute.insert(coset_digest(channel_mul(cc, l)));
    }
    CHECK(dprime == brute);
}

TEST_CASE("tdepth1 oracle") {
    ChannelMatrix tch = block_channel(blk(1, {unit("Z")}));
    CHECK(tdepth1_oracle(tch));
    CHECK(tdepth1_oracle(ChannelMatrix::identity(1)));
    CHECK(tdepth1_oracle(ChannelMatrix::identity(2)));

    Circuit tht;
    tht.n = 1;
    tht.append(GateKind::T, 0);
    tht.append(GateKind::H, 0);
    tht.append(GateKind::T, 0);
    CHECK(!tdepth1_oracle(channel_of(simulate_exact(tht))));

    Circuit had;
    had.n = 1;
    had.append(GateKind::H, 0);
    CHECK(tdepth1_oracle(channel_of(simulate_exact(had))));
}

TEST_CASE("coverage: every V_n block channel is T-depth 1 and in vn_dprime") {
    for (int n = 1; n <= 2; ++n) {
        std::set<std::string> dprime;
        for (const auto& l : build_vn_dprime(n)) dprime.insert(label_digest(l));
        GenSet g = build_vn(n);
        for (const auto& b : g.all()) {
            ChannelMatrix ch = block_channel(b);
            CHECK(tdepth1_oracle(ch));
            CHECK(dprime.count(coset_digest(ch)) == 1);
        }
    }
}

TEST_CASE("jsonl cache round trip") {
    GenSet g = build_vn(2);
    std::string path = "genset_test_cache.jsonl";
    save_genset(g, path);
    GenSet back = load_genset(path, 2);
    CHECK(back.n == g.n);
    REQUIRE(back.size() == g.size());
    auto fa = g.all(), fb = back.all();
    for (size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == fb[i]);
    CHECK_THROWS_AS(load_genset(path, 3), ParseError);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_genset(path, 2), ParseError);
}
