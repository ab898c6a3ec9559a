#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "helpers.hpp"
#include "tdsynth/coset.hpp"

using namespace tdsynth;
using tdsynth::testutil::random_channel;

namespace {

ChannelMatrix t_channel() { return rp_channel(1, RpUnit{3, false}); }

}  // namespace

TEST_CASE("identity labels to itself") {
    for (int n = 1; n <= 2; ++n)
        CHECK(coset_label(ChannelMatrix::identity(n)) == ChannelMatrix::identity(n));
}

TEST_CASE("idempotence and sde preservation") {
    std::mt19937_64 rng(31);
    for (int n = 1; n <= 2; ++n) {
        for (int rep = 0; rep < 50; ++rep) {
            ChannelMatrix w = random_channel(n, rng, 8);
            ChannelMatrix l = coset_label(w);
            CHECK(coset_label(l) == l);
            CHECK(l.sde() == w.sde());
            CHECK(l.is_orthogonal());
        }
    }
}

TEST_CASE("right clifford invariance, exhaustive n=1") {
    ChannelMatrix t = t_channel();
    std::set<std::string> labels;
    for (const CliffordTableau& c : enumerate_cliffords(1))
        labels.insert(label_digest(coset_label(channel_mul(t, channel_of_tableau(c)))));
    CHECK(labels.size() == 1);
    CHECK(*labels.begin() == coset_digest(t));
}

TEST_CASE("right clifford invariance, sampled n=2") {
    std::mt19937_64 rng(32);
    auto cliffords = enumerate_cliffords(2);
    for (int rep = 0; rep < 3; ++rep) {
        ChannelMatrix w = random_channel(2, rng, 9);
        ChannelMatrix l = coset_label(w);
        for (int i = 0; i < 60; ++i) {
            const CliffordTableau& c = cliffords[rng() % cliffords.size()];
            CHECK(coset_label(channel_mul(w, channel_of_tableau(c))) == l);
        }
    }
}

TEST_CASE("same_coset with witnesses") {
    ChannelMatrix t = t_channel();
    ChannelMatrix h = channel_of(gate_matrix(Gate{GateKind::H, 0}, 1));

    ChannelMatrix witness;
    CHECK(same_coset(t, t, &witness));
    CHECK(witness == ChannelMatrix::identity(1));

    CHECK(same_coset(channel_mul(t, h), t, &witness));
    CHECK(witness == h);

    CHECK(!same_coset(t, h));
}

TEST_CASE("separation, exhaustive n=1") {
    // Family: T-coset members and Clifford-coset members.  Across cosets the
    // residual V^T W is never a signed permutation.
    ChannelMatrix t = t_channel();
    std::vector<ChannelMatrix> family = {ChannelMatrix::identity(1), t};
    for (const CliffordTableau& c : enumerate_cliffords(1)) {
        ChannelMatrix cc = channel_of_tableau(c);
        family.push_back(channel_mul(t, cc));
        family.push_back(cc);
    }
    for (const ChannelMatrix& w : family)
        for (const ChannelMatrix& v : family) {
            bool same = coset_label(w) == coset_label(v);
            ChannelMatrix residual = channel_mul(channel_inverse(v), w);
            CHECK(same == is_clifford_channel(residual));
        }
}

TEST_CASE("digests separate labels") {
    CHECK(std::string(kLabelDigestAlgo) == "sha256");
    std::mt19937_64 rng(33);
    std::set<std::string> digests;
    std::set<std::string> keys;
    for (int rep = 0; rep < 40; ++rep) {
        ChannelMatrix w = random_channel(1, rng, 6);
        ChannelMatrix l = coset_label(w);
        std::string d = label_digest(l);
        CHECK(d.size() == 64);
        digests.insert(d);
        std::string key;
        for (int r = 0; r < l.dim(); ++r)
            for (int c = 0; c < l.dim(); ++c) key += l.at(r, c).str() + ",";
        keys.insert(key);
    }
    // Distinct digests iff distinct canonical matrices.
    CHECK(digests.size() == keys.size());
}
