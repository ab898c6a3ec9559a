#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tdsynth/matrix.hpp"
#include "tdsynth/pauli.hpp"

using namespace tdsynth;

namespace {

GaussianRootTwo ipow(int t) {
    GaussianRootTwo p = GaussianRootTwo::one();
    for (int i = 0; i < ((t % 4) + 4) % 4; ++i) p = p * GaussianRootTwo::i();
    return p;
}

}  // namespace

TEST_CASE("pauli index encoding") {
    CHECK(pauli_index(pauli_parse("+IX")) == 1);
    CHECK(pauli_index(pauli_parse("+XI")) == 4);
    CHECK(pauli_index(pauli_parse("+ZZ")) == 15);
    CHECK(pauli_index(pauli_parse("+Y")) == 2);
    CHECK(pauli_index(pauli_parse("+III")) == 0);
    CHECK(pauli_index(pauli_parse("+XYZ")) == 1 * 16 + 2 * 4 + 3);
}

TEST_CASE("index round trip") {
    for (int n = 1; n <= 3; ++n) {
        for (PauliIndex idx = 0; idx < (1u << (2 * n)); ++idx) {
            for (bool neg : {false, true}) {
                SignedPauli p = pauli_from_index(n, idx, neg);
                CHECK(p.n == n);
                CHECK(pauli_index(p) == idx);
                CHECK(p.neg == neg);
                CHECK(pauli_parse(pauli_str(p)) == p);
            }
        }
    }
}

TEST_CASE("string forms") {
    CHECK(pauli_str(pauli_parse("-IZY")) == "-IZY");
    CHECK(pauli_str(SignedPauli{2, 0, 0, false}) == "+II");
    CHECK_THROWS_AS(pauli_parse("XZ"), ParseError);   // missing sign
    CHECK_THROWS_AS(pauli_parse("+XQ"), ParseError);  // bad letter
    CHECK_THROWS_AS(pauli_parse("+"), ParseError);
}

TEST_CASE("commutation") {
    auto X = pauli_parse("+X"), Z = pauli_parse("+Z"), Y = pauli_parse("+Y");
    CHECK(!pauli_commutes(X, Z));
    CHECK(!pauli_commutes(X, Y));
    CHECK(pauli_commutes(X, X));
    // Two anticommuting positions cancel.
    CHECK(pauli_commutes(pauli_parse("+XX"), pauli_parse("+ZZ")));
    CHECK(!pauli_commutes(pauli_parse("+XI"), pauli_parse("+ZI")));
    CHECK(pauli_commutes(pauli_parse("+XI"), pauli_parse("+IZ")));
}

TEST_CASE("hermitian product of commuting paulis") {
    CHECK(pauli_mul(pauli_parse("+ZZ"), pauli_parse("+XX")) == pauli_parse("-YY"));
    CHECK(pauli_mul(pauli_parse("+XX"), pauli_parse("+ZZ")) == pauli_parse("-YY"));
    CHECK(pauli_mul(pauli_parse("+XI"), pauli_parse("+IZ")) == pauli_parse("+XZ"));
    CHECK(pauli_mul(pauli_parse("-Y"), pauli_parse("-Y")) == pauli_parse("+I"));
    CHECK_THROWS_AS(pauli_mul(pauli_parse("+X"), pauli_parse("+Z")), Error);
}

TEST_CASE("dense matrices of the single qubit paulis") {
    UMat x = pauli_matrix(pauli_parse("+X"));
    CHECK(x.at(0, 1) == GaussianRootTwo::one());
    CHECK(x.at(1, 0) == GaussianRootTwo::one());
    CHECK(x.at(0, 0) == GaussianRootTwo::zero());

    UMat y = pauli_matrix(pauli_parse("+Y"));
    CHECK(y.at(0, 1) == -GaussianRootTwo::i());
    CHECK(y.at(1, 0) == GaussianRootTwo::i());

    UMat z = pauli_matrix(pauli_parse("+Z"));
    CHECK(z.at(0, 0) == GaussianRootTwo::one());
    CHECK(z.at(1, 1) == -GaussianRootTwo::one());

    // Qubit 0 is the most significant tensor factor.
    CHECK(pauli_matrix(pauli_parse("+XZ")) == x.kron(z));
    CHECK(pauli_matrix(pauli_parse("-XZ")) == x.kron(z).scaled(-GaussianRootTwo::one()));
    CHECK(pauli_matrix(pauli_parse("+ZZY")) == z.kron(z).kron(y));
}

TEST_CASE("raw product agrees with dense arithmetic everywhere") {
    for (int n = 1; n <= 2; ++n) {
        for (PauliIndex i = 0; i < (1u << (2 * n)); ++i) {
            for (PauliIndex j = 0; j < (1u << (2 * n)); ++j) {
                for (int s = 0; s < 4; ++s) {
                    SignedPauli p = pauli_from_index(n, i, s & 1);
                    SignedPauli q = pauli_from_index(n, j, s & 2);
                    BitVec x = 0, z = 0;
                    int phase = 0;
                    pauli_mul_raw(p, q, x, z, phase);
                    SignedPauli w{n, x, z, false};
                    UMat lhs = pauli_matrix(p) * pauli_matrix(q);
                    UMat rhs = pauli_matrix(w).scaled(ipow(phase));
                    REQUIRE(lhs == rhs);
                    // Hermitian product path must agree when defined.
                    if (pauli_commutes(p, q)) {
                        SignedPauli h = pauli_mul(p, q);
                        REQUIRE(pauli_matrix(h) == lhs);
                    }
                }
            }
        }
    }
}

TEST_CASE("pauli matrices are involutions with unit determinant structure") {
    for (PauliIndex i = 0; i < 16; ++i) {
        SignedPauli p = pauli_from_index(2, i);
        UMat m = pauli_matrix(p);
        CHECK(m * m == UMat::identity(4));
        CHECK(m.is_unitary());
    }
}
