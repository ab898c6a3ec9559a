#pragma once

#include <random>

#include "tdsynth/channel.hpp"
#include "tdsynth/circuit.hpp"

namespace tdsynth::testutil {

/** Random circuit over {H, S, T, CNOT}; CNOT only when n > 1. */
inline Circuit random_word(int n, std::mt19937_64& rng, int len) {
    std::uniform_int_distribution<int> kind(0, n > 1 ? 3 : 2);
    std::uniform_int_distribution<int> qubit(0, n - 1);
    Circuit c;
    c.n = n;
    for (int i = 0; i < len; ++i) {
        switch (kind(rng)) {
            case 0: c.append(GateKind::H, qubit(rng)); break;
            case 1: c.append(GateKind::S, qubit(rng)); break;
            case 2: c.append(GateKind::T, qubit(rng)); break;
            default: {
                int a = qubit(rng), b;
                do b = qubit(rng);
                while (b == a);
                c.append(GateKind::CNOT, a, b);
                break;
            }
        }
    }
    return c;
}

inline UMat random_word_unitary(int n, std::mt19937_64& rng, int len) {
    return simulate_exact(random_word(n, rng, len));
}

inline ChannelMatrix random_channel(int n, std::mt19937_64& rng, int len) {
    return channel_of(random_word_unitary(n, rng, len));
}

}  // namespace tdsynth::testutil
