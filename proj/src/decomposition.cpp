#include "tdsynth/decomposition.hpp"

namespace tdsynth {

ChannelMatrix decomposition_channel(const Decomposition& d) {
    ChannelMatrix m = channel_of_tableau(d.trailing);
    for (auto it = d.blocks.rbegin(); it != d.blocks.rend(); ++it) {
        for (auto ut = it->units.rbegin(); ut != it->units.rend(); ++ut)
            m = rp_apply_left(*ut, m);
    }
    return m;
}

bool decomposition_matches(const Decomposition& d, const ChannelMatrix& a) {
    return d.n == a.n() && decomposition_channel(d) == a;
}

Block conjugate_block(const CliffordTableau& c, const Block& b) {
    std::vector<RpUnit> units;
    units.reserve(b.units.size());
    for (const auto& u : b.units) {
        SignedPauli img = conjugate(c, pauli_from_index(b.n, u.pauli));
        units.push_back(RpUnit{pauli_index(img.unsigned_part()), u.dagger != img.neg});
    }
    return make_block(b.n, std::move(units));
}

}  // namespace tdsynth
