#include "tdsynth/coset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <utility>
#include <vector>

namespace tdsynth {

const char* const kLabelDigestAlgo = "sha256";

namespace {

using NumPair = std::pair<Int, Int>;

// Numerator of an entry over the common denominator sqrt2^kk:
// one raising step multiplies by sqrt2, (a, b) -> (2b, a).
NumPair raised_numerator(const DyadicRootTwo& v, int kk) {
    Int a = v.a(), b = v.b();
    for (int t = v.k(); t < kk; ++t) {
        Int na = ck_mul(2, b);
        b = a;
        a = na;
    }
    return {a, b};
}

}  // namespace

ChannelMatrix coset_label(const ChannelMatrix& w) {
    const int dim = w.dim();
    const int kk = w.sde();

    std::vector<std::vector<NumPair>> cols(dim, std::vector<NumPair>(dim));
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) cols[c][r] = raised_numerator(w.at(r, c), kk);

        int lead = -1;
        for (int r = 0; r < dim; ++r)
            if (cols[c][r] != NumPair{0, 0}) {
                lead = r;
                break;
            }
        if (lead < 0) throw ValidationError("coset_label: zero column in orthogonal matrix");
        auto [a, b] = cols[c][lead];
        if (a < 0 || (a == 0 && b < 0))
            for (auto& [x, y] : cols[c]) {
                x = ck_neg(x);
                y = ck_neg(y);
            }
    }

    std::stable_sort(cols.begin(), cols.end(),
                     [](const std::vector<NumPair>& x, const std::vector<NumPair>& y) {
                         return x > y;
                     });
    for (int c = 1; c < dim; ++c)
        if (cols[c - 1] == cols[c])
            throw ValidationError("coset_label: equal columns in orthogonal matrix");

    ChannelMatrix label(w.n());
    for (int c = 0; c < dim; ++c)
        for (int r = 0; r < dim; ++r)
            label.at(r, c) = DyadicRootTwo(cols[c][r].first, cols[c][r].second, kk);
    return label;
}

std::string label_digest(const ChannelMatrix& label) {
    std::string bytes;
    bytes.reserve(static_cast<size_t>(label.dim()) * label.dim() * 17 + 8);
    auto put64 = [&bytes](Int v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put64(label.n());
    for (int r = 0; r < label.dim(); ++r)
        for (int c = 0; c < label.dim(); ++c) {
            const DyadicRootTwo& v = label.at(r, c);
            put64(v.a());
            put64(v.b());
            bytes.push_back(static_cast<char>(v.k()));
        }

    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("label_digest: digest failure");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

std::string coset_digest(const ChannelMatrix& w) { return label_digest(coset_label(w)); }

bool same_coset(const ChannelMatrix& w, const ChannelMatrix& v, ChannelMatrix* witness) {
    if (w.n() != v.n()) throw Error("same_coset: size mismatch");
    if (coset_label(w) != coset_label(v)) return false;
    ChannelMatrix c = channel_mul(channel_inverse(v), w);
    if (!is_clifford_channel(c))
        throw Error("same_coset: equal labels but residual is not Clifford");
    if (witness) *witness = c;
    return true;
}

}  // namespace tdsynth
