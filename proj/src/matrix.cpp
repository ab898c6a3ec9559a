#include "tdsynth/matrix.hpp"

namespace tdsynth {

UMat UMat::operator*(const UMat& o) const {
    if (dim_ != o.dim_) throw Error("UMat: dimension mismatch");
    UMat r(dim_);
    for (int i = 0; i < dim_; ++i) {
        for (int k = 0; k < dim_; ++k) {
            const GaussianRootTwo& v = at(i, k);
            if (v.is_zero()) continue;
            for (int j = 0; j < dim_; ++j) {
                const GaussianRootTwo& w = o.at(k, j);
                if (w.is_zero()) continue;
                r.at(i, j) = r.at(i, j) + v * w;
            }
        }
    }
    return r;
}

UMat UMat::dagger() const {
    UMat r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r.at(j, i) = at(i, j).conj();
    return r;
}

UMat UMat::kron(const UMat& o) const {
    UMat r(dim_ * o.dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) {
            const GaussianRootTwo& v = at(i, j);
            if (v.is_zero()) continue;
            for (int p = 0; p < o.dim_; ++p)
                for (int q = 0; q < o.dim_; ++q) {
                    if (o.at(p, q).is_zero()) continue;
                    r.at(i * o.dim_ + p, j * o.dim_ + q) = v * o.at(p, q);
                }
        }
    return r;
}

UMat UMat::scaled(const GaussianRootTwo& s) const {
    UMat r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (!at(i, j).is_zero()) r.at(i, j) = at(i, j) * s;
    return r;
}

bool UMat::is_unitary() const {
    return (*this) * dagger() == UMat::identity(dim_);
}

namespace {

// Z[i, sqrt2] without denominators, for fraction-free elimination.
struct ZiR2 {
    Int a = 0, b = 0, c = 0, d = 0;
    bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
    ZiR2 conj() const { return {a, ck_neg(b), c, ck_neg(d)}; }
    // Galois map sqrt2 -> -sqrt2.
    ZiR2 sigma() const { return {a, b, ck_neg(c), ck_neg(d)}; }
    ZiR2 operator*(const ZiR2& o) const {
        ZiR2 r;
        r.a = ck_add(ck_sub(ck_mul(a, o.a), ck_mul(b, o.b)),
                     ck_mul(2, ck_sub(ck_mul(c, o.c), ck_mul(d, o.d))));
        r.b = ck_add(ck_add(ck_mul(a, o.b), ck_mul(b, o.a)),
                     ck_mul(2, ck_add(ck_mul(c, o.d), ck_mul(d, o.c))));
        r.c = ck_sub(ck_add(ck_mul(a, o.c), ck_mul(c, o.a)),
                     ck_add(ck_mul(b, o.d), ck_mul(d, o.b)));
        r.d = ck_add(ck_add(ck_mul(a, o.d), ck_mul(d, o.a)),
                     ck_add(ck_mul(b, o.c), ck_mul(c, o.b)));
        return r;
    }
    ZiR2 operator-(const ZiR2& o) const {
        return {ck_sub(a, o.a), ck_sub(b, o.b), ck_sub(c, o.c), ck_sub(d, o.d)};
    }
    ZiR2 div_exact(const ZiR2& v) const {
        // u/v = u * conj(v) * sigma(v*conj(v)) / Nm(v),  Nm(v) integer.
        ZiR2 vc = v.conj();
        ZiR2 w = v * vc;  // real: b == d == 0
        ZiR2 ws = w.sigma();
        Int nm = ck_sub(ck_mul(w.a, w.a), ck_mul(2, ck_mul(w.c, w.c)));
        if (nm == 0) throw Error("ZiR2: division by zero");
        ZiR2 num = (*this) * vc * ws;
        auto dv = [nm](Int x) {
            if (x % nm != 0) throw Error("ZiR2: inexact division");
            return x / nm;
        };
        return {dv(num.a), dv(num.b), dv(num.c), dv(num.d)};
    }
};

}  // namespace

GaussianRootTwo UMat::det() const {
    const int n = dim_;
    if (n == 0) return GaussianRootTwo::one();
    // Common denominator sqrt2^kmax; raising a numerator by sqrt2 maps
    // (a,b,c,d) to (2c,2d,a,b).
    int kmax = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) kmax = std::max(kmax, at(i, j).k());
    std::vector<ZiR2> m(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const GaussianRootTwo& v = at(i, j);
            ZiR2 e{v.a(), v.b(), v.c(), v.d()};
            for (int t = v.k(); t < kmax; ++t)
                e = ZiR2{ck_mul(2, e.c), ck_mul(2, e.d), e.a, e.b};
            m[static_cast<size_t>(i) * n + j] = e;
        }
    auto el = [&m, n](int i, int j) -> ZiR2& { return m[static_cast<size_t>(i) * n + j]; };

    bool negate = false;
    ZiR2 prev{1, 0, 0, 0};
    for (int p = 0; p < n - 1; ++p) {
        if (el(p, p).is_zero()) {
            int s = -1;
            for (int i = p + 1; i < n; ++i)
                if (!el(i, p).is_zero()) {
                    s = i;
                    break;
                }
            if (s < 0) return GaussianRootTwo::zero();
            for (int j = 0; j < n; ++j) std::swap(el(p, j), el(s, j));
            negate = !negate;
        }
        for (int i = p + 1; i < n; ++i)
            for (int j = p + 1; j < n; ++j)
                el(i, j) = (el(i, j) * el(p, p) - el(i, p) * el(p, j)).div_exact(prev);
        prev = el(p, p);
    }
    ZiR2 dt = el(n - 1, n - 1);
    if (negate) dt = ZiR2{0, 0, 0, 0} - dt;
    return GaussianRootTwo(dt.a, dt.b, dt.c, dt.d, 0).div_root2(kmax * n);
}

std::optional<int> unitary_equal_up_to_phase(const UMat& u, const UMat& v) {
    if (u.dim() != v.dim()) return std::nullopt;
    const int n = u.dim();
    GaussianRootTwo w = GaussianRootTwo::omega();
    for (int p = 0; p < 8; ++p) {
        GaussianRootTwo ph = GaussianRootTwo::one();
        for (int t = 0; t < p; ++t) ph = ph * w;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j)
                if (v.at(i, j) != u.at(i, j) * ph) ok = false;
        if (ok) return p;
    }
    return std::nullopt;
}

}  // namespace tdsynth
