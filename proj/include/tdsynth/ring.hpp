#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace tdsynth {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/** Integer arithmetic overflowed; results are never silently wrapped. */
struct OverflowError : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct ResourceError : Error {
    using Error::Error;
};

using Int = std::int64_t;

inline Int ck_add(Int x, Int y) {
    Int r;
    if (__builtin_add_overflow(x, y, &r)) throw OverflowError("int64 add overflow");
    return r;
}

inline Int ck_sub(Int x, Int y) {
    Int r;
    if (__builtin_sub_overflow(x, y, &r)) throw OverflowError("int64 sub overflow");
    return r;
}

inline Int ck_mul(Int x, Int y) {
    Int r;
    if (__builtin_mul_overflow(x, y, &r)) throw OverflowError("int64 mul overflow");
    return r;
}

inline Int ck_neg(Int x) { return ck_sub(0, x); }

/**
 * DyadicRootTwo: (a + b*sqrt(2)) / sqrt(2)^k with integer a, b and k >= 0.
 *
 * Values are kept in canonical minimal-k form at all times: either k == 0 or
 * a is odd, and zero is stored as (0, 0, 0).  With that invariant sde() is a
 * field read and equality is a tuple compare.
 */
class DyadicRootTwo {
  public:
    DyadicRootTwo() : a_(0), b_(0), k_(0) {}
    DyadicRootTwo(Int a, Int b, int k) : a_(a), b_(b), k_(k) {
        if (k < 0) throw Error("DyadicRootTwo: negative denominator exponent");
        canonicalize();
    }
    static DyadicRootTwo from_int(Int v) { return DyadicRootTwo(v, 0, 0); }
    static DyadicRootTwo zero() { return DyadicRootTwo(); }
    static DyadicRootTwo one() { return from_int(1); }

    Int a() const { return a_; }
    Int b() const { return b_; }
    int k() const { return k_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    /** Smallest denominator exponent; sde(0) == 0 by convention. */
    int sde() const { return k_; }

    DyadicRootTwo operator-() const {
        DyadicRootTwo r;
        r.a_ = ck_neg(a_);
        r.b_ = ck_neg(b_);
        r.k_ = k_;
        return r;
    }

    DyadicRootTwo operator+(const DyadicRootTwo& o) const {
        Int xa = a_, xb = b_, ya = o.a_, yb = o.b_;
        int kk = raise_common(xa, xb, k_, ya, yb, o.k_);
        return DyadicRootTwo(ck_add(xa, ya), ck_add(xb, yb), kk);
    }
    DyadicRootTwo operator-(const DyadicRootTwo& o) const { return *this + (-o); }

    DyadicRootTwo operator*(const DyadicRootTwo& o) const {
        Int a = ck_add(ck_mul(a_, o.a_), ck_mul(2, ck_mul(b_, o.b_)));
        Int b = ck_add(ck_mul(a_, o.b_), ck_mul(b_, o.a_));
        return DyadicRootTwo(a, b, k_ + o.k_);
    }

    /** Multiply by sqrt(2)^-t, i.e. push the denominator exponent up by t. */
    DyadicRootTwo div_root2(int t) const {
        if (is_zero()) return *this;
        return DyadicRootTwo(a_, b_, k_ + t);
    }

    bool operator==(const DyadicRootTwo& o) const {
        return a_ == o.a_ && b_ == o.b_ && k_ == o.k_;
    }
    bool operator!=(const DyadicRootTwo& o) const { return !(*this == o); }

    double to_double() const;
    std::string str() const;

  private:
    // Raise both operands to the larger exponent; multiplying the numerator by
    // sqrt(2) maps (a, b) to (2b, a).
    static int raise_common(Int& xa, Int& xb, int xk, Int& ya, Int& yb, int yk) {
        while (xk < yk) {
            Int na = ck_mul(2, xb);
            xb = xa;
            xa = na;
            ++xk;
        }
        while (yk < xk) {
            Int na = ck_mul(2, yb);
            yb = ya;
            ya = na;
            ++yk;
        }
        return xk;
    }

    void canonicalize() {
        if (a_ == 0 && b_ == 0) {
            k_ = 0;
            return;
        }
        // (a + b*sqrt2)/sqrt2^k == (b + (a/2)*sqrt2)/sqrt2^(k-1) when a is even.
        while (k_ > 0 && (a_ & 1) == 0) {
            Int na = b_;
            b_ = a_ / 2;
            a_ = na;
            --k_;
        }
    }

    Int a_, b_;
    int k_;
};

/**
 * GaussianRootTwo: (a + b*i + c*sqrt(2) + d*i*sqrt(2)) / sqrt(2)^k.
 *
 * Canonical form: k == 0, or a and b are not both even (one division by
 * sqrt(2) is legal exactly when both are even).  Zero is (0,0,0,0,0).
 */
class GaussianRootTwo {
  public:
    GaussianRootTwo() : a_(0), b_(0), c_(0), d_(0), k_(0) {}
    GaussianRootTwo(Int a, Int b, Int c, Int d, int k) : a_(a), b_(b), c_(c), d_(d), k_(k) {
        if (k < 0) throw Error("GaussianRootTwo: negative denominator exponent");
        canonicalize();
    }
    static GaussianRootTwo from_int(Int v) { return GaussianRootTwo(v, 0, 0, 0, 0); }
    static GaussianRootTwo zero() { return GaussianRootTwo(); }
    static GaussianRootTwo one() { return from_int(1); }
    static GaussianRootTwo i() { return GaussianRootTwo(0, 1, 0, 0, 0); }
    /** e^{i pi/4} = (1 + i)/sqrt(2). */
    static GaussianRootTwo omega() { return GaussianRootTwo(1, 1, 0, 0, 1); }
    static GaussianRootTwo from_dyadic(const DyadicRootTwo& v) {
        return GaussianRootTwo(v.a(), 0, v.b(), 0, v.k());
    }

    Int a() const { return a_; }
    Int b() const { return b_; }
    Int c() const { return c_; }
    Int d() const { return d_; }
    int k() const { return k_; }

    bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
    int sde() const { return k_; }
    bool is_real() const { return b_ == 0 && d_ == 0; }

    DyadicRootTwo to_dyadic() const {
        if (!is_real()) throw Error("GaussianRootTwo: not a real value");
        return DyadicRootTwo(a_, c_, k_);
    }

    GaussianRootTwo conj() const {
        GaussianRootTwo r = *this;
        r.b_ = ck_neg(r.b_);
        r.d_ = ck_neg(r.d_);
        return r;
    }

    GaussianRootTwo operator-() const {
        GaussianRootTwo r = *this;
        r.a_ = ck_neg(r.a_);
        r.b_ = ck_neg(r.b_);
        r.c_ = ck_neg(r.c_);
        r.d_ = ck_neg(r.d_);
        return r;
    }

    GaussianRootTwo operator+(const GaussianRootTwo& o) const {
        GaussianRootTwo x = *this, y = o;
        // Raise the lower exponent: numerator * sqrt2 maps (a,b,c,d) to (2c,2d,a,b).
        while (x.k_ < y.k_) x.raise();
        while (y.k_ < x.k_) y.raise();
        return GaussianRootTwo(ck_add(x.a_, y.a_), ck_add(x.b_, y.b_), ck_add(x.c_, y.c_),
                               ck_add(x.d_, y.d_), x.k_);
    }
    GaussianRootTwo operator-(const GaussianRootTwo& o) const { return *this + (-o); }

    GaussianRootTwo operator*(const GaussianRootTwo& o) const {
        const Int a1 = a_, b1 = b_, c1 = c_, d1 = d_;
        const Int a2 = o.a_, b2 = o.b_, c2 = o.c_, d2 = o.d_;
        Int a = ck_add(ck_sub(ck_mul(a1, a2), ck_mul(b1, b2)),
                       ck_mul(2, ck_sub(ck_mul(c1, c2), ck_mul(d1, d2))));
        Int b = ck_add(ck_add(ck_mul(a1, b2), ck_mul(b1, a2)),
                       ck_mul(2, ck_add(ck_mul(c1, d2), ck_mul(d1, c2))));
        Int c = ck_sub(ck_add(ck_mul(a1, c2), ck_mul(c1, a2)),
                       ck_add(ck_mul(b1, d2), ck_mul(d1, b2)));
        Int d = ck_add(ck_add(ck_mul(a1, d2), ck_mul(d1, a2)),
                       ck_add(ck_mul(b1, c2), ck_mul(c1, b2)));
        return GaussianRootTwo(a, b, c, d, k_ + o.k_);
    }

    GaussianRootTwo div_root2(int t) const {
        if (is_zero()) return *this;
        return GaussianRootTwo(a_, b_, c_, d_, k_ + t);
    }

    bool operator==(const GaussianRootTwo& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && d_ == o.d_ && k_ == o.k_;
    }
    bool operator!=(const GaussianRootTwo& o) const { return !(*this == o); }

    std::complex<double> to_complex() const;
    std::string str() const;

  private:
    void raise() {
        Int na = ck_mul(2, c_), nb = ck_mul(2, d_);
        c_ = a_;
        d_ = b_;
        a_ = na;
        b_ = nb;
        ++k_;
    }

    void canonicalize() {
        if (is_zero()) {
            k_ = 0;
            return;
        }
        while (k_ > 0 && (a_ & 1) == 0 && (b_ & 1) == 0) {
            Int na = c_, nb = d_;
            c_ = a_ / 2;
            d_ = b_ / 2;
            a_ = na;
            b_ = nb;
            --k_;
        }
    }

    Int a_, b_, c_, d_;
    int k_;
};

struct DyadicHash {
    std::size_t operator()(const DyadicRootTwo& v) const {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(v.a()));
        mix(static_cast<std::uint64_t>(v.b()));
        mix(static_cast<std::uint64_t>(v.k()));
        return h;
    }
};

}  // namespace tdsynth
