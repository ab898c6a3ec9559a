#pragma once

#include <optional>
#include <vector>

#include "tdsynth/ring.hpp"

namespace tdsynth {

/** Dense square matrix over GaussianRootTwo (row-major). */
class UMat {
  public:
    UMat() : dim_(0) {}
    explicit UMat(int dim) : dim_(dim), d_(static_cast<size_t>(dim) * dim) {}

    static UMat identity(int dim) {
        UMat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = GaussianRootTwo::one();
        return m;
    }

    int dim() const { return dim_; }

    GaussianRootTwo& at(int r, int c) { return d_[static_cast<size_t>(r) * dim_ + c]; }
    const GaussianRootTwo& at(int r, int c) const {
        return d_[static_cast<size_t>(r) * dim_ + c];
    }

    UMat operator*(const UMat& o) const;
    UMat dagger() const;
    UMat kron(const UMat& o) const;
    UMat scaled(const GaussianRootTwo& s) const;

    bool operator==(const UMat& o) const { return dim_ == o.dim_ && d_ == o.d_; }
    bool operator!=(const UMat& o) const { return !(*this == o); }

    bool is_unitary() const;

    /** Exact determinant (fraction-free elimination over Z[i, sqrt2]). */
    GaussianRootTwo det() const;

  private:
    int dim_;
    std::vector<GaussianRootTwo> d_;
};

/**
 * If V == omega^p * U for some p in [0, 8), return p; otherwise nullopt.
 * omega = e^{i pi/4}, so this is equality up to an eighth-root-of-unity phase.
 */
std::optional<int> unitary_equal_up_to_phase(const UMat& u, const UMat& v);

}  // namespace tdsynth
