#include "tdsynth/ring.hpp"

#include <cmath>
#include <initializer_list>
#include <sstream>
#include <utility>

namespace tdsynth {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

double DyadicRootTwo::to_double() const {
    return (static_cast<double>(a_) + static_cast<double>(b_) * kSqrt2) / std::pow(kSqrt2, k_);
}

namespace {
// Numerator with zero terms omitted; "0" only for the zero value itself.
std::string term_sum(std::initializer_list<std::pair<Int, const char*>> terms) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [v, suffix] : terms) {
        if (v == 0) continue;
        if (!first && v > 0) os << "+";
        os << v << suffix;
        first = false;
    }
    return os.str();
}
}  // namespace

std::string DyadicRootTwo::str() const {
    if (is_zero()) return "0";
    std::string num = term_sum({{a_, ""}, {b_, "r2"}});
    if (k_ == 0) return num;
    return "(" + num + ")/r2^" + std::to_string(k_);
}

std::complex<double> GaussianRootTwo::to_complex() const {
    double den = std::pow(kSqrt2, k_);
    double re = (static_cast<double>(a_) + static_cast<double>(c_) * kSqrt2) / den;
    double im = (static_cast<double>(b_) + static_cast<double>(d_) * kSqrt2) / den;
    return {re, im};
}

std::string GaussianRootTwo::str() const {
    if (is_zero()) return "0";
    std::string num = term_sum({{a_, ""}, {b_, "i"}, {c_, "r2"}, {d_, "ir2"}});
    if (k_ == 0) return num;
    return "(" + num + ")/r2^" + std::to_string(k_);
}

}  // namespace tdsynth
