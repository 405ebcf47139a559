#include "mlyap/types.hpp"

namespace mlyap {

double pairwise_sum(const double* data, std::ptrdiff_t n) {
    if (n <= 0) return 0.0;
    if (n <= 8) {
        double s = data[0];
        for (std::ptrdiff_t i = 1; i < n; ++i) s += data[i];
        return s;
    }
    const std::ptrdiff_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const Vector& v) { return pairwise_sum(v.data(), v.size()); }

}  // namespace mlyap
