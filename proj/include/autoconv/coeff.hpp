#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace autoconv {

/**
 * Taylor coefficients of sqrt(1 - x) = 1 - sum_{n>=1} c_n x^n.
 *
 * c_n = (2n-3)!! / (2^n n!) with (-1)!! = 1, so c_1 = 1/2. The table is
 * filled by the ratio recurrence c_{n+1} = c_n (2n-1)/(2n+2), which never
 * forms a factorial and stays finite for any n_max. Partial sums S_N are
 * accumulated with Kahan compensation; sum_n c_n = 1, so 1 - S_N is the
 * exact tail at q = 1.
 *
 * Immutable after construction.
 */
template <typename Scalar>
class CoeffTableT {
public:
    explicit CoeffTableT(std::size_t n_max) {
        if (n_max == 0) {
            throw std::invalid_argument("build_coeffs: n_max must be >= 1");
        }
        values_.resize(n_max);
        partial_sums_.resize(n_max);
        Scalar c = Scalar(1) / Scalar(2);
        Scalar sum = 0;
        Scalar carry = 0;
        for (std::size_t i = 0; i < n_max; ++i) {
            values_[i] = c;
            const Scalar y = c - carry;
            const Scalar t = sum + y;
            carry = (t - sum) - y;
            sum = t;
            partial_sums_[i] = sum;
            const auto n = static_cast<Scalar>(i + 1);
            c = c * (Scalar(2) * n - Scalar(1)) / (Scalar(2) * n + Scalar(2));
        }
    }

    std::size_t n_max() const { return values_.size(); }

    /// c_n, 1-based.
    Scalar c(std::size_t n) const { return values_.at(n - 1); }

    /// S_N = c_1 + ... + c_N, 1-based.
    Scalar partial_sum(std::size_t n) const { return partial_sums_.at(n - 1); }

    const std::vector<Scalar>& values() const { return values_; }
    const std::vector<Scalar>& partial_sums() const { return partial_sums_; }

    /**
     * Certified upper bound on sum_{n>N} c_n q^n.
     *
     * q < 1: c_{N+1} q^{N+1} / (1 - q), valid because c_n is decreasing,
     * capped by 1 - S_N for q within rounding of 1.
     * q = 1: 1 - S_N, which is the tail itself.
     */
    Scalar tail_bound(std::size_t big_n, Scalar q) const {
        if (!(q >= Scalar(0) && q <= Scalar(1))) {
            throw std::invalid_argument("tail_bound: q must lie in [0, 1]");
        }
        if (big_n < 1 || big_n >= n_max()) {
            throw std::invalid_argument("tail_bound: need 1 <= N < n_max");
        }
        if (q == Scalar(0)) {
            return Scalar(0);
        }
        if (q == Scalar(1)) {
            return Scalar(1) - partial_sum(big_n);
        }
        using std::min;
        using std::pow;
        const Scalar geometric = c(big_n + 1) * pow(q, static_cast<Scalar>(big_n + 1)) / (Scalar(1) - q);
        return min(geometric, Scalar(1) - partial_sum(big_n));
    }

private:
    std::vector<Scalar> values_;
    std::vector<Scalar> partial_sums_;
};

using CoeffTable = CoeffTableT<double>;

inline CoeffTable build_coeffs(std::size_t n_max) { return CoeffTable(n_max); }

/// Rows "n,c_n,S_n" with a header line, full round-trip precision.
void write_coeffs_csv(std::ostream& out, const CoeffTable& table);

}  // namespace autoconv
