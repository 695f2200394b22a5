#ifndef GHGD_EXACT_HPP
#define GHGD_EXACT_HPP

// Arbitrary-precision combinatorial primitives: binomials, elementary
// symmetric polynomials, alternating partial binomial sums and exact
// decimal rendering of rationals.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "ghgd/error.hpp"

namespace ghgd {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Non-negative count of subset selections.
using BigCount = BigInt;
/// Exact probability, expectation or moment; GMP keeps it in lowest terms.
using ExactRatio = Rational;

/// Subset sizes M[0..T-1].
class SubsetSizes {
public:
    SubsetSizes() = default;

    explicit SubsetSizes(std::vector<std::uint64_t> m) : m_(std::move(m)) {
        if (m_.empty()) {
            throw domain_error("at least one subset size is required");
        }
    }

    SubsetSizes(std::initializer_list<std::uint64_t> m)
        : SubsetSizes(std::vector<std::uint64_t>(m)) {}

    std::size_t t_count() const noexcept { return m_.size(); }
    std::uint64_t m_min() const { return *std::min_element(m_.begin(), m_.end()); }
    std::uint64_t m_max() const { return *std::max_element(m_.begin(), m_.end()); }
    std::uint64_t operator[](std::size_t i) const { return m_[i]; }
    std::span<const std::uint64_t> values() const noexcept { return m_; }
    const std::vector<std::uint64_t>& vector() const noexcept { return m_; }

    auto begin() const noexcept { return m_.begin(); }
    auto end() const noexcept { return m_.end(); }

    friend bool operator==(const SubsetSizes&, const SubsetSizes&) = default;

private:
    std::vector<std::uint64_t> m_;
};

/// Memo table for binomial coefficients keyed by (n, k).
///
/// Safe for concurrent readers and writers. Once `capacity` entries are
/// stored, further misses are computed directly and not cached.
class BinomialCache {
public:
    explicit BinomialCache(std::size_t capacity = std::size_t{1} << 20) : capacity_(capacity) {}

    BigCount get(std::uint64_t n, std::int64_t k) {
        if (k < 0 || static_cast<std::uint64_t>(k) > n) return BigCount(0);
        auto uk = static_cast<std::uint64_t>(k);
        if (uk > n - uk) uk = n - uk;
        if (uk == 0) return BigCount(1);
        if (uk == 1) return BigCount(n);
        const Key key{n, uk};
        {
            std::shared_lock lock(mutex_);
            if (auto it = table_.find(key); it != table_.end()) return it->second;
        }
        BigCount value = compute(n, uk);
        std::unique_lock lock(mutex_);
        if (table_.size() < capacity_) table_.emplace(key, value);
        return value;
    }

    std::size_t size() const {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

    std::size_t capacity() const noexcept { return capacity_; }

    static BigCount compute(std::uint64_t n, std::uint64_t k) {
        BigCount out;
        mpz_bin_uiui(out.backend().data(), static_cast<unsigned long>(n),
                     static_cast<unsigned long>(k));
        return out;
    }

private:
    using Key = std::pair<std::uint64_t, std::uint64_t>;
    std::size_t capacity_;
    mutable std::shared_mutex mutex_;
    std::map<Key, BigCount> table_;
};

inline BinomialCache& default_binomial_cache() {
    static BinomialCache cache;
    return cache;
}

/// C(n, k); zero when k < 0 or k > n.
inline BigCount binom(std::uint64_t n, std::int64_t k) {
    return default_binomial_cache().get(n, k);
}

/// All elementary symmetric polynomials S(M^0..M^T) of the given values,
/// by per-variable accumulation.
inline std::vector<BigInt> elementary_symmetric_all(std::span<const std::uint64_t> values) {
    std::vector<BigInt> e(values.size() + 1, BigInt(0));
    e[0] = 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const BigInt x(values[i]);
        for (std::size_t j = i + 1; j >= 1; --j) {
            e[j] += e[j - 1] * x;
        }
    }
    return e;
}

/// S(M^z), the sum of all products of z distinct sizes.
inline BigCount elementary_symmetric(const SubsetSizes& m, std::size_t z) {
    if (z > m.t_count()) {
        throw domain_error("elementary_symmetric: degree " + std::to_string(z) +
                           " exceeds variable count " + std::to_string(m.t_count()));
    }
    return elementary_symmetric_all(m.values())[z];
}

/// Sum_{j=lo}^{hi} (-1)^j C(n, j).
inline BigInt alt_binom_sum(std::uint64_t n, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw domain_error("alt_binom_sum: lower index " + std::to_string(lo) +
                           " exceeds upper index " + std::to_string(hi));
    }
    BigInt sum(0);
    for (std::int64_t j = std::max<std::int64_t>(lo, 0); j <= hi; ++j) {
        if (static_cast<std::uint64_t>(j) > n) break;
        if (j % 2 == 0) sum += binom(n, j);
        else sum -= binom(n, j);
    }
    return sum;
}

inline BigInt pow_int(const BigInt& base, std::uint64_t exponent) {
    BigInt out;
    mpz_pow_ui(out.backend().data(), base.backend().data(), static_cast<unsigned long>(exponent));
    return out;
}

/// Decimal rendering with exactly `places` fractional digits, rounding half to even.
inline std::string to_decimal(const Rational& q, int places = 6) {
    if (places < 0) throw domain_error("to_decimal: negative precision");
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    const bool negative = num < 0;
    const BigInt scaled = abs(num) * pow_int(BigInt(10), static_cast<std::uint64_t>(places));
    BigInt quotient = scaled / den;
    const BigInt twice_rem = 2 * (scaled % den);
    if (twice_rem > den || (twice_rem == den && (quotient & 1) != 0)) ++quotient;

    std::string digits = quotient.str();
    if (digits.size() <= static_cast<std::size_t>(places)) {
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    std::string out;
    if (negative && quotient != 0) out.push_back('-');
    out.append(digits, 0, digits.size() - static_cast<std::size_t>(places));
    if (places > 0) {
        out.push_back('.');
        out.append(digits, digits.size() - static_cast<std::size_t>(places));
    }
    return out;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Parses a base-10 integer string, rejecting anything else.
inline BigInt parse_bigint(const std::string& text) {
    if (text.empty()) throw domain_error("empty integer string");
    std::size_t start = text[0] == '-' ? 1 : 0;
    if (start == text.size()) throw domain_error("malformed integer: " + text);
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') throw domain_error("malformed integer: " + text);
    }
    return BigInt(text);
}

/// "numerator/denominator", or just the numerator when the denominator is 1.
inline std::string to_fraction_string(const Rational& q) {
    const BigInt den = boost::multiprecision::denominator(q);
    if (den == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + den.str();
}

}  // namespace ghgd

#endif  // GHGD_EXACT_HPP
