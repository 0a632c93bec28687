#pragma once

// Bit strings, block partitioning, prime tables and the prime-product encoding.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vcdisj/errors.hpp"

namespace vcdisj {

/// Finite binary string, most-significant bit first.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Parses a string of '0'/'1' characters.
  static BitString parse(std::string_view text) {
    std::vector<bool> bits;
    bits.reserve(text.size());
    for (char c : text) {
      detail::require(c == '0' || c == '1', "BitString: invalid character in '" + std::string(text) + "'");
      bits.push_back(c == '1');
    }
    return BitString(std::move(bits));
  }

  /// `width` low-order bits of `value`, MSB first.
  static BitString from_uint(std::uint64_t value, std::size_t width) {
    detail::require(width <= 64, "BitString::from_uint: width > 64");
    detail::require(width == 64 || value < (std::uint64_t{1} << width),
                    "BitString::from_uint: value does not fit in width");
    std::vector<bool> bits(width);
    for (std::size_t i = 0; i < width; ++i) bits[i] = ((value >> (width - 1 - i)) & 1U) != 0;
    return BitString(std::move(bits));
  }

  static BitString zeros(std::size_t n) { return BitString(std::vector<bool>(n, false)); }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<bool>& bits() const noexcept { return bits_; }

  void push_back(bool b) { bits_.push_back(b); }
  void append(const BitString& other) { bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end()); }
  void append_uint(std::uint64_t value, std::size_t width) { append(from_uint(value, width)); }

  BitString slice(std::size_t pos, std::size_t len) const {
    detail::require(pos + len <= bits_.size(), "BitString::slice: out of range");
    return BitString(std::vector<bool>(bits_.begin() + static_cast<std::ptrdiff_t>(pos),
                                       bits_.begin() + static_cast<std::ptrdiff_t>(pos + len)));
  }

  BitString complement() const {
    std::vector<bool> out(bits_.size());
    for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = !bits_[i];
    return BitString(std::move(out));
  }

  std::size_t popcount() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true)); }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  /// Hex rendering, zero-padded on the right to a whole nibble. Empty string for no bits.
  std::string to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
      unsigned nib = 0;
      for (std::size_t j = 0; j < 4; ++j) nib = (nib << 1U) | ((i + j < bits_.size() && bits_[i + j]) ? 1U : 0U);
      out.push_back(digits[nib]);
    }
    return out;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<bool> bits_;
};

inline BitString concat(const std::vector<BitString>& parts) {
  BitString out;
  for (const auto& p : parts) out.append(p);
  return out;
}

/// Sum of x_i * 2^(L-i), MSB first.
inline std::uint64_t val(const BitString& x) {
  detail::require(x.size() <= 64, "val: bit string longer than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) v = (v << 1U) | (x[i] ? 1U : 0U);
  return v;
}

/// Splits x into d contiguous blocks of equal length.
inline std::vector<BitString> partition_blocks(const BitString& x, std::size_t d) {
  detail::require(d >= 1, "partition_blocks: d must be positive");
  detail::require(x.size() % d == 0, "partition_blocks: length " + std::to_string(x.size()) +
                                         " not divisible by " + std::to_string(d));
  const std::size_t len = x.size() / d;
  std::vector<BitString> blocks;
  blocks.reserve(d);
  for (std::size_t i = 0; i < d; ++i) blocks.push_back(x.slice(i * len, len));
  return blocks;
}

/// Smallest w with 2^w >= n (0 for n <= 1).
constexpr unsigned ceil_log2(std::uint64_t n) noexcept {
  unsigned w = 0;
  while (w < 64 && (std::uint64_t{1} << w) < n) ++w;
  return w;
}

/// Bits needed to write any value in [0, n].
constexpr unsigned bits_for(std::uint64_t n) noexcept { return n == 0 ? 0 : ceil_log2(n + 1); }

namespace detail {

inline bool is_prime_trial(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

inline std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime_trial(c)) ++c;
  return c;
}

inline bool checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

}  // namespace detail

/// An ascending run of primes starting at 2.
///
/// Tables built by `first_primes_with_product_bound` hold the maximal prefix of primes whose
/// product stays within `bound`. Tables built by `primes_up_to` hold every prime <= `bound`
/// and are what a party needs to factor any number in [1, bound].
struct PrimeTable {
  std::vector<std::uint64_t> primes;
  std::uint64_t bound = 0;

  std::size_t k() const noexcept { return primes.size(); }

  std::uint64_t product() const {
    std::uint64_t p = 1;
    for (auto q : primes)
      detail::require(detail::checked_mul(p, q, p), "PrimeTable::product: overflow");
    return p;
  }

  std::size_t index_of(std::uint64_t p) const {
    auto it = std::lower_bound(primes.begin(), primes.end(), p);
    detail::require(it != primes.end() && *it == p, "PrimeTable::index_of: " + std::to_string(p) + " not in table");
    return static_cast<std::size_t>(it - primes.begin());
  }

  bool contains(std::uint64_t p) const { return std::binary_search(primes.begin(), primes.end(), p); }
};

/// Maximal k such that the product of the first k primes is <= M.
inline PrimeTable first_primes_with_product_bound(std::uint64_t M) {
  detail::require(M >= 2, "first_primes_with_product_bound: M must be >= 2");
  PrimeTable pt;
  pt.bound = M;
  std::uint64_t prod = 1;
  std::uint64_t p = 2;
  for (;;) {
    std::uint64_t next = 0;
    if (!detail::checked_mul(prod, p, next) || next > M) break;
    prod = next;
    pt.primes.push_back(p);
    p = detail::next_prime(p);
  }
  return pt;
}

/// The first k primes; bound is set to their product.
inline PrimeTable first_k_primes(std::size_t k) {
  PrimeTable pt;
  std::uint64_t p = 2;
  for (std::size_t i = 0; i < k; ++i) {
    pt.primes.push_back(p);
    p = detail::next_prime(p);
  }
  pt.bound = pt.product();
  return pt;
}

/// Every prime <= limit (sieve of Eratosthenes).
inline PrimeTable primes_up_to(std::uint64_t limit) {
  detail::require(limit <= (std::uint64_t{1} << 28), "primes_up_to: limit above sieve cap 2^28");
  PrimeTable pt;
  pt.bound = limit;
  if (limit < 2) return pt;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    pt.primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return pt;
}

/// Product of the primes selected by the 1-bits of x: prod_{i : x_i = 1} p_i.
inline std::uint64_t phi(const BitString& x, const PrimeTable& pt) {
  detail::require(x.size() == pt.k(), "phi: length " + std::to_string(x.size()) + " != table size " +
                                          std::to_string(pt.k()));
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) detail::require(detail::checked_mul(v, pt.primes[i], v), "phi: overflow");
  return v;
}

/// Prime -> positive exponent.
struct FactorSupport {
  std::map<std::uint64_t, unsigned> entries;

  std::uint64_t product() const {
    std::uint64_t v = 1;
    for (auto [p, e] : entries)
      for (unsigned i = 0; i < e; ++i) detail::require(detail::checked_mul(v, p, v), "FactorSupport: overflow");
    return v;
  }

  unsigned exponent(std::uint64_t p) const {
    auto it = entries.find(p);
    return it == entries.end() ? 0U : it->second;
  }

  friend bool operator==(const FactorSupport&, const FactorSupport&) = default;
};

/// Factorization of a over the primes of pt. Throws if a factor outside pt remains.
inline FactorSupport factor_support(std::uint64_t a, const PrimeTable& pt) {
  detail::require(a >= 1, "factor_support: zero has no factorization");
  FactorSupport fs;
  std::uint64_t rest = a;
  for (auto p : pt.primes) {
    if (p * p > rest) break;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    if (e > 0) fs.entries.emplace(p, e);
  }
  if (rest > 1) {
    detail::require(pt.contains(rest),
                    "factor_support: " + std::to_string(a) + " has a prime factor outside the table");
    ++fs.entries[rest];
  }
  return fs;
}

/// Euclid.
inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  detail::require(a >= 1 && b >= 1, "gcd: inputs must be positive");
  while (b != 0) {
    std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace vcdisj
