#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spacetime {

/// Arbitrary-precision nonnegative integer, base 2^32.  Configuration counts
/// grow doubly exponentially in the rank, so exact arithmetic is mandatory;
/// doubles are only produced explicitly through to_double()/log2().
class CountInt {
public:
  CountInt() = default;
  CountInt(std::uint64_t v) {
    if (v) {
      w_.push_back(static_cast<std::uint32_t>(v));
      if (v >> 32) w_.push_back(static_cast<std::uint32_t>(v >> 32));
    }
  }

  static CountInt from_decimal(const std::string& s) {
    CountInt r;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
      r = r * CountInt(10) + CountInt(static_cast<std::uint64_t>(c - '0'));
    }
    return r;
  }

  bool is_zero() const { return w_.empty(); }
  bool fits_u64() const { return w_.size() <= 2; }
  std::uint64_t to_u64() const {
    std::uint64_t v = 0;
    if (w_.size() > 2) throw std::overflow_error("CountInt too large for u64");
    if (w_.size() > 1) v = static_cast<std::uint64_t>(w_[1]) << 32;
    if (!w_.empty()) v |= w_[0];
    return v;
  }

  friend bool operator==(const CountInt& a, const CountInt& b) { return a.w_ == b.w_; }
  friend bool operator!=(const CountInt& a, const CountInt& b) { return !(a == b); }
  friend bool operator<(const CountInt& a, const CountInt& b) { return cmp(a, b) < 0; }
  friend bool operator<=(const CountInt& a, const CountInt& b) { return cmp(a, b) <= 0; }
  friend bool operator>(const CountInt& a, const CountInt& b) { return cmp(a, b) > 0; }
  friend bool operator>=(const CountInt& a, const CountInt& b) { return cmp(a, b) >= 0; }

  friend CountInt operator+(const CountInt& a, const CountInt& b) {
    CountInt r;
    r.w_.resize(std::max(a.w_.size(), b.w_.size()) + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < r.w_.size(); ++i) {
      std::uint64_t s = carry;
      if (i < a.w_.size()) s += a.w_[i];
      if (i < b.w_.size()) s += b.w_[i];
      r.w_[i] = static_cast<std::uint32_t>(s);
      carry = s >> 32;
    }
    r.trim();
    return r;
  }

  /// Requires a >= b.
  friend CountInt operator-(const CountInt& a, const CountInt& b) {
    if (a < b) throw std::underflow_error("CountInt subtraction underflow");
    CountInt r;
    r.w_.resize(a.w_.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) {
      std::int64_t d = static_cast<std::int64_t>(a.w_[i]) - borrow -
                       (i < b.w_.size() ? static_cast<std::int64_t>(b.w_[i]) : 0);
      borrow = d < 0;
      if (d < 0) d += (std::int64_t{1} << 32);
      r.w_[i] = static_cast<std::uint32_t>(d);
    }
    r.trim();
    return r;
  }

  friend CountInt operator*(const CountInt& a, const CountInt& b) {
    if (a.is_zero() || b.is_zero()) return CountInt();
    CountInt r;
    r.w_.assign(a.w_.size() + b.w_.size(), 0);
    for (std::size_t i = 0; i < a.w_.size(); ++i) {
      std::uint64_t carry = 0;
      for (std::size_t j = 0; j < b.w_.size(); ++j) {
        std::uint64_t cur = r.w_[i + j] +
                            static_cast<std::uint64_t>(a.w_[i]) * b.w_[j] + carry;
        r.w_[i + j] = static_cast<std::uint32_t>(cur);
        carry = cur >> 32;
      }
      r.w_[i + b.w_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    return r;
  }

  /// Knuth algorithm D.  Returns {quotient, remainder}.
  static std::pair<CountInt, CountInt> divmod(const CountInt& a, const CountInt& b) {
    if (b.is_zero()) throw std::domain_error("CountInt division by zero");
    if (a < b) return {CountInt(), a};
    if (b.w_.size() == 1) {
      CountInt q;
      q.w_.resize(a.w_.size());
      std::uint64_t rem = 0;
      for (std::size_t i = a.w_.size(); i-- > 0;) {
        std::uint64_t cur = (rem << 32) | a.w_[i];
        q.w_[i] = static_cast<std::uint32_t>(cur / b.w_[0]);
        rem = cur % b.w_[0];
      }
      q.trim();
      return {q, CountInt(rem)};
    }
    const int shift = 31 - static_cast<int>(bit_index(b.w_.back()));
    CountInt u = a.shifted_left(shift), v = b.shifted_left(shift);
    const std::size_t n = v.w_.size(), m = u.w_.size() - n;
    u.w_.push_back(0);
    CountInt q;
    q.w_.assign(m + 1, 0);
    const std::uint64_t vn1 = v.w_[n - 1], vn2 = v.w_[n - 2];
    for (std::size_t j = m + 1; j-- > 0;) {
      std::uint64_t num = (static_cast<std::uint64_t>(u.w_[j + n]) << 32) | u.w_[j + n - 1];
      std::uint64_t qhat = num / vn1, rhat = num % vn1;
      while (qhat >> 32 ||
             qhat * vn2 > ((rhat << 32) | u.w_[j + n - 2])) {
        --qhat;
        rhat += vn1;
        if (rhat >> 32) break;
      }
      // multiply-subtract qhat*v from u[j..j+n]
      std::int64_t borrow = 0;
      std::uint64_t carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t p = qhat * v.w_[i] + carry;
        carry = p >> 32;
        std::int64_t d = static_cast<std::int64_t>(u.w_[i + j]) -
                         static_cast<std::int64_t>(p & 0xffffffffull) - borrow;
        borrow = d < 0;
        if (d < 0) d += (std::int64_t{1} << 32);
        u.w_[i + j] = static_cast<std::uint32_t>(d);
      }
      std::int64_t d = static_cast<std::int64_t>(u.w_[j + n]) -
                       static_cast<std::int64_t>(carry) - borrow;
      if (d < 0) {  // qhat one too large: add back
        d += (std::int64_t{1} << 32);
        --qhat;
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < n; ++i) {
          std::uint64_t s = static_cast<std::uint64_t>(u.w_[i + j]) + v.w_[i] + c;
          u.w_[i + j] = static_cast<std::uint32_t>(s);
          c = s >> 32;
        }
        d = (d + static_cast<std::int64_t>(c)) & 0xffffffffll;
      }
      u.w_[j + n] = static_cast<std::uint32_t>(d);
      q.w_[j] = static_cast<std::uint32_t>(qhat);
    }
    q.trim();
    u.w_.resize(n);
    u.trim();
    return {q, u.shifted_right(shift)};
  }

  friend CountInt operator/(const CountInt& a, const CountInt& b) { return divmod(a, b).first; }
  friend CountInt operator%(const CountInt& a, const CountInt& b) { return divmod(a, b).second; }

  CountInt pow(unsigned e) const {
    CountInt r(1), base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  static CountInt gcd(CountInt a, CountInt b) {
    while (!b.is_zero()) {
      CountInt r = a % b;
      a = b;
      b = r;
    }
    return a;
  }

  std::string to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    CountInt cur = *this;
    const CountInt billion(1000000000ull);
    std::vector<std::uint32_t> chunks;
    while (!cur.is_zero()) {
      auto [q, r] = divmod(cur, billion);
      chunks.push_back(static_cast<std::uint32_t>(r.to_u64()));
      cur = q;
    }
    out = std::to_string(chunks.back());
    for (std::size_t i = chunks.size() - 1; i-- > 0;) {
      std::string part = std::to_string(chunks[i]);
      out += std::string(9 - part.size(), '0') + part;
    }
    return out;
  }

  /// Exact bit length (0 for zero).
  std::size_t bit_length() const {
    if (is_zero()) return 0;
    return 32 * (w_.size() - 1) + bit_index(w_.back()) + 1;
  }

  double log2() const {
    if (is_zero()) throw std::domain_error("log2(0)");
    const std::size_t top = w_.size();
    const std::size_t use = std::min<std::size_t>(top, 3);
    double mant = 0.0;
    for (std::size_t i = top; i-- > top - use;) mant = mant * 4294967296.0 + w_[i];
    return std::log2(mant) + 32.0 * static_cast<double>(top - use);
  }

  double to_double() const {
    double v = 0.0;
    for (std::size_t i = w_.size(); i-- > 0;) v = v * 4294967296.0 + w_[i];
    return v;
  }

private:
  static int cmp(const CountInt& a, const CountInt& b) {
    if (a.w_.size() != b.w_.size()) return a.w_.size() < b.w_.size() ? -1 : 1;
    for (std::size_t i = a.w_.size(); i-- > 0;)
      if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i] ? -1 : 1;
    return 0;
  }
  static std::size_t bit_index(std::uint32_t x) {
    std::size_t b = 0;
    while (x >>= 1) ++b;
    return b;
  }
  CountInt shifted_left(int bits) const {
    if (bits == 0 || is_zero()) return *this;
    CountInt r;
    r.w_.assign(w_.size() + 1, 0);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      r.w_[i] |= w_[i] << bits;
      if (bits) r.w_[i + 1] = w_[i] >> (32 - bits);
    }
    r.trim();
    return r;
  }
  CountInt shifted_right(int bits) const {
    if (bits == 0 || is_zero()) return *this;
    CountInt r;
    r.w_.assign(w_.size(), 0);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      r.w_[i] = w_[i] >> bits;
      if (i + 1 < w_.size() && bits) r.w_[i] |= w_[i + 1] << (32 - bits);
    }
    r.trim();
    return r;
  }
  void trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
  }

  std::vector<std::uint32_t> w_;  // little-endian 32-bit limbs
};

/// Exact nonnegative rational, always stored reduced.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(CountInt num, CountInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
    reduce();
  }

  const CountInt& num() const { return num_; }
  const CountInt& den() const { return den_; }

  double to_double() const {
    if (num_.is_zero()) return 0.0;
    if (std::max(num_.log2(), den_.log2()) < 500.0)
      return num_.to_double() / den_.to_double();
    return std::exp2(num_.log2() - den_.log2());
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

  std::string to_string() const { return num_.to_decimal() + "/" + den_.to_decimal(); }

private:
  void reduce() {
    if (num_.is_zero()) {
      den_ = CountInt(1);
      return;
    }
    CountInt g = CountInt::gcd(num_, den_);
    num_ = num_ / g;
    den_ = den_ / g;
  }
  CountInt num_, den_;
};

}  // namespace spacetime
