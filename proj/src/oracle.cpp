// SPDX-License-Identifier: Apache-2.0

#include "batchmp/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace batchmp::oracle {

namespace {

using u128 = unsigned __int128;

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

RefInt::RefInt(std::vector<std::uint64_t> words) : words_(std::move(words)) { trim(); }

void RefInt::trim() noexcept {
  while (words_.size() > 1 && words_.back() == 0) words_.pop_back();
  if (words_.empty()) words_.push_back(0);
}

RefInt RefInt::pow2(std::size_t exponent) {
  std::vector<std::uint64_t> w(exponent / 64 + 1, 0);
  w.back() = std::uint64_t{1} << (exponent % 64);
  return RefInt(std::move(w));
}

RefInt RefInt::from_hex(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty hex string");
  std::vector<std::uint64_t> w((text.size() + 15) / 16, 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int d = hex_value(text[text.size() - 1 - i]);
    if (d < 0) throw std::invalid_argument("invalid hex digit");
    w[i / 16] |= static_cast<std::uint64_t>(d) << (4 * (i % 16));
  }
  return RefInt(std::move(w));
}

std::size_t RefInt::bit_length() const noexcept {
  const std::uint64_t top = words_.back();
  if (top == 0) return 0;
  return 64 * (words_.size() - 1) + 64 - static_cast<std::size_t>(__builtin_clzll(top));
}

bool RefInt::bit(std::size_t i) const noexcept {
  return i / 64 < words_.size() && ((words_[i / 64] >> (i % 64)) & 1) != 0;
}

std::string RefInt::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = words_.size(); i-- > 0;) {
    for (int shift = 60; shift >= 0; shift -= 4) out.push_back(kDigits[(words_[i] >> shift) & 0xF]);
  }
  const std::size_t first = out.find_first_not_of('0');
  return first == std::string::npos ? "0" : out.substr(first);
}

std::strong_ordering operator<=>(const RefInt& a, const RefInt& b) noexcept {
  if (a.words_.size() != b.words_.size()) return a.words_.size() <=> b.words_.size();
  for (std::size_t i = a.words_.size(); i-- > 0;) {
    if (a.words_[i] != b.words_[i]) return a.words_[i] <=> b.words_[i];
  }
  return std::strong_ordering::equal;
}

RefInt ref_add(const RefInt& a, const RefInt& b) {
  const auto& x = a.words();
  const auto& y = b.words();
  std::vector<std::uint64_t> r(std::max(x.size(), y.size()) + 1, 0);
  u128 carry = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    carry += static_cast<u128>(i < x.size() ? x[i] : 0) + (i < y.size() ? y[i] : 0);
    r[i] = static_cast<std::uint64_t>(carry);
    carry >>= 64;
  }
  r.back() = static_cast<std::uint64_t>(carry);
  return RefInt(std::move(r));
}

RefInt ref_sub(const RefInt& a, const RefInt& b) {
  if (a < b) throw std::domain_error("ref_sub: negative result");
  const auto& x = a.words();
  const auto& y = b.words();
  std::vector<std::uint64_t> r(x.size(), 0);
  std::uint64_t borrow = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const std::uint64_t yi = i < y.size() ? y[i] : 0;
    const u128 d = static_cast<u128>(x[i]) - yi - borrow;
    r[i] = static_cast<std::uint64_t>(d);
    borrow = static_cast<std::uint64_t>(d >> 64) & 1;
  }
  return RefInt(std::move(r));
}

RefInt ref_mul(const RefInt& a, const RefInt& b) {
  const auto& x = a.words();
  const auto& y = b.words();
  std::vector<std::uint64_t> r(x.size() + y.size(), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    u128 carry = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
      carry += static_cast<u128>(x[i]) * y[j] + r[i + j];
      r[i + j] = static_cast<std::uint64_t>(carry);
      carry >>= 64;
    }
    r[i + y.size()] = static_cast<std::uint64_t>(carry);
  }
  return RefInt(std::move(r));
}

RefInt ref_square(const RefInt& a) { return ref_mul(a, a); }

RefInt ref_shl(const RefInt& a, std::size_t bits) {
  const auto& x = a.words();
  const std::size_t q = bits / 64;
  const unsigned s = static_cast<unsigned>(bits % 64);
  std::vector<std::uint64_t> r(x.size() + q + 1, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    r[i + q] |= x[i] << s;
    if (s != 0) r[i + q + 1] |= x[i] >> (64 - s);
  }
  return RefInt(std::move(r));
}

RefInt ref_shr(const RefInt& a, std::size_t bits) {
  const auto& x = a.words();
  const std::size_t q = bits / 64;
  const unsigned s = static_cast<unsigned>(bits % 64);
  if (q >= x.size()) return RefInt();
  std::vector<std::uint64_t> r(x.size() - q, 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = x[i + q] >> s;
    if (s != 0 && i + q + 1 < x.size()) r[i] |= x[i + q + 1] << (64 - s);
  }
  return RefInt(std::move(r));
}

RefInt ref_low_bits(const RefInt& a, std::size_t bits) {
  std::vector<std::uint64_t> r = a.words();
  const std::size_t keep = (bits + 63) / 64;
  if (r.size() > keep) r.resize(keep);
  if (bits % 64 != 0 && r.size() == keep) r.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
  return RefInt(std::move(r));
}

std::pair<RefInt, RefInt> ref_divmod(const RefInt& a, const RefInt& b) {
  if (b.is_zero()) throw std::domain_error("ref_divmod: division by zero");
  if (a < b) return {RefInt(), a};
  const auto& vb = b.words();
  const auto& ua = a.words();

  if (vb.size() == 1) {
    std::vector<std::uint64_t> q(ua.size(), 0);
    u128 rem = 0;
    for (std::size_t i = ua.size(); i-- > 0;) {
      rem = (rem << 64) | ua[i];
      q[i] = static_cast<std::uint64_t>(rem / vb[0]);
      rem %= vb[0];
    }
    return {RefInt(std::move(q)), RefInt(static_cast<std::uint64_t>(rem))};
  }

  // Knuth, TAOCP vol. 2, 4.3.1, Algorithm D.
  const std::size_t n = vb.size();
  const std::size_t m = ua.size() - n;
  const unsigned s = static_cast<unsigned>(__builtin_clzll(vb.back()));
  std::vector<std::uint64_t> v(n), u(ua.size() + 1, 0);
  for (std::size_t i = n; i-- > 0;) {
    v[i] = (vb[i] << s) | (s != 0 && i > 0 ? vb[i - 1] >> (64 - s) : 0);
  }
  u[ua.size()] = s != 0 ? ua.back() >> (64 - s) : 0;
  for (std::size_t i = ua.size(); i-- > 0;) {
    u[i] = (ua[i] << s) | (s != 0 && i > 0 ? ua[i - 1] >> (64 - s) : 0);
  }

  std::vector<std::uint64_t> q(m + 1, 0);
  const u128 base = static_cast<u128>(1) << 64;
  for (std::size_t j = m + 1; j-- > 0;) {
    const u128 num = (static_cast<u128>(u[j + n]) << 64) | u[j + n - 1];
    u128 qhat = num / v[n - 1];
    u128 rhat = num % v[n - 1];
    while (qhat >= base || qhat * v[n - 2] > ((rhat << 64) | u[j + n - 2])) {
      --qhat;
      rhat += v[n - 1];
      if (rhat >= base) break;
    }
    // u[j .. j+n] -= qhat * v
    std::int64_t borrow = 0;
    u128 carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const u128 p = qhat * v[i] + carry;
      carry = p >> 64;
      const __int128 t = static_cast<__int128>(u[i + j]) - borrow - static_cast<std::uint64_t>(p);
      u[i + j] = static_cast<std::uint64_t>(t);
      borrow = t < 0 ? 1 : 0;
    }
    const __int128 t = static_cast<__int128>(u[j + n]) - borrow - static_cast<std::uint64_t>(carry);
    u[j + n] = static_cast<std::uint64_t>(t);
    if (t < 0) {
      --qhat;
      u128 c = 0;
      for (std::size_t i = 0; i < n; ++i) {
        c += static_cast<u128>(u[i + j]) + v[i];
        u[i + j] = static_cast<std::uint64_t>(c);
        c >>= 64;
      }
      u[j + n] += static_cast<std::uint64_t>(c);
    }
    q[j] = static_cast<std::uint64_t>(qhat);
  }

  std::vector<std::uint64_t> r(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = (u[i] >> s) | (s != 0 ? u[i + 1] << (64 - s) : 0);
  }
  return {RefInt(std::move(q)), RefInt(std::move(r))};
}

RefInt ref_mod(const RefInt& a, const RefInt& m) { return ref_divmod(a, m).second; }

RefInt ref_modexp(const RefInt& a, const RefInt& e, const RefInt& m) {
  const RefInt base = ref_mod(a, m);
  RefInt y = ref_mod(RefInt(1), m);
  for (std::size_t i = e.bit_length(); i-- > 0;) {
    y = ref_mod(ref_square(y), m);
    if (e.bit(i)) y = ref_mod(ref_mul(y, base), m);
  }
  return y;
}

namespace {

// a - b over signed values.
SignedRef signed_sub(const SignedRef& a, const SignedRef& b) {
  if (a.negative != b.negative) return {ref_add(a.magnitude, b.magnitude), a.negative};
  if (a.magnitude >= b.magnitude) {
    const RefInt d = ref_sub(a.magnitude, b.magnitude);
    return {d, a.negative && !d.is_zero()};
  }
  return {ref_sub(b.magnitude, a.magnitude), !a.negative};
}

SignedRef signed_scale(const RefInt& k, const SignedRef& x) {
  const RefInt p = ref_mul(k, x.magnitude);
  return {p, x.negative && !p.is_zero()};
}

}  // namespace

EgcdResult ref_egcd(const RefInt& a, const RefInt& b) {
  RefInt old_r = a, r = b;
  SignedRef old_s{RefInt(1), false}, s{RefInt(), false};
  SignedRef old_t{RefInt(), false}, t{RefInt(1), false};
  while (!r.is_zero()) {
    auto [q, rem] = ref_divmod(old_r, r);
    old_r = std::exchange(r, rem);
    old_s = std::exchange(s, signed_sub(old_s, signed_scale(q, s)));
    old_t = std::exchange(t, signed_sub(old_t, signed_scale(q, t)));
  }
  return {old_r, old_s, old_t};
}

RefInt ref_mod_inverse(const RefInt& a, const RefInt& m) {
  const EgcdResult r = ref_egcd(ref_mod(a, m), m);
  if (r.g != RefInt(1)) throw std::domain_error("ref_mod_inverse: not invertible");
  const RefInt x = ref_mod(r.x.magnitude, m);
  return r.x.negative && !x.is_zero() ? ref_sub(m, x) : x;
}

RefInt ref_montred(const RefInt& t, const RefInt& n, const RefInt& n_prime, std::size_t r_bits) {
  const RefInt q = ref_low_bits(ref_mul(ref_low_bits(t, r_bits), n_prime), r_bits);
  return ref_shr(ref_add(t, ref_mul(q, n)), r_bits);
}

}  // namespace batchmp::oracle
