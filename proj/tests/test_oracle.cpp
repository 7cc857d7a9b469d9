// SPDX-License-Identifier: Apache-2.0
//
// The reference arithmetic is itself checked against GMP, which is used
// nowhere else in the project.

#include <gmp.h>

#include <random>
#include <stdexcept>
#include <string>
#include <utility>

#include "batchmp/oracle.hpp"
#include "doctest.h"

using batchmp::oracle::RefInt;
namespace o = batchmp::oracle;

namespace {

class Mpz {
 public:
  Mpz() { mpz_init(v_); }
  explicit Mpz(const RefInt& x) {
    mpz_init(v_);
    const auto& w = x.words();
    mpz_import(v_, w.size(), -1, sizeof(std::uint64_t), 0, 0, w.data());
  }
  ~Mpz() { mpz_clear(v_); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;

  mpz_t& get() { return v_; }

  RefInt ref() const {
    std::vector<std::uint64_t> w((mpz_sizeinbase(v_, 2) + 63) / 64 + 1, 0);
    std::size_t count = 0;
    mpz_export(w.data(), &count, -1, sizeof(std::uint64_t), 0, 0, v_);
    return RefInt(std::move(w));
  }

 private:
  mpz_t v_;
};

RefInt random_ref(std::mt19937_64& rng, std::size_t max_words) {
  std::vector<std::uint64_t> w(1 + rng() % max_words);
  for (auto& x : w) x = rng();
  // Sprinkle in words that stress carries and the division estimate.
  if (rng() % 4 == 0) w.back() = ~std::uint64_t{0};
  if (rng() % 4 == 0) w[0] = 0;
  return RefInt(std::move(w));
}

}  // namespace

TEST_CASE("zero is a single zero word") {
  CHECK(RefInt().words() == std::vector<std::uint64_t>{0});
  CHECK(RefInt(std::vector<std::uint64_t>{}).words().size() == 1);
  CHECK(RefInt(std::vector<std::uint64_t>{0, 0, 0}) == RefInt());
  CHECK(o::ref_sub(RefInt(5), RefInt(5)).words().size() == 1);
  CHECK(RefInt().bit_length() == 0);
}

TEST_CASE("hex round trip") {
  CHECK(RefInt::from_hex("0").to_hex() == "0");
  CHECK(RefInt::from_hex("00ff").to_hex() == "ff");
  CHECK(RefInt::from_hex("1234567890abcdefFEDCBA0987654321").to_hex() ==
        "1234567890abcdeffedcba0987654321");
  CHECK_THROWS_AS(RefInt::from_hex("12g"), std::invalid_argument);
}

TEST_CASE("ref_divmod small cases") {
  const auto [q, r] = o::ref_divmod(RefInt(7), RefInt(3));
  CHECK(q == RefInt(2));
  CHECK(r == RefInt(1));
  CHECK_THROWS_AS(o::ref_divmod(RefInt(1), RefInt()), std::domain_error);
}

TEST_CASE("ref_divmod exhaustive below 2^10") {
  for (std::uint64_t a = 0; a < 1024; ++a) {
    for (std::uint64_t b = 1; b < 1024; ++b) {
      const auto [q, r] = o::ref_divmod(RefInt(a), RefInt(b));
      REQUIRE(q == RefInt(a / b));
      REQUIRE(r == RefInt(a % b));
    }
  }
}

TEST_CASE("multiword arithmetic matches GMP") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 2000; ++trial) {
    const RefInt a = random_ref(rng, 70);
    const RefInt b = random_ref(rng, 40);
    Mpz ma(a), mb(b), r, q, m;

    mpz_add(r.get(), ma.get(), mb.get());
    REQUIRE(o::ref_add(a, b) == r.ref());

    mpz_mul(r.get(), ma.get(), mb.get());
    REQUIRE(o::ref_mul(a, b) == r.ref());
    mpz_mul(r.get(), ma.get(), ma.get());
    REQUIRE(o::ref_square(a) == r.ref());

    if (a >= b) {
      mpz_sub(r.get(), ma.get(), mb.get());
      REQUIRE(o::ref_sub(a, b) == r.ref());
    }
    if (!b.is_zero()) {
      mpz_fdiv_qr(q.get(), m.get(), ma.get(), mb.get());
      const auto [qq, rr] = o::ref_divmod(a, b);
      REQUIRE(qq == q.ref());
      REQUIRE(rr == m.ref());
    }
    const std::size_t s = rng() % 300;
    mpz_mul_2exp(r.get(), ma.get(), s);
    REQUIRE(o::ref_shl(a, s) == r.ref());
    mpz_fdiv_q_2exp(r.get(), ma.get(), s);
    REQUIRE(o::ref_shr(a, s) == r.ref());
    mpz_fdiv_r_2exp(r.get(), ma.get(), s);
    REQUIRE(o::ref_low_bits(a, s) == r.ref());
  }
}

TEST_CASE("ref_divmod division identity on multiword inputs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const RefInt a = random_ref(rng, 30);
    RefInt b = random_ref(rng, 12);
    if (b.is_zero()) b = RefInt(3);
    const auto [q, r] = o::ref_divmod(a, b);
    REQUIRE(r < b);
    REQUIRE(o::ref_add(o::ref_mul(q, b), r) == a);
  }
}

TEST_CASE("ref_modexp matches GMP") {
  std::mt19937_64 rng(202);
  CHECK(o::ref_modexp(RefInt(12345), RefInt(), RefInt(1000003)) == RefInt(1));
  CHECK(o::ref_modexp(RefInt(2), RefInt(10), RefInt(1025)) == RefInt(1024));
  for (int trial = 0; trial < 60; ++trial) {
    const RefInt a = random_ref(rng, 16);
    const RefInt e = random_ref(rng, 16);
    RefInt m = random_ref(rng, 16);
    if (m.is_zero()) m = RefInt(7);
    Mpz ma(a), me(e), mm(m), r;
    mpz_powm(r.get(), ma.get(), me.get(), mm.get());
    REQUIRE(o::ref_modexp(a, e, m) == r.ref());
  }
}

TEST_CASE("ref_egcd Bezout identity and inverses") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 300; ++trial) {
    const RefInt a = random_ref(rng, 10);
    const RefInt b = random_ref(rng, 10);
    const o::EgcdResult r = o::ref_egcd(a, b);
    Mpz ma(a), mb(b), g;
    mpz_gcd(g.get(), ma.get(), mb.get());
    REQUIRE(r.g == g.ref());
    // a*x + b*y == g, evaluated without signed arithmetic.
    RefInt pos, neg;
    for (const auto& [value, coeff] : {std::pair{a, r.x}, std::pair{b, r.y}}) {
      RefInt& side = coeff.negative ? neg : pos;
      side = o::ref_add(side, o::ref_mul(value, coeff.magnitude));
    }
    REQUIRE(o::ref_sub(pos, neg) == r.g);
  }
  CHECK(o::ref_mod_inverse(RefInt(3), RefInt(7)) == RefInt(5));
  CHECK_THROWS_AS(o::ref_mod_inverse(RefInt(6), RefInt(9)), std::domain_error);
}

TEST_CASE("ref_montred is T * R^-1 mod N, below 2N") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r_bits = 64 * (1 + rng() % 8);
    std::vector<std::uint64_t> nw(r_bits / 64);
    for (auto& x : nw) x = rng();
    nw.back() >>= 2;  // R >= 4N
    nw[0] |= 1;
    const RefInt n(nw);
    const RefInt r = RefInt::pow2(r_bits);
    const RefInt n_prime = o::ref_sub(r, o::ref_mod_inverse(n, r));
    const RefInt t = o::ref_mod(o::ref_mul(random_ref(rng, 16), random_ref(rng, 16)),
                                o::ref_mul(o::ref_shl(n, 2), n));
    const RefInt c = o::ref_montred(t, n, n_prime, r_bits);
    REQUIRE(c < o::ref_shl(n, 1));
    REQUIRE(o::ref_mod(o::ref_shl(c, r_bits), n) == o::ref_mod(t, n));
  }
}
