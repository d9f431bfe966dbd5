#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace lnag {

using Int = mpz_class;
using Rat = mpq_class;

struct Factorization {
    std::vector<std::pair<Int, unsigned>> terms;
    bool probable = false;  // a factor above 2^64 only passed SPRP tests
    Int value() const;
};

int kronecker(const Int& a, const Int& n);
unsigned valuation(const Int& q, const Int& a);

// default digit limit for factor()
inline constexpr unsigned kFactorDigits = 30;
Factorization factor(const Int& a, unsigned digit_limit = kFactorDigits);
Int radical(const Int& a);
std::vector<Int> divisors(const Int& a);  // positive, sorted

enum class Primality { composite, prime, probable };
Primality primality(const Int& n);
bool is_prime(const Int& n);
bool is_prime_u64(uint64_t n);

// word-size modular helpers; m < 2^63
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m);
int jacobi_u64(uint64_t a, uint64_t n);
// square root of a mod odd prime p; false if a is a non-residue
bool sqrtmod(uint64_t a, uint64_t p, uint64_t& r);
uint64_t mod_of(const Int& a, uint64_t m);  // nonnegative residue

std::vector<uint32_t> primes_upto(uint32_t n);
uint64_t next_prime_u64(uint64_t n);  // smallest prime > n

Int ipow(const Int& b, unsigned long e);
bool is_square(const Int& a, Int* root = nullptr);

}  // namespace lnag
