#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "quadclass/integers.hpp"

namespace quadclass {

// Z^3 + pZ + q.
struct MonicDepressedCubic {
    mpz_class p;
    mpz_class q;
};

mpz_class cubic_discriminant(const MonicDepressedCubic& f);

// All rational roots; the cubic is monic, so they are integers.
std::vector<mpz_class> cubic_rational_roots(const MonicDepressedCubic& f);

enum class DBranch { none, d1, d2, d3 };

const char* d_branch_name(DBranch b);

// Hypothesis-by-hypothesis verdict that the cubic-unit construction from
// the pair (u, v) certifies 3 | h of the quadratic field of sqrt(disc).
struct KMCertificate {
    mpz_class u;
    mpz_class v;
    bool cond_a = false;          // gcd(u, v) = 1
    bool cond_b = false;          // F irreducible over Q
    bool cond_c = false;          // disc not a perfect square
    DBranch d_branch = DBranch::none;
    mpz_class discriminant;       // 4u^3v^3 - 27u^4
    mpz_class field_radicand;     // squarefree part when budget allows
    bool field_radicand_complete = true;
    bool valid = false;
    std::vector<std::string> notes;
};

// F_{u,v}(Z) = Z^3 - uvZ - u^2.
MonicDepressedCubic km_polynomial(const mpz_class& u, const mpz_class& v);

KMCertificate km_certificate(const mpz_class& u, const mpz_class& v,
                             const FactorBudget& budget = {});

}  // namespace quadclass
