#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "quadclass/integers.hpp"
#include "quadclass/km.hpp"

namespace quadclass {

// alpha = (a + b*sqrt(m))/2 in the real quadratic field of sqrt(m).
struct HalfIntegralElement {
    mpz_class a;
    mpz_class b;
    mpz_class m;
};

// True when alpha is an algebraic integer: 4 | a^2 - b^2 m together with
// the parity condition (a = b m mod 2 for m = 1 mod 4, else a, b even).
bool is_integral_element(const HalfIntegralElement& e);

// (trace, norm) = (a, (a^2 - b^2 m)/4).
std::pair<mpz_class, mpz_class> norm_trace(const HalfIntegralElement& e);

// P_alpha = X^3 - 3 c X - trace where c^3 = norm. Rejects non-cube norms.
MonicDepressedCubic p_alpha(const HalfIntegralElement& e);

// For g = X^3 - aX - b: is 3 totally ramified in the cubic field of g?
// Applicability window: v3(a) < 2 or v3(b) < 3; outside it the criterion
// says nothing and the call throws.
bool llorente_nart_totally_ramified(const mpz_class& a_coeff, const mpz_class& b_coeff);

struct KishiCertificate {
    HalfIntegralElement element;   // possibly normalized (square part of m folded into b)
    mpz_class d;                   // -m, the signed radicand of the base field convention
    mpz_class trace;
    mpz_class norm;
    std::optional<mpz_class> norm_cube_root;
    bool norm_is_cube = false;
    bool gcd_ok = false;           // gcd(norm, trace) = 1
    bool irreducible = false;      // P_alpha has no rational root <=> alpha not a cube
    bool ramification_testable = false;
    bool not_totally_ramified_at_3 = false;
    bool valid = false;
    mpz_class target_radicand;     // 3m: the field the certificate speaks about
    std::vector<std::string> notes;
};

// Checks every hypothesis of the unit-construction criterion for alpha and
// assembles the verdict. m is normalized through squarefree_decompose when
// the budget suffices; otherwise the raw element is kept and noted.
KishiCertificate kishi_certificate(const HalfIntegralElement& e, const FactorBudget& budget = {});

}  // namespace quadclass
