#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadclass/integers.hpp"

namespace quadclass {

// y^2 = a3 x^3 + a2 x^2 + a1 x + a0 with a3 != 0.
struct CubicCurve {
    mpz_class a3, a2, a1, a0;

    bool nonsingular() const;
};

// Y^2 = X^3 + A X^2 + B X + C.
struct WeierstrassCurve {
    mpz_class A, B, C;

    mpz_class cubic_disc() const;
    bool nonsingular() const;
};

struct RationalPoint {
    bool infinity = true;
    mpq_class x;
    mpq_class y;

    static RationalPoint at_infinity() { return {}; }
    static RationalPoint affine(const mpq_class& px, const mpq_class& py) {
        return {false, px, py};
    }
    bool operator==(const RationalPoint& o) const;
};

bool on_curve(const WeierstrassCurve& w, const RationalPoint& p);

// (X, Y) = (a3 x, a3 y) turns the cubic model into the integral
// Weierstrass model (A, B, C) = (a2, a3 a1, a3^2 a0); scale = a3.
std::pair<WeierstrassCurve, mpz_class> to_weierstrass(const CubicCurve& c);
RationalPoint map_to_weierstrass(const mpz_class& scale, const RationalPoint& p);
RationalPoint map_from_weierstrass(const mpz_class& scale, const RationalPoint& p);

RationalPoint negate_point(const RationalPoint& p);

// Chord-tangent sum; rejects off-curve inputs.
RationalPoint add_points(const WeierstrassCurve& w, const RationalPoint& p,
                         const RationalPoint& q);

// Smallest n <= cutoff with nP = infinity, if any. With integral_only,
// bails out as soon as a multiple leaves Z^2 (torsion points are integral,
// so the bail-out only discards non-torsion candidates).
std::optional<int> point_order(const WeierstrassCurve& w, const RationalPoint& p,
                               int cutoff = 12, bool integral_only = false);

// Rational roots of psi_3(X) = 3X^4 + 4AX^3 + 6BX^2 + 12CX + (4AC - B^2),
// via integer roots of the monic transform in T = 3X.
std::vector<mpq_class> three_division_roots(const WeierstrassCurve& w);

// All affine rational points of exact order 3, sorted by (x, y).
std::vector<RationalPoint> three_torsion_points(const WeierstrassCurve& w);

struct NagellLutzResult {
    std::vector<std::pair<RationalPoint, int>> points;  // (point, order)
    bool complete = true;
    std::string note;
};

// Independent torsion oracle: integral candidates with y = 0 or y dividing
// the cubic discriminant, each confirmed by order computation (cutoff 12).
NagellLutzResult nagell_lutz_scan(const WeierstrassCurve& w, const FactorBudget& budget = {},
                                  std::uint64_t candidate_cap = 200'000);

// The three named curves, by their displayed cubic models.
CubicCurve curve_by_name(const std::string& name);

}  // namespace quadclass
