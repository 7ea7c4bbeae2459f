#include "quadclass/elliptic.hpp"

#include <algorithm>
#include <stdexcept>

namespace quadclass {

namespace {

// Discriminant of a x^3 + b x^2 + c x + d.
mpz_class poly3_disc(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                     const mpz_class& d) {
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
           27 * a * a * d * d;
}

mpq_class curve_rhs(const WeierstrassCurve& w, const mpq_class& x) {
    return ((x + w.A) * x + w.B) * x + w.C;
}

bool is_integer(const mpq_class& q) { return q.get_den() == 1; }

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (q < 0) return std::nullopt;
    mpq_class r = q;
    r.canonicalize();
    if (!mpz_perfect_square_p(r.get_num().get_mpz_t()) ||
        !mpz_perfect_square_p(r.get_den().get_mpz_t()))
        return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), r.get_num().get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), r.get_den().get_mpz_t());
    return mpq_class(sn) / mpq_class(sd);
}

bool point_less(const RationalPoint& p, const RationalPoint& q) {
    if (p.infinity != q.infinity) return p.infinity;
    if (p.infinity) return false;
    int cx = cmp(p.x, q.x);
    if (cx != 0) return cx < 0;
    return cmp(p.y, q.y) < 0;
}

}  // namespace

bool CubicCurve::nonsingular() const {
    if (a3 == 0) return false;
    return poly3_disc(a3, a2, a1, a0) != 0;
}

mpz_class WeierstrassCurve::cubic_disc() const { return poly3_disc(1, A, B, C); }

bool WeierstrassCurve::nonsingular() const { return cubic_disc() != 0; }

bool RationalPoint::operator==(const RationalPoint& o) const {
    if (infinity || o.infinity) return infinity == o.infinity;
    return cmp(x, o.x) == 0 && cmp(y, o.y) == 0;
}

bool on_curve(const WeierstrassCurve& w, const RationalPoint& p) {
    if (p.infinity) return true;
    return cmp(p.y * p.y, curve_rhs(w, p.x)) == 0;
}

std::pair<WeierstrassCurve, mpz_class> to_weierstrass(const CubicCurve& c) {
    if (c.a3 == 0) throw std::invalid_argument("to_weierstrass: leading coefficient is zero");
    WeierstrassCurve w{c.a2, c.a3 * c.a1, c.a3 * c.a3 * c.a0};
    return {w, c.a3};
}

RationalPoint map_to_weierstrass(const mpz_class& scale, const RationalPoint& p) {
    if (p.infinity) return p;
    return RationalPoint::affine(p.x * mpq_class(scale), p.y * mpq_class(scale));
}

RationalPoint map_from_weierstrass(const mpz_class& scale, const RationalPoint& p) {
    if (p.infinity) return p;
    return RationalPoint::affine(p.x / mpq_class(scale), p.y / mpq_class(scale));
}

RationalPoint negate_point(const RationalPoint& p) {
    if (p.infinity) return p;
    return RationalPoint::affine(p.x, mpq_class(-p.y));
}

RationalPoint add_points(const WeierstrassCurve& w, const RationalPoint& p,
                         const RationalPoint& q) {
    if (!on_curve(w, p) || !on_curve(w, q))
        throw std::invalid_argument("add_points: point not on curve");
    if (p.infinity) return q;
    if (q.infinity) return p;

    mpq_class lambda;
    if (cmp(p.x, q.x) == 0) {
        if (cmp(p.y, -q.y) == 0) return RationalPoint::at_infinity();
        // Tangent: lambda = (3x^2 + 2Ax + B) / (2y).
        lambda = (3 * p.x * p.x + 2 * mpq_class(w.A) * p.x + mpq_class(w.B)) / (2 * p.y);
    } else {
        lambda = (q.y - p.y) / (q.x - p.x);
    }
    mpq_class x3 = lambda * lambda - mpq_class(w.A) - p.x - q.x;
    mpq_class y3 = lambda * (p.x - x3) - p.y;
    x3.canonicalize();
    y3.canonicalize();
    return RationalPoint::affine(x3, y3);
}

std::optional<int> point_order(const WeierstrassCurve& w, const RationalPoint& p, int cutoff,
                               bool integral_only) {
    if (p.infinity) return 1;
    RationalPoint acc = p;
    for (int n = 1; n <= cutoff; ++n) {
        if (acc.infinity) return n;
        if (integral_only && (!is_integer(acc.x) || !is_integer(acc.y))) return std::nullopt;
        if (n < cutoff) acc = add_points(w, acc, p);
    }
    return std::nullopt;
}

std::vector<mpq_class> three_division_roots(const WeierstrassCurve& w) {
    if (!w.nonsingular()) throw std::invalid_argument("three_division_roots: singular curve");
    // psi3(X) = 3X^4 + 4AX^3 + 6BX^2 + 12CX + (4AC - B^2). With T = 3X,
    // 27 psi3(T/3) = T^4 + 4A T^3 + 18B T^2 + 108C T + 27(4AC - B^2) is
    // monic with integer coefficients, so rational roots are integral in T.
    mpz_class e = 4 * w.A * w.C - w.B * w.B;
    std::vector<mpz_class> troots =
        integer_roots({27 * e, 108 * w.C, 18 * w.B, 4 * w.A, 1});
    std::vector<mpq_class> roots;
    for (const auto& t : troots) {
        mpq_class x(t, 3);
        x.canonicalize();
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end(), [](const mpq_class& a, const mpq_class& b) {
        return cmp(a, b) < 0;
    });
    return roots;
}

std::vector<RationalPoint> three_torsion_points(const WeierstrassCurve& w) {
    std::vector<RationalPoint> points;
    for (const mpq_class& x : three_division_roots(w)) {
        std::optional<mpq_class> y = rational_sqrt(curve_rhs(w, x));
        if (!y) continue;
        if (*y == 0) continue;  // order 2, not 3
        for (const mpq_class& yy : {*y, mpq_class(-*y)}) {
            RationalPoint p = RationalPoint::affine(x, yy);
            // 2P = -P is the defining property of order 3.
            if (add_points(w, p, p) == negate_point(p)) points.push_back(p);
        }
    }
    std::sort(points.begin(), points.end(), point_less);
    return points;
}

NagellLutzResult nagell_lutz_scan(const WeierstrassCurve& w, const FactorBudget& budget,
                                  std::uint64_t candidate_cap) {
    if (!w.nonsingular()) throw std::invalid_argument("nagell_lutz_scan: singular curve");
    NagellLutzResult res;
    mpz_class disc = w.cubic_disc();

    std::vector<mpz_class> ys{0};
    FactorizationResult f = factor_with_budget(disc, budget);
    if (!f.complete) {
        res.complete = false;
        res.note = "discriminant not fully factored within budget; y-candidates restricted "
                   "to divisors of the factored part";
    }
    // Every y with y | disc (factored part). Torsion points are integral
    // with y = 0 or y dividing the discriminant.
    std::vector<mpz_class> divisors{1};
    for (const auto& [prime, exp] : f.factors) {
        size_t base = divisors.size();
        mpz_class pk = 1;
        for (int i = 1; i <= exp; ++i) {
            pk *= prime;
            for (size_t j = 0; j < base; ++j) {
                divisors.push_back(divisors[j] * pk);
                if (divisors.size() > candidate_cap) {
                    res.complete = false;
                    res.note = "y-candidate enumeration capped";
                    break;
                }
            }
            if (divisors.size() > candidate_cap) break;
        }
        if (divisors.size() > candidate_cap) break;
    }
    ys.insert(ys.end(), divisors.begin(), divisors.end());

    for (const mpz_class& y : ys) {
        // x-candidates: integer roots of x^3 + Ax^2 + Bx + (C - y^2).
        std::vector<mpz_class> xs =
            integer_roots({w.C - y * y, w.B, w.A, 1});
        for (const mpz_class& x : xs) {
            RationalPoint p = RationalPoint::affine(mpq_class(x), mpq_class(y));
            std::optional<int> order = point_order(w, p, 12, true);
            if (!order) continue;
            res.points.emplace_back(p, *order);
            if (y != 0) res.points.emplace_back(negate_point(p), *order);
        }
    }
    std::sort(res.points.begin(), res.points.end(),
              [](const auto& a, const auto& b) { return point_less(a.first, b.first); });
    res.points.erase(std::unique(res.points.begin(), res.points.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     res.points.end());
    return res;
}

CubicCurve curve_by_name(const std::string& name) {
    if (name == "E1") return {40500, 89100, 65340, 16215};
    if (name == "E2") return {432, 1080, 900, 223};
    if (name == "E3") return {216000, 457200, 322580, 75866};
    throw std::invalid_argument("unknown curve name: " + name);
}

}  // namespace quadclass
