#include "quadclass/integers.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace quadclass {

FactorBudget FactorBudget::from_effort(std::uint64_t effort) {
    FactorBudget b;
    b.trial_division_bound = std::clamp<std::uint64_t>(effort, 1000, 100'000'000);
    b.rho_max_iterations = std::clamp<std::uint64_t>(effort, 1000, 1'000'000'000);
    return b;
}

bool is_probable_prime(const mpz_class& n, int rounds) {
    return mpz_probab_prime_p(n.get_mpz_t(), rounds) > 0;
}

std::uint64_t isqrt_u64(std::uint64_t x) {
    if (x == 0) return 0;
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
    while (s > 0 && (unsigned __int128)s * s > x) --s;
    while ((unsigned __int128)(s + 1) * (s + 1) <= x) ++s;
    return s;
}

namespace {

// Brent's cycle variant of Pollard rho. Returns a nontrivial factor or 0.
// iterations_left is shared across restarts and recursive splits so the
// total effort stays bounded.
mpz_class brent_rho(const mpz_class& n, unsigned long c, std::uint64_t& iterations_left) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), 2)) return 2;
    mpz_class y = 2, g = 1, q = 1, x, ys, diff;
    std::uint64_t r = 1;
    const std::uint64_t batch = 128;
    while (g == 1 && iterations_left > 0) {
        x = y;
        for (std::uint64_t i = 0; i < r && iterations_left > 0; ++i) {
            y = (y * y + c) % n;
            --iterations_left;
        }
        std::uint64_t k = 0;
        while (k < r && g == 1 && iterations_left > 0) {
            ys = y;
            std::uint64_t lim = std::min(batch, r - k);
            for (std::uint64_t i = 0; i < lim && iterations_left > 0; ++i) {
                y = (y * y + c) % n;
                diff = x - y;
                q = (q * abs(diff)) % n;
                --iterations_left;
            }
            mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            k += lim;
        }
        r *= 2;
    }
    if (g == n) {
        // Backtrack one step at a time to pull the factor apart.
        do {
            ys = (ys * ys + c) % n;
            diff = x - ys;
            mpz_gcd(g.get_mpz_t(), mpz_class(abs(diff)).get_mpz_t(), n.get_mpz_t());
        } while (g == 1);
    }
    if (g > 1 && g < n) return g;
    return 0;
}

void split_cofactor(const mpz_class& n, int multiplicity, std::map<mpz_class, int>& factors,
                    mpz_class& leftover, std::uint64_t& iterations_left, const FactorBudget& budget) {
    if (n == 1) return;
    if (is_probable_prime(n, budget.primality_rounds)) {
        factors[n] += multiplicity;
        return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
        for (unsigned long k = 2; k <= bits; ++k) {
            mpz_class root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) {
                split_cofactor(root, multiplicity * static_cast<int>(k), factors, leftover,
                               iterations_left, budget);
                return;
            }
        }
    }
    mpz_class d = 0;
    for (int attempt = 0; attempt < budget.rho_max_restarts && iterations_left > 0; ++attempt) {
        d = brent_rho(n, 1 + static_cast<unsigned long>(attempt), iterations_left);
        if (d != 0) break;
    }
    if (d == 0) {
        // Budget exhausted; keep the composite cofactor intact.
        for (int i = 0; i < multiplicity; ++i) leftover *= n;
        return;
    }
    split_cofactor(d, multiplicity, factors, leftover, iterations_left, budget);
    split_cofactor(mpz_class(n / d), multiplicity, factors, leftover, iterations_left, budget);
}

}  // namespace

FactorizationResult factor_with_budget(const mpz_class& n, const FactorBudget& budget) {
    if (n == 0) throw std::invalid_argument("factor_with_budget: n must be nonzero");
    FactorizationResult out;
    mpz_class m = abs(n);
    if (m == 1) return out;

    std::map<mpz_class, int> factors;
    auto strip = [&](unsigned long d) {
        unsigned long e = mpz_remove(m.get_mpz_t(), m.get_mpz_t(), mpz_class(d).get_mpz_t());
        if (e > 0) factors[mpz_class(d)] += static_cast<int>(e);
    };
    strip(2);
    strip(3);
    unsigned long d = 5;
    // 6k +- 1 wheel; stop once d^2 exceeds the cofactor.
    while (d <= budget.trial_division_bound) {
        mpz_class dd = mpz_class(d) * d;
        if (dd > m) break;
        strip(d);
        strip(d + 2);
        d += 6;
    }
    if (m > 1) {
        mpz_class dd = mpz_class(budget.trial_division_bound) * budget.trial_division_bound;
        if (m <= dd || is_probable_prime(m, budget.primality_rounds)) {
            // Any cofactor below bound^2 that survived the wheel is prime.
            factors[m] += 1;
        } else {
            std::uint64_t iterations_left = budget.rho_max_iterations;
            split_cofactor(m, 1, factors, out.leftover, iterations_left, budget);
        }
    }
    out.factors.assign(factors.begin(), factors.end());
    out.complete = (out.leftover == 1);
    return out;
}

SquarefreeDecomposition squarefree_decompose(const mpz_class& n, const FactorBudget& budget) {
    if (n == 0) throw std::invalid_argument("squarefree_decompose: n must be nonzero");
    SquarefreeDecomposition out;
    out.n = n;
    out.kernel = (n < 0) ? -1 : 1;
    out.square_root_part = 1;
    FactorizationResult f = factor_with_budget(n, budget);
    for (const auto& [p, e] : f.factors) {
        if (e % 2 != 0) out.kernel *= p;
        for (int i = 0; i < e / 2; ++i) out.square_root_part *= p;
    }
    if (!f.complete) {
        // Unfactored part may hide square divisors; fold it in and flag.
        out.kernel *= f.leftover;
        out.complete = false;
    }
    return out;
}

int kronecker_symbol(const mpz_class& a, const mpz_class& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::optional<mpz_class> perfect_power_root(const mpz_class& n, unsigned k) {
    if (k < 2) throw std::invalid_argument("perfect_power_root: k must be >= 2");
    if (n < 0 && k % 2 == 0) return std::nullopt;
    if (n == 0) return mpz_class(0);
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k)) return root;
    return std::nullopt;
}

std::pair<unsigned long, mpz_class> p_adic_valuation(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw std::invalid_argument("p_adic_valuation: n must be nonzero");
    if (p < 2) throw std::invalid_argument("p_adic_valuation: p must be >= 2");
    mpz_class unit;
    unsigned long v = mpz_remove(unit.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    return {v, unit};
}

namespace {

using Poly = std::vector<mpz_class>;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly derivative(const Poly& p) {
    Poly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
    return d;
}

mpz_class eval(const Poly& p, const mpz_class& x) {
    mpz_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// Cauchy bound: every real root r has |r| < 1 + max|c_i| / |c_n|.
mpz_class root_bound(const Poly& p) {
    mpz_class maxabs = 0;
    for (size_t i = 0; i + 1 < p.size(); ++i) maxabs = std::max(maxabs, mpz_class(abs(p[i])));
    return 2 + maxabs / abs(p.back());
}

// Unit intervals [a, b] with b - a <= 1 covering every sign change of p,
// plus degenerate [a, a] entries for integer points where p vanishes.
// Between consecutive interval endpoints p is monotone (its derivative
// keeps one sign), which is all the bisection below relies on.
std::vector<std::pair<mpz_class, mpz_class>> isolate(const Poly& p) {
    std::vector<std::pair<mpz_class, mpz_class>> out;
    if (p.size() <= 1) return out;
    if (p.size() == 2) {
        mpz_class num = -p[0], den = p[1];
        if (den < 0) { num = -num; den = -den; }
        mpz_class q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (r == 0) out.emplace_back(q, q);
        else out.emplace_back(q, q + 1);
        return out;
    }

    std::vector<mpz_class> breakpoints;
    mpz_class bound = root_bound(p);
    breakpoints.push_back(-bound);
    breakpoints.push_back(bound);
    for (const auto& iv : isolate(derivative(p))) {
        breakpoints.push_back(iv.first);
        breakpoints.push_back(iv.second);
    }
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    auto push_exact = [&](const mpz_class& x) {
        if (out.empty() || out.back() != std::make_pair(x, x)) out.emplace_back(x, x);
    };

    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const mpz_class& lo = breakpoints[i];
        const mpz_class& hi = breakpoints[i + 1];
        if (lo < -bound || hi > bound) continue;
        mpz_class flo = eval(p, lo);
        mpz_class fhi = eval(p, hi);
        if (flo == 0) push_exact(lo);
        if (i + 2 == breakpoints.size() && fhi == 0) push_exact(hi);
        if (flo == 0 || fhi == 0) continue;
        if (sgn(flo) == sgn(fhi)) continue;
        mpz_class a = lo, b = hi;
        while (b - a > 1) {
            mpz_class sum = a + b, mid;
            mpz_fdiv_q_ui(mid.get_mpz_t(), sum.get_mpz_t(), 2);
            mpz_class fm = eval(p, mid);
            if (fm == 0) { push_exact(mid); a = mid; b = mid; break; }
            if (sgn(fm) == sgn(flo)) a = mid; else b = mid;
        }
        if (a != b) out.emplace_back(a, b);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

std::vector<mpz_class> integer_roots(const std::vector<mpz_class>& coeffs) {
    Poly p = trim(coeffs);
    if (p.empty()) throw std::invalid_argument("integer_roots: zero polynomial");
    std::vector<mpz_class> roots;
    size_t low = 0;
    while (low < p.size() && p[low] == 0) ++low;
    if (low > 0) {
        roots.push_back(0);
        p.erase(p.begin(), p.begin() + static_cast<long>(low));
    }
    for (const auto& iv : isolate(p)) {
        if (iv.first == iv.second && eval(p, iv.first) == 0) roots.push_back(iv.first);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace quadclass
