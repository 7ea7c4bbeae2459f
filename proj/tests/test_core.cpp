#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "quadclass/divisor_scan.hpp"
#include "quadclass/field.hpp"
#include "quadclass/integers.hpp"

using namespace quadclass;

namespace {

mpz_class reassemble(const FactorizationResult& fr) {
    mpz_class n = 1;
    for (const auto& [p, e] : fr.factors)
        for (int i = 0; i < e; ++i) n *= p;
    return n * fr.leftover;
}

// Plain reference divisor collector, independent of the kernel code.
std::vector<std::uint64_t> naive_divisors(std::uint64_t m, std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    if (lo < 1) lo = 1;
    if (hi > m) hi = m;
    for (std::uint64_t a = lo; a <= hi && a != 0; ++a)
        if (m % a == 0) out.push_back(a);
    return out;
}

}  // namespace

TEST_CASE("isqrt_u64 exact at boundaries") {
    CHECK(isqrt_u64(0) == 0);
    CHECK(isqrt_u64(1) == 1);
    CHECK(isqrt_u64(3) == 1);
    CHECK(isqrt_u64(4) == 2);
    CHECK(isqrt_u64(24) == 4);
    CHECK(isqrt_u64(25) == 5);
    std::uint64_t big = 3037000499ULL;  // floor(sqrt(2^63 - 1)) region
    CHECK(isqrt_u64(big * big) == big);
    CHECK(isqrt_u64(big * big - 1) == big - 1);
    CHECK(isqrt_u64(big * big + 2 * big) == big);
    CHECK(isqrt_u64(UINT64_MAX) == 4294967295ULL);

    std::mt19937_64 rng(42);
    for (int i = 0; i < 2000; ++i) {
        std::uint64_t n = rng();
        std::uint64_t r = isqrt_u64(n);
        // r^2 <= n < (r+1)^2, checked in 128-bit arithmetic
        CHECK(static_cast<unsigned __int128>(r) * r <= n);
        CHECK(static_cast<unsigned __int128>(r + 1) * (r + 1) > n);
    }
}

TEST_CASE("kronecker symbol matches Euler criterion for odd primes") {
    auto euler = [](long a, long p) {
        // a^((p-1)/2) mod p, mapped to {-1, 0, 1}
        mpz_class base(a), mod(p), r;
        mpz_powm_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>((p - 1) / 2),
                    mod.get_mpz_t());
        if (r == 0) return 0;
        return r == 1 ? 1 : -1;
    };
    for (long p : {3L, 5L, 7L, 11L, 13L, 97L, 101L}) {
        for (long a = -20; a <= 20; ++a) {
            CHECK(kronecker_symbol(a, p) == euler(a, p));
        }
    }
    // Kronecker extension at 2: (a/2) is 0 for even a, else +-1 by a mod 8
    CHECK(kronecker_symbol(2, 2) == 0);
    CHECK(kronecker_symbol(7, 2) == 1);
    CHECK(kronecker_symbol(3, 2) == -1);
    CHECK(kronecker_symbol(-1, 2) == 1);
}

TEST_CASE("perfect_power_root") {
    CHECK(perfect_power_root(27, 3) == mpz_class(3));
    CHECK(perfect_power_root(1024, 10) == mpz_class(2));
    CHECK(perfect_power_root(1, 5) == mpz_class(1));
    CHECK(perfect_power_root(-27, 3) == mpz_class(-3));
    CHECK_FALSE(perfect_power_root(-27, 2).has_value());
    CHECK_FALSE(perfect_power_root(26, 3).has_value());
    CHECK_FALSE(perfect_power_root(100, 3).has_value());
    mpz_class big("123456789123456789");
    CHECK(perfect_power_root(big * big * big, 3) == big);
    CHECK_FALSE(perfect_power_root(big * big * big + 1, 3).has_value());
    CHECK_THROWS_AS(perfect_power_root(8, 1), std::invalid_argument);
}

TEST_CASE("p_adic_valuation") {
    auto [e1, r1] = p_adic_valuation(48, 2);
    CHECK(e1 == 4);
    CHECK(r1 == 3);
    auto [e2, r2] = p_adic_valuation(81, 3);
    CHECK(e2 == 4);
    CHECK(r2 == 1);
    auto [e3, r3] = p_adic_valuation(-54, 3);
    CHECK(e3 == 3);
    CHECK(r3 == -2);
    auto [e4, r4] = p_adic_valuation(7, 5);
    CHECK(e4 == 0);
    CHECK(r4 == 7);
    CHECK_THROWS_AS(p_adic_valuation(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(p_adic_valuation(12, 1), std::invalid_argument);
}

TEST_CASE("factor_with_budget on transparent composites") {
    FactorBudget budget;
    FactorizationResult fr = factor_with_budget(mpz_class(2) * 2 * 2 * 3 * 3 * 7 * 7 * 7, budget);
    CHECK(fr.complete);
    REQUIRE(fr.factors.size() == 3);
    CHECK(fr.factors[0] == std::make_pair(mpz_class(2), 3));
    CHECK(fr.factors[1] == std::make_pair(mpz_class(3), 2));
    CHECK(fr.factors[2] == std::make_pair(mpz_class(7), 3));
    CHECK(reassemble(fr) == 2 * 2 * 2 * 3 * 3 * 7 * 7 * 7);

    // large prime: settled by primality testing, not division
    mpz_class p("1000000000000000009");
    fr = factor_with_budget(p, budget);
    CHECK(fr.complete);
    REQUIRE(fr.factors.size() == 1);
    CHECK(fr.factors[0].first == p);

    // product of two 10-digit primes: rho territory
    mpz_class q1("2147483647"), q2("2147483629");
    fr = factor_with_budget(q1 * q2, budget);
    CHECK(fr.complete);
    REQUIRE(fr.factors.size() == 2);
    CHECK(fr.factors[0].first * fr.factors[1].first == q1 * q2);

    // perfect power of a large prime
    fr = factor_with_budget(q1 * q1 * q1, budget);
    CHECK(fr.complete);
    REQUIRE(fr.factors.size() == 1);
    CHECK(fr.factors[0] == std::make_pair(q1, 3));
}

TEST_CASE("factor_with_budget reports honest leftovers") {
    // two ~25-digit primes; rho at default budget cannot split this
    mpz_class p("1000000000000000000000007");
    mpz_class q("1000000000000000000000049");
    FactorBudget tiny = FactorBudget::from_effort(1000);
    tiny.rho_max_iterations = 1000;
    tiny.rho_max_restarts = 1;
    FactorizationResult fr = factor_with_budget(p * q, tiny);
    CHECK_FALSE(fr.complete);
    CHECK(fr.leftover == p * q);
    CHECK(reassemble(fr) == p * q);
}

TEST_CASE("squarefree_decompose") {
    auto dec = squarefree_decompose(79, {});
    CHECK(dec.complete);
    CHECK(dec.kernel == 79);
    CHECK(dec.square_root_part == 1);

    dec = squarefree_decompose(48, {});
    CHECK(dec.kernel == 3);
    CHECK(dec.square_root_part == 4);

    dec = squarefree_decompose(-50, {});
    CHECK(dec.kernel == -2);
    CHECK(dec.square_root_part == 5);

    dec = squarefree_decompose(mpz_class("633465"), {});  // 3^2 * 70385
    CHECK(dec.complete);
    CHECK(dec.kernel == 70385);
    CHECK(dec.square_root_part == 3);

    mpz_class q1("2147483647");
    dec = squarefree_decompose(q1 * q1 * 5, {});
    CHECK(dec.complete);
    CHECK(dec.kernel == 5);
    CHECK(dec.square_root_part == q1);

    // reconstruction law holds even when factoring gives up
    mpz_class p("1000000000000000000000007");
    mpz_class q("1000000000000000000000049");
    FactorBudget tiny = FactorBudget::from_effort(1000);
    tiny.rho_max_iterations = 1000;
    tiny.rho_max_restarts = 1;
    dec = squarefree_decompose(p * q * 9, tiny);
    CHECK_FALSE(dec.complete);
    CHECK(dec.kernel * dec.square_root_part * dec.square_root_part == p * q * 9);
}

TEST_CASE("integer_roots on assorted polynomials") {
    // (x - 3)(x + 5)(x - 1000000000000)
    mpz_class r3("1000000000000");
    // expand: x^3 + (2 - r3) x^2 + (-15 - 2 r3) x + 15 r3
    std::vector<mpz_class> c{15 * r3, -15 - 2 * r3, 2 - r3, 1};
    auto roots = integer_roots(c);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == -5);
    CHECK(roots[1] == 3);
    CHECK(roots[2] == r3);

    // double root: (x - 4)^2 (x + 1) = x^3 - 7x^2 + 8x + 16
    roots = integer_roots({16, 8, -7, 1});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == -1);
    CHECK(roots[1] == 4);

    // no integer roots
    CHECK(integer_roots({1, 0, 1}).empty());           // x^2 + 1
    CHECK(integer_roots({-1, 2}).empty());             // 2x - 1
    CHECK(integer_roots({1, 3, 0, 1}).empty());        // x^3 + 3x + 1
    CHECK(integer_roots({-9, 78, 0, 1}).empty());      // x^3 + 78x - 9

    // zero roots are stripped and reported once
    roots = integer_roots({0, 0, -2, 1});  // x^2 (x - 2)
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == 0);
    CHECK(roots[1] == 2);

    // negative leading coefficient
    roots = integer_roots({6, -5, -2, 1});  // (x-3)(x+2)(x-1)... check: x^3-2x^2-5x+6
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == -2);
    CHECK(roots[1] == 1);
    CHECK(roots[2] == 3);

    // quartic with touch roots at integers: (x^2 - 4)^2
    roots = integer_roots({16, 0, -8, 0, 1});
    REQUIRE(roots.size() == 2);
    CHECK(roots[0] == -2);
    CHECK(roots[1] == 2);

    CHECK(integer_roots({5}).empty());
    CHECK_THROWS_AS(integer_roots({}), std::invalid_argument);
}

TEST_CASE("integer_roots randomized against construction") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> small(-50, 50);
    for (int trial = 0; trial < 200; ++trial) {
        // build (x - r1)(x - r2)(x - r3) + possibly an irreducible factor
        long r1 = small(rng), r2 = small(rng), r3 = small(rng);
        std::vector<mpz_class> poly{1};
        for (long r : {r1, r2, r3}) {
            std::vector<mpz_class> next(poly.size() + 1);
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] += poly[i];
                next[i] -= r * poly[i];
            }
            poly = next;
        }
        if (trial % 2) {
            // multiply by x^2 + 1 (no real roots)
            std::vector<mpz_class> next(poly.size() + 2);
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i + 2] += poly[i];
                next[i] += poly[i];
            }
            poly = next;
        }
        std::vector<mpz_class> expect{r1, r2, r3};
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        auto got = integer_roots(poly);
        CHECK(got == expect);
    }
}

TEST_CASE("field_from_radicand normalization") {
    auto f = field_from_radicand(79, {});
    CHECK(f.kernel == 79);
    CHECK(f.discriminant == 316);
    CHECK(f.real);

    f = field_from_radicand(5, {});
    CHECK(f.discriminant == 5);

    f = field_from_radicand(12, {});
    CHECK(f.kernel == 3);
    CHECK(f.discriminant == 12);

    f = field_from_radicand(45, {});
    CHECK(f.kernel == 5);
    CHECK(f.discriminant == 5);

    f = field_from_radicand(8, {});
    CHECK(f.kernel == 2);
    CHECK(f.discriminant == 8);

    f = field_from_radicand(-1, {});
    CHECK(f.kernel == -1);
    CHECK(f.discriminant == -4);
    CHECK_FALSE(f.real);

    f = field_from_radicand(-3, {});
    CHECK(f.discriminant == -3);

    f = field_from_radicand(-4, {});
    CHECK(f.kernel == -1);
    CHECK(f.discriminant == -4);

    CHECK_THROWS_AS(field_from_radicand(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(field_from_radicand(9, {}), std::invalid_argument);
    CHECK_THROWS_AS(field_from_radicand(1, {}), std::invalid_argument);
}

TEST_CASE("divisor scan: scalar agrees with a naive loop") {
    std::mt19937_64 rng(123);
    std::vector<std::uint64_t> hits;
    for (int trial = 0; trial < 400; ++trial) {
        std::uint64_t m = 1 + rng() % 5'000'000;
        std::uint64_t lo = rng() % 3000;
        std::uint64_t hi = lo + rng() % 4000;
        hits.clear();
        kernels::divisor_scan_scalar(m, lo, hi, hits);
        CHECK(hits == naive_divisors(m, lo, hi));
    }
    // degenerate windows
    hits.clear();
    kernels::divisor_scan_scalar(12, 5, 3, hits);
    CHECK(hits.empty());
    hits.clear();
    kernels::divisor_scan_scalar(12, 0, 100, hits);
    CHECK(hits == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
}

TEST_CASE("divisor scan: active kernel is equivalent to scalar") {
    INFO("active kernel: ", kernels::active_divisor_scan_name());
    std::mt19937_64 rng(999);
    std::vector<std::uint64_t> a, b;
    auto* active = kernels::active_divisor_scan();

    for (int trial = 0; trial < 600; ++trial) {
        std::uint64_t m;
        switch (trial % 4) {
            case 0: m = 1 + rng() % 1000; break;
            case 1: m = 1 + rng() % 100'000'000; break;
            case 2: m = (1ULL << 52) - 1 - rng() % 100'000; break;  // float-exactness edge
            default: m = (1ULL << 52) + rng() % (1ULL << 60);       // forces scalar fallback
        }
        std::uint64_t width = rng() % 2000;
        std::uint64_t lo = rng() % (isqrt_u64(m) + 2);
        a.clear();
        b.clear();
        kernels::divisor_scan_scalar(m, lo, lo + width, a);
        active(m, lo, lo + width, b);
        REQUIRE(a == b);
    }

    // windows aligned to every offset mod 4, hitting dense divisor sets
    std::uint64_t m = 720720;  // highly composite
    for (std::uint64_t lo = 0; lo < 16; ++lo) {
        a.clear();
        b.clear();
        kernels::divisor_scan_scalar(m, lo, 900, a);
        active(m, lo, 900, b);
        REQUIRE(a == b);
    }
}
