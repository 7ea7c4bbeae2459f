#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace quadclass {

// Effort knobs for integer factoring. Trial division runs first, then
// Pollard rho (Brent variant) on whatever cofactor is left. Both are
// bounded so batch verification never stalls on a hard semiprime.
struct FactorBudget {
    std::uint64_t trial_division_bound = 1'000'000;
    std::uint64_t rho_max_iterations = 200'000;
    int rho_max_restarts = 8;
    int primality_rounds = 30;

    static FactorBudget from_effort(std::uint64_t effort);
};

// n = kernel * square_root_part^2 with kernel squarefree when complete.
// When the budget runs out, the unfactored cofactor is folded into the
// kernel conservatively and complete is set to false.
struct SquarefreeDecomposition {
    mpz_class n;
    mpz_class kernel;
    mpz_class square_root_part;
    bool complete = true;
};

struct FactorizationResult {
    // (prime, exponent), sorted by prime. leftover == 1 iff complete.
    std::vector<std::pair<mpz_class, int>> factors;
    mpz_class leftover = 1;
    bool complete = true;
};

FactorizationResult factor_with_budget(const mpz_class& n, const FactorBudget& budget);

SquarefreeDecomposition squarefree_decompose(const mpz_class& n, const FactorBudget& budget);

// Kronecker symbol (a|n), total extension of Jacobi.
int kronecker_symbol(const mpz_class& a, const mpz_class& n);

// Exact k-th root if n is a perfect k-th power (k >= 2; negative n allowed
// for odd k), otherwise nullopt.
std::optional<mpz_class> perfect_power_root(const mpz_class& n, unsigned k);

// (v, u) with n = p^v * u, p does not divide u. Requires n != 0, p >= 2.
std::pair<unsigned long, mpz_class> p_adic_valuation(const mpz_class& n, const mpz_class& p);

bool is_probable_prime(const mpz_class& n, int rounds = 30);

// Exact floor(sqrt(x)).
std::uint64_t isqrt_u64(std::uint64_t x);

// All integer roots of the polynomial sum coeffs[i] * x^i, via recursive
// sign-variation isolation and exact bisection. No factoring involved, so
// it works for arbitrary coefficient sizes. Roots are sorted ascending;
// multiple roots are reported once.
std::vector<mpz_class> integer_roots(const std::vector<mpz_class>& coeffs);

}  // namespace quadclass
