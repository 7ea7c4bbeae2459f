#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "quadclass/integers.hpp"

namespace quadclass {

// ax^2 + bxy + cy^2 with integer coefficients.
struct BinaryQuadraticForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    std::int64_t discriminant() const;
    bool operator==(const BinaryQuadraticForm&) const = default;
};

struct FormEnumConfig {
    std::uint64_t form_cap = 10'000'000;
};

struct ClassNumberResult {
    std::int64_t discriminant = 0;
    std::int64_t narrow_h = 0;
    std::optional<std::int64_t> h;
    std::optional<int> unit_norm;
    std::uint64_t form_count = 0;
    double elapsed_seconds = 0.0;
};

struct ScholzResult {
    std::int64_t d = 0;
    mpz_class mirror_kernel;
    std::int64_t mirror_discriminant = 0;
    std::int64_t mirror_h = 0;
    bool holds = false;
};

struct FormCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reduced in the indefinite sense: with s = floor(sqrt(disc)),
// 1 <= b <= s, 2|a| + b >= s + 1 and 2|a| - b <= s. Exact integer
// arithmetic throughout; equivalent to |sqrt(disc) - 2|a|| < b < sqrt(disc).
bool is_reduced_indefinite(const BinaryQuadraticForm& f);

// Positive-definite convention: |b| <= a <= c, with b >= 0 when |b| = a
// or a = c.
bool is_reduced_definite(const BinaryQuadraticForm& f);

// All reduced forms of positive nonsquare discriminant, sorted by (b, a).
// Throws FormCapExceeded past cfg.form_cap.
std::vector<BinaryQuadraticForm> enumerate_reduced_indefinite(std::int64_t disc,
                                                              const FormEnumConfig& cfg = {});

// One reduction step (a,b,c) -> (c,b',c'); requires a reduced input and
// returns a reduced form of the same discriminant.
BinaryQuadraticForm rho_step(const BinaryQuadraticForm& f);

// Narrow class number = number of rho cycles on the reduced forms.
// disc must be a positive nonsquare fundamental discriminant.
ClassNumberResult narrow_class_number(std::int64_t disc, const FormEnumConfig& cfg = {});

// Narrow class number plus the wide one: h = narrow_h when the fundamental
// unit has norm -1, narrow_h / 2 otherwise.
ClassNumberResult real_class_number(std::int64_t disc, const FormEnumConfig& cfg = {});

// Norm of the fundamental unit (+1 or -1) via the parity of the continued
// fraction period of (b0 + sqrt(disc))/2.
int fundamental_unit_norm(std::int64_t disc);

// Class number of an imaginary quadratic field by counting reduced
// positive-definite forms. disc must be a negative fundamental discriminant.
ClassNumberResult imaginary_class_number(std::int64_t disc, const FormEnumConfig& cfg = {});

// Reflection check for a real field Q(sqrt(d)) whose class number is
// divisible by 3: the mirror field Q(sqrt(-3d)) must inherit the
// divisibility. Callers establish the premise first.
ScholzResult scholz_reflection_check(std::int64_t d, const FactorBudget& budget,
                                     const FormEnumConfig& cfg = {});

}  // namespace quadclass
