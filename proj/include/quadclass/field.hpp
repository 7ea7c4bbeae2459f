#pragma once

#include <gmpxx.h>

#include "quadclass/integers.hpp"

namespace quadclass {

// Q(sqrt(radicand)), normalized: kernel is the squarefree part of the
// radicand and discriminant the fundamental discriminant of the field.
struct QuadraticField {
    mpz_class radicand;
    mpz_class kernel;
    mpz_class discriminant;
    bool real = true;
    // False when the squarefree decomposition ran out of budget, in which
    // case kernel/discriminant are conservative and not certified.
    bool normalization_complete = true;
};

QuadraticField field_from_radicand(const mpz_class& radicand, const FactorBudget& budget);

// Same normalization, but from an already-known squarefree decomposition
// (e.g. a cache hit). Rejects square radicands just like the function above.
QuadraticField field_from_decomposition(const SquarefreeDecomposition& dec);

}  // namespace quadclass
