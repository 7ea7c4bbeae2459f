#include "quadclass/field.hpp"

#include <stdexcept>

namespace quadclass {

QuadraticField field_from_decomposition(const SquarefreeDecomposition& dec) {
    if (dec.n == 0) throw std::invalid_argument("field_from_decomposition: radicand must be nonzero");
    if (dec.n > 0 && mpz_perfect_square_p(dec.n.get_mpz_t()))
        throw std::invalid_argument("field_from_decomposition: radicand is a perfect square");

    QuadraticField f;
    f.radicand = dec.n;
    f.kernel = dec.kernel;
    f.real = dec.n > 0;
    f.normalization_complete = dec.complete;
    mpz_class m4;
    mpz_fdiv_r_ui(m4.get_mpz_t(), dec.kernel.get_mpz_t(), 4);
    f.discriminant = (m4 == 1) ? dec.kernel : mpz_class(4 * dec.kernel);
    return f;
}

QuadraticField field_from_radicand(const mpz_class& radicand, const FactorBudget& budget) {
    if (radicand == 0) throw std::invalid_argument("field_from_radicand: radicand must be nonzero");
    if (radicand > 0 && mpz_perfect_square_p(radicand.get_mpz_t()))
        throw std::invalid_argument("field_from_radicand: radicand is a perfect square");
    return field_from_decomposition(squarefree_decompose(radicand, budget));
}

}  // namespace quadclass
