#include "quadclass/km.hpp"

#include <stdexcept>

namespace quadclass {

namespace {

unsigned long mod_floor_ui(const mpz_class& x, unsigned long m) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), m);
    return r.get_ui();
}

}  // namespace

mpz_class cubic_discriminant(const MonicDepressedCubic& f) {
    return -4 * f.p * f.p * f.p - 27 * f.q * f.q;
}

std::vector<mpz_class> cubic_rational_roots(const MonicDepressedCubic& f) {
    return integer_roots({f.q, f.p, 0, 1});
}

const char* d_branch_name(DBranch b) {
    switch (b) {
        case DBranch::d1: return "d1";
        case DBranch::d2: return "d2";
        case DBranch::d3: return "d3";
        default: return "none";
    }
}

MonicDepressedCubic km_polynomial(const mpz_class& u, const mpz_class& v) {
    return {mpz_class(-u * v), mpz_class(-u * u)};
}

KMCertificate km_certificate(const mpz_class& u, const mpz_class& v, const FactorBudget& budget) {
    KMCertificate cert;
    cert.u = u;
    cert.v = v;

    MonicDepressedCubic f = km_polynomial(u, v);
    cert.discriminant = cubic_discriminant(f);

    mpz_class g;
    mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
    cert.cond_a = (g == 1);
    cert.cond_b = cubic_rational_roots(f).empty();
    cert.cond_c = !(cert.discriminant >= 0 && mpz_perfect_square_p(cert.discriminant.get_mpz_t()));

    if (mod_floor_ui(v, 3) != 0) {
        cert.d_branch = DBranch::d1;
    } else {
        mpz_class uv = u * v;
        bool near9 = mod_floor_ui(u - v - 1, 9) == 0 || mod_floor_ui(u - v + 1, 9) == 0;
        bool near27 = mod_floor_ui(u - v - 1, 27) == 0 || mod_floor_ui(u - v + 1, 27) == 0;
        if (mod_floor_ui(uv, 9) != 3) {
            if (near9) cert.d_branch = DBranch::d2;
        } else {
            if (near27) cert.d_branch = DBranch::d3;
        }
    }

    cert.valid = cert.cond_a && cert.cond_b && cert.cond_c && cert.d_branch != DBranch::none;
    if (!cert.valid) {
        if (!cert.cond_a) cert.notes.push_back("failed: gcd(u, v) != 1");
        else if (!cert.cond_b) cert.notes.push_back("failed: F has a rational root");
        else if (!cert.cond_c) cert.notes.push_back("failed: discriminant is a perfect square");
        else cert.notes.push_back("failed: no congruence branch applies");
    }

    if (cert.discriminant != 0) {
        SquarefreeDecomposition dec = squarefree_decompose(cert.discriminant, budget);
        if (dec.complete) {
            cert.field_radicand = dec.kernel;
            cert.field_radicand_complete = true;
            unsigned long d4 = mod_floor_ui(dec.kernel, 4);
            if (cert.cond_c && (d4 == 2 || d4 == 3))
                cert.notes.push_back("non-square discriminant shortcut: field radicand is " +
                                     std::to_string(d4) + " mod 4");
        } else {
            // Raw discriminant stands in until someone spends more budget.
            cert.field_radicand = cert.discriminant;
            cert.field_radicand_complete = false;
            cert.notes.push_back("field radicand unreduced: factoring budget exhausted");
        }
    } else {
        cert.field_radicand = 0;
        cert.field_radicand_complete = true;
    }
    return cert;
}

}  // namespace quadclass
