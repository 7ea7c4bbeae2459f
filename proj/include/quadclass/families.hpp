#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "quadclass/field.hpp"
#include "quadclass/forms.hpp"
#include "quadclass/kishi.hpp"
#include "quadclass/km.hpp"

namespace quadclass {

mpz_class family_A_radicand(const mpz_class& x);
mpz_class family_B_radicand(const mpz_class& y);
mpz_class family_C_radicand(const mpz_class& k);
mpz_class family_C_m(const mpz_class& k);

struct FamilyInstance {
    char family_id = '?';
    mpz_class parameter;
    mpz_class radicand;
    // Exactly one certificate is populated: km for A/B, kishi for C.
    std::optional<KMCertificate> km;
    std::optional<KishiCertificate> kishi;
    std::optional<ClassNumberResult> direct_check;
    std::optional<std::string> direct_skip_reason;

    bool certificate_valid() const;
};

// Builds the instance and raises std::logic_error if the certificate
// is invalid (the family theorems promise it never is).
FamilyInstance family_A(const mpz_class& x, const FactorBudget& budget = {});
FamilyInstance family_B(const mpz_class& y, const FactorBudget& budget = {});
FamilyInstance family_C(const mpz_class& k, const FactorBudget& budget = {});

// Non-throwing variant: builds the instance and leaves validity to the
// caller (inspect certificate_valid()).
FamilyInstance family_instance(char family_id, const mpz_class& parameter,
                               const FactorBudget& budget = {});

// Policy knobs for attaching a direct class-number computation.
struct DirectCheckPolicy {
    mpz_class threshold = 1'000'000'000;  // max |fundamental discriminant|
    FormEnumConfig forms;
    FactorBudget budget;
};

// Computes narrow_class_number for the instance's field when the
// fundamental discriminant is known (factoring completed) and within
// threshold; otherwise records a skip reason. Pass a precomputed field
// to avoid refactoring the radicand.
void attach_direct_check(FamilyInstance& inst, const DirectCheckPolicy& policy,
                         const QuadraticField* known_field = nullptr);

struct QuadrupleReport {
    mpz_class k;
    mpz_class D;
    std::vector<FamilyInstance> components;  // [D via C-at-k, A(D), B(D), C(D)]
    bool all_valid = false;
};

// Theorem-backed quadruple: D = family C radicand at k, then the three
// family polynomials evaluated at D, each with its certificate.
QuadrupleReport quadruple(const mpz_class& k, const FactorBudget& budget = {});

// Secondary entry point: assemble the three derived components at an
// arbitrary positive D (certificates still checked per component).
std::vector<FamilyInstance> quadruple_components_at(const mpz_class& D,
                                                    const FactorBudget& budget = {});

struct DistinctnessEntry {
    mpz_class k;
    mpz_class radicand;
    std::optional<mpz_class> kernel;  // absent when factoring was incomplete
};

struct DistinctnessReport {
    mpz_class from;
    mpz_class to;
    std::vector<DistinctnessEntry> entries;
    std::vector<std::pair<mpz_class, mpz_class>> collisions;  // parameter pairs
    std::vector<mpz_class> incomplete;                        // parameters skipped
};

// Empirical stand-in for the infinitude argument: squarefree kernels of
// family C radicands over [from, to], reporting pairwise collisions.
DistinctnessReport kernel_distinctness_scan(const mpz_class& from, const mpz_class& to,
                                            const FactorBudget& budget = {});

}  // namespace quadclass
