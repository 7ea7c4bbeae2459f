#include "quadclass/families.hpp"

#include <stdexcept>

namespace quadclass {

mpz_class family_A_radicand(const mpz_class& x) {
    return ((216000 * x + 457200) * x + 322580) * x + 75866;
}

mpz_class family_B_radicand(const mpz_class& y) {
    return ((432 * y + 1080) * y + 900) * y + 223;
}

mpz_class family_C_radicand(const mpz_class& k) {
    return ((40500 * k + 89100) * k + 65340) * k + 16215;
}

mpz_class family_C_m(const mpz_class& k) {
    return ((13500 * k + 29700) * k + 21780) * k + 5405;
}

bool FamilyInstance::certificate_valid() const {
    // Families A and B are instances of one specific congruence branch;
    // landing anywhere else would void the conclusion even if the
    // certificate conditions hold.
    if (km) {
        if (!km->valid) return false;
        if (family_id == 'A') return km->d_branch == DBranch::d3;
        if (family_id == 'B') return km->d_branch == DBranch::d1;
        return true;
    }
    if (kishi) return kishi->valid;
    return false;
}

namespace {

void require_positive(const mpz_class& p, const char* name) {
    if (p < 1) throw std::invalid_argument(std::string(name) + ": parameter must be >= 1");
}

void require_valid(const FamilyInstance& inst) {
    if (!inst.certificate_valid())
        throw std::logic_error(std::string("family ") + inst.family_id +
                               " produced an invalid certificate at parameter " +
                               inst.parameter.get_str());
}

FamilyInstance make_A(const mpz_class& x, const FactorBudget& budget) {
    FamilyInstance inst;
    inst.family_id = 'A';
    inst.parameter = x;
    inst.radicand = family_A_radicand(x);
    inst.km = km_certificate(4, 3 * (180 * x + 127), budget);
    inst.km->notes.push_back("discriminant identity: disc = 186624 * radicand; 186624 = 432^2 "
                             "= 9 * 12^4 (the 12^4 constant alone is off by the square 9)");
    inst.km->notes.push_back("radicand = 2 mod 4, hence neither it nor the discriminant is "
                             "a square");
    return inst;
}

FamilyInstance make_B(const mpz_class& y, const FactorBudget& budget) {
    FamilyInstance inst;
    inst.family_id = 'B';
    inst.parameter = y;
    inst.radicand = family_B_radicand(y);
    inst.km = km_certificate(2, 6 * y + 5, budget);
    inst.km->notes.push_back("discriminant identity: disc = 16 * radicand; radicand = 1 mod 3 "
                             "and 3 mod 4, hence not a square");
    return inst;
}

FamilyInstance make_C(const mpz_class& k, const FactorBudget& budget) {
    FamilyInstance inst;
    inst.family_id = 'C';
    inst.parameter = k;
    inst.radicand = family_C_radicand(k);
    inst.kishi = kishi_certificate({9, 1, family_C_m(k)}, budget);
    return inst;
}

}  // namespace

FamilyInstance family_instance(char family_id, const mpz_class& parameter,
                               const FactorBudget& budget) {
    require_positive(parameter, "family_instance");
    switch (family_id) {
        case 'A': return make_A(parameter, budget);
        case 'B': return make_B(parameter, budget);
        case 'C': return make_C(parameter, budget);
        default: throw std::invalid_argument("family_instance: unknown family id");
    }
}

FamilyInstance family_A(const mpz_class& x, const FactorBudget& budget) {
    require_positive(x, "family_A");
    FamilyInstance inst = make_A(x, budget);
    require_valid(inst);
    return inst;
}

FamilyInstance family_B(const mpz_class& y, const FactorBudget& budget) {
    require_positive(y, "family_B");
    FamilyInstance inst = make_B(y, budget);
    require_valid(inst);
    return inst;
}

FamilyInstance family_C(const mpz_class& k, const FactorBudget& budget) {
    require_positive(k, "family_C");
    FamilyInstance inst = make_C(k, budget);
    require_valid(inst);
    return inst;
}

void attach_direct_check(FamilyInstance& inst, const DirectCheckPolicy& policy,
                         const QuadraticField* known_field) {
    QuadraticField field = known_field ? *known_field
                                       : field_from_radicand(inst.radicand, policy.budget);
    if (!field.normalization_complete) {
        inst.direct_skip_reason = "radicand not factored within budget; fundamental "
                                  "discriminant unknown";
        return;
    }
    mpz_class abs_disc = abs(field.discriminant);
    if (abs_disc > policy.threshold) {
        inst.direct_skip_reason = "fundamental discriminant " + field.discriminant.get_str() +
                                  " exceeds direct-check threshold";
        return;
    }
    if (!field.discriminant.fits_slong_p()) {
        inst.direct_skip_reason = "fundamental discriminant exceeds machine range";
        return;
    }
    try {
        inst.direct_check = narrow_class_number(field.discriminant.get_si(), policy.forms);
    } catch (const FormCapExceeded& e) {
        inst.direct_skip_reason = std::string("direct check aborted: ") + e.what();
    }
}

std::vector<FamilyInstance> quadruple_components_at(const mpz_class& D,
                                                    const FactorBudget& budget) {
    require_positive(D, "quadruple_components_at");
    std::vector<FamilyInstance> out;
    out.push_back(make_A(D, budget));
    out.push_back(make_B(D, budget));
    out.push_back(make_C(D, budget));
    for (const auto& inst : out) require_valid(inst);
    return out;
}

QuadrupleReport quadruple(const mpz_class& k, const FactorBudget& budget) {
    require_positive(k, "quadruple");
    QuadrupleReport rep;
    rep.k = k;
    rep.components.push_back(make_C(k, budget));
    rep.D = rep.components[0].radicand;
    rep.components.push_back(make_A(rep.D, budget));
    rep.components.push_back(make_B(rep.D, budget));
    rep.components.push_back(make_C(rep.D, budget));
    rep.all_valid = true;
    for (const auto& c : rep.components) rep.all_valid = rep.all_valid && c.certificate_valid();
    return rep;
}

DistinctnessReport kernel_distinctness_scan(const mpz_class& from, const mpz_class& to,
                                            const FactorBudget& budget) {
    if (from < 1) throw std::invalid_argument("kernel_distinctness_scan: range must start at 1");
    DistinctnessReport rep;
    rep.from = from;
    rep.to = to;
    for (mpz_class k = from; k <= to; ++k) {
        DistinctnessEntry e;
        e.k = k;
        e.radicand = family_C_radicand(k);
        SquarefreeDecomposition dec = squarefree_decompose(e.radicand, budget);
        if (dec.complete) e.kernel = dec.kernel;
        else rep.incomplete.push_back(k);
        rep.entries.push_back(std::move(e));
    }
    for (size_t i = 0; i < rep.entries.size(); ++i) {
        for (size_t j = i + 1; j < rep.entries.size(); ++j) {
            const auto& a = rep.entries[i];
            const auto& b = rep.entries[j];
            if (a.kernel && b.kernel && *a.kernel == *b.kernel)
                rep.collisions.emplace_back(a.k, b.k);
        }
    }
    return rep;
}

}  // namespace quadclass
