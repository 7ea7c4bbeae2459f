#include "quadclass/forms.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_map>

#include "quadclass/divisor_scan.hpp"
#include "quadclass/field.hpp"

namespace quadclass {

namespace {

// Largest discriminant the int64 form machinery accepts. Keeps every
// intermediate (b^2, windows, hash keys) comfortably inside 64/128 bits.
constexpr std::int64_t max_disc = 4'000'000'000'000'000'000;

std::int64_t isqrt_i64(std::int64_t x) {
    return static_cast<std::int64_t>(isqrt_u64(static_cast<std::uint64_t>(x)));
}

void check_indefinite_disc(std::int64_t disc) {
    if (disc <= 4) throw std::invalid_argument("discriminant must be >= 5");
    if (disc > max_disc) throw std::invalid_argument("discriminant too large for form machinery");
    std::int64_t m4 = disc % 4;
    if (m4 != 0 && m4 != 1) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");
    std::int64_t s = isqrt_i64(disc);
    if (s * s == disc) throw std::invalid_argument("discriminant must not be a square");
}

std::uint64_t form_key(const BinaryQuadraticForm& f) {
    auto ua = static_cast<std::uint32_t>(f.a + (std::int64_t{1} << 31));
    auto ub = static_cast<std::uint32_t>(f.b);
    return (static_cast<std::uint64_t>(ua) << 32) | ub;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::int64_t BinaryQuadraticForm::discriminant() const {
    __int128 d = static_cast<__int128>(b) * b - static_cast<__int128>(4) * a * c;
    if (d > max_disc || d < -max_disc) throw std::overflow_error("form discriminant overflow");
    return static_cast<std::int64_t>(d);
}

bool is_reduced_indefinite(const BinaryQuadraticForm& f) {
    if (f.a == 0 || f.c == 0) return false;
    __int128 d = static_cast<__int128>(f.b) * f.b - static_cast<__int128>(4) * f.a * f.c;
    if (d <= 0) return false;
    std::int64_t disc = f.discriminant();
    std::int64_t s = isqrt_i64(disc);
    if (s * s == disc) return false;
    if (f.b < 1 || f.b > s) return false;
    std::int64_t abs2a = 2 * std::abs(f.a);
    return abs2a + f.b >= s + 1 && abs2a - f.b <= s;
}

bool is_reduced_definite(const BinaryQuadraticForm& f) {
    if (f.a <= 0 || f.c <= 0) return false;
    __int128 d = static_cast<__int128>(f.b) * f.b - static_cast<__int128>(4) * f.a * f.c;
    if (d >= 0) return false;
    std::int64_t ab = std::abs(f.b);
    if (ab > f.a || f.a > f.c) return false;
    if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
    return true;
}

std::vector<BinaryQuadraticForm> enumerate_reduced_indefinite(std::int64_t disc,
                                                              const FormEnumConfig& cfg) {
    check_indefinite_disc(disc);
    std::int64_t s = isqrt_i64(disc);
    std::vector<BinaryQuadraticForm> forms;
    std::vector<std::uint64_t> hits;

    std::int64_t b = 2 - (disc % 2 == 0 ? 0 : 1);
    for (; b <= s; b += 2) {
        std::uint64_t m = static_cast<std::uint64_t>((disc - b * b) / 4);
        // 2|a| + b >= s+1 and 2|a| - b <= s give the divisor window.
        std::int64_t lo_signed = s + 1 - b;
        std::uint64_t lo = lo_signed <= 0 ? 1 : static_cast<std::uint64_t>((lo_signed + 1) / 2);
        std::uint64_t hi = static_cast<std::uint64_t>((s + b) / 2);
        hits.clear();
        kernels::divisor_scan(m, lo, hi, hits);
        if (forms.size() + 2 * hits.size() > cfg.form_cap)
            throw FormCapExceeded("reduced form count exceeds configured cap");
        for (std::uint64_t d : hits) {
            auto a = static_cast<std::int64_t>(d);
            auto c = static_cast<std::int64_t>(m / d);
            forms.push_back({a, b, -c});
            forms.push_back({-a, b, c});
        }
    }
    std::sort(forms.begin(), forms.end(), [](const auto& x, const auto& y) {
        return std::make_pair(x.b, x.a) < std::make_pair(y.b, y.a);
    });
    return forms;
}

BinaryQuadraticForm rho_step(const BinaryQuadraticForm& f) {
    if (!is_reduced_indefinite(f)) throw std::invalid_argument("rho_step: form not reduced");
    std::int64_t disc = f.discriminant();
    std::int64_t s = isqrt_i64(disc);
    std::int64_t t = 2 * std::abs(f.c);
    // Largest b' <= s with b' = -b (mod 2|c|).
    std::int64_t r = ((-f.b) % t + t) % t;
    std::int64_t bp = s - ((s - r) % t + t) % t;
    __int128 num = static_cast<__int128>(bp) * bp - disc;
    __int128 den = static_cast<__int128>(4) * f.c;
    BinaryQuadraticForm g{f.c, bp, static_cast<std::int64_t>(num / den)};
    return g;
}

namespace {

std::int64_t count_rho_cycles(const std::vector<BinaryQuadraticForm>& forms) {
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    index.reserve(forms.size() * 2);
    for (std::uint32_t i = 0; i < forms.size(); ++i) index.emplace(form_key(forms[i]), i);

    std::vector<bool> visited(forms.size(), false);
    std::int64_t cycles = 0;
    for (std::uint32_t i = 0; i < forms.size(); ++i) {
        if (visited[i]) continue;
        ++cycles;
        BinaryQuadraticForm f = forms[i];
        std::uint32_t j = i;
        do {
            visited[j] = true;
            f = rho_step(f);
            auto it = index.find(form_key(f));
            if (it == index.end() || forms[it->second].c != f.c)
                throw std::logic_error("rho left the reduced form set");
            j = it->second;
        } while (j != i);
    }
    return cycles;
}

}  // namespace

ClassNumberResult narrow_class_number(std::int64_t disc, const FormEnumConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<BinaryQuadraticForm> forms = enumerate_reduced_indefinite(disc, cfg);
    ClassNumberResult res;
    res.discriminant = disc;
    res.form_count = forms.size();
    res.narrow_h = count_rho_cycles(forms);
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

int fundamental_unit_norm(std::int64_t disc) {
    check_indefinite_disc(disc);
    std::int64_t s = isqrt_i64(disc);
    std::int64_t b0 = (s % 2 == (disc % 2 + 2) % 2) ? s : s - 1;
    // Continued fraction of (b0 + sqrt(disc))/2; the surd is reduced, so the
    // expansion is purely periodic and the orbit of (P, Q) closes.
    std::int64_t p = b0, q = 2;
    std::uint64_t period = 0;
    const std::uint64_t cap = 200'000'000;
    do {
        std::int64_t a = (p + s) / q;
        std::int64_t pn = a * q - p;
        __int128 qn = (static_cast<__int128>(disc) - static_cast<__int128>(pn) * pn) / q;
        p = pn;
        q = static_cast<std::int64_t>(qn);
        ++period;
        if (period > cap) throw std::runtime_error("continued fraction period cap exceeded");
    } while (!(p == b0 && q == 2));
    return period % 2 == 0 ? 1 : -1;
}

ClassNumberResult real_class_number(std::int64_t disc, const FormEnumConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    ClassNumberResult res = narrow_class_number(disc, cfg);
    int norm = fundamental_unit_norm(disc);
    res.unit_norm = norm;
    res.h = norm == -1 ? res.narrow_h : res.narrow_h / 2;
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

ClassNumberResult imaginary_class_number(std::int64_t disc, const FormEnumConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    if (disc >= 0) throw std::invalid_argument("imaginary_class_number: discriminant must be negative");
    if (disc < -max_disc) throw std::invalid_argument("discriminant too large for form machinery");
    std::int64_t m4 = ((disc % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) throw std::invalid_argument("discriminant must be 0 or 1 mod 4");

    std::int64_t n = -disc;
    std::int64_t count = 0;
    std::vector<std::uint64_t> hits;
    for (std::int64_t b = (m4 == 0 ? 0 : 1); 3 * b * b <= n; b += 2) {
        std::uint64_t m = static_cast<std::uint64_t>((b * b + n) / 4);
        hits.clear();
        kernels::divisor_scan(m, static_cast<std::uint64_t>(std::max<std::int64_t>(b, 1)),
                              isqrt_u64(m), hits);
        for (std::uint64_t d : hits) {
            auto a = static_cast<std::int64_t>(d);
            auto c = static_cast<std::int64_t>(m / d);
            count += (b == 0 || a == b || a == c) ? 1 : 2;
        }
        if (static_cast<std::uint64_t>(count) > cfg.form_cap)
            throw FormCapExceeded("reduced form count exceeds configured cap");
    }
    ClassNumberResult res;
    res.discriminant = disc;
    res.narrow_h = count;
    res.h = count;
    res.form_count = static_cast<std::uint64_t>(count);
    res.elapsed_seconds = seconds_since(t0);
    return res;
}

ScholzResult scholz_reflection_check(std::int64_t d, const FactorBudget& budget,
                                     const FormEnumConfig& cfg) {
    if (d <= 1) throw std::invalid_argument("scholz_reflection_check: d must be > 1");
    ScholzResult res;
    res.d = d;
    QuadraticField mirror = field_from_radicand(mpz_class(-3) * d, budget);
    if (!mirror.normalization_complete)
        throw std::runtime_error("factoring budget exhausted while normalizing mirror radicand");
    if (!mirror.discriminant.fits_slong_p())
        throw std::invalid_argument("mirror discriminant too large");
    res.mirror_kernel = mirror.kernel;
    res.mirror_discriminant = mirror.discriminant.get_si();
    res.mirror_h = imaginary_class_number(res.mirror_discriminant, cfg).narrow_h;
    res.holds = res.mirror_h % 3 == 0;
    return res;
}

}  // namespace quadclass
