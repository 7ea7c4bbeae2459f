#include "quadclass/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "quadclass/config.hpp"
#include "quadclass/elliptic.hpp"
#include "quadclass/families.hpp"
#include "quadclass/field.hpp"
#include "quadclass/forms.hpp"
#include "quadclass/report.hpp"

namespace quadclass {

namespace {

mpz_class parse_mpz(const std::string& s, const char* what) {
    mpz_class v;
    if (s.empty() || mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
        throw ConfigError(std::string(what) + ": expected a base-10 integer, got '" + s + "'");
    return v;
}

SquarefreeDecomposition decompose_cached(const std::optional<SquarefreeCache>& cache,
                                         const mpz_class& n, const FactorBudget& budget) {
    if (cache)
        if (auto hit = cache->lookup(n)) return *hit;
    return squarefree_decompose(n, budget);
}

Json field_json(const SquarefreeDecomposition& dec) {
    Json j;
    j["radicand"] = dec.n.get_str();
    j["kernel"] = dec.kernel.get_str();
    j["square_root_part"] = dec.square_root_part.get_str();
    j["complete"] = dec.complete;
    if (dec.complete && dec.n != 0 &&
        !(dec.n > 0 && mpz_perfect_square_p(dec.n.get_mpz_t())))
        j["discriminant"] = field_from_decomposition(dec).discriminant.get_str();
    return j;
}

struct CommandContext {
    RunConfig cfg;
    std::optional<SquarefreeCache> cache;
    std::vector<VerificationRecord> records;

    bool stamps() const { return !cfg.suppress_timestamps; }

    void add(std::string key, Json subject, Json body) {
        records.push_back(make_record(std::move(key), std::move(subject), std::move(body),
                                      stamps()));
    }
};

// Shared by verify-family and verify-quadruple: squarefree data plus the
// optional direct class-number computation, folded into the instance body.
Json instance_body(CommandContext& ctx, FamilyInstance& inst) {
    SquarefreeDecomposition dec =
        decompose_cached(ctx.cache, inst.radicand, ctx.cfg.factor_budget());
    QuadraticField field = field_from_decomposition(dec);
    attach_direct_check(inst, ctx.cfg.direct_policy(), &field);
    Json body = family_instance_json(inst, ctx.stamps());
    body["field"] = field_json(dec);
    return body;
}

int run_verify_family(CommandContext& ctx, const std::string& family_name,
                      const mpz_class& from, const mpz_class& to) {
    if (from < 1) throw ConfigError("verify-family: --from must be >= 1");
    if (to < from) throw ConfigError("verify-family: --to must be >= --from");
    mpz_class span = to - from + 1;
    if (span > 100000) throw ConfigError("verify-family: range wider than 100000 parameters");
    std::size_t n = span.get_ui();
    char id = family_name[0];

    std::vector<FamilyInstance> insts(n);
    std::vector<Json> bodies(n);
    run_parallel(ctx.cfg.effective_jobs(), n, [&](std::size_t i) {
        mpz_class p = from + static_cast<unsigned long>(i);
        insts[i] = family_instance(id, p, ctx.cfg.factor_budget());
        bodies[i] = instance_body(ctx, insts[i]);
    });

    int rc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const mpz_class p = from + static_cast<unsigned long>(i);
        Json subject{{"kind", "family-instance"},
                     {"family", family_name},
                     {"parameter", p.get_str()}};
        ctx.add("family:" + family_name + ":" + p.get_str(), std::move(subject),
                std::move(bodies[i]));
        if (!insts[i].certificate_valid()) rc = 2;
    }
    return rc;
}

int run_verify_quadruple(CommandContext& ctx, const mpz_class& k) {
    QuadrupleReport rep = quadruple(k, ctx.cfg.factor_budget());
    std::size_t n = rep.components.size();
    std::vector<Json> bodies(n);
    run_parallel(ctx.cfg.effective_jobs(), n,
                 [&](std::size_t i) { bodies[i] = instance_body(ctx, rep.components[i]); });

    Json radicands = Json::array();
    Json kernels = Json::array();
    Json component_keys = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const FamilyInstance& inst = rep.components[i];
        std::string key = "quadruple:" + k.get_str() + ":component:" + std::to_string(i);
        Json subject{{"kind", "family-instance"},
                     {"family", std::string(1, inst.family_id)},
                     {"parameter", inst.parameter.get_str()},
                     {"quadruple_k", k.get_str()},
                     {"component", i}};
        radicands.push_back(inst.radicand.get_str());
        const Json& f = bodies[i]["field"];
        if (f.value("complete", false)) kernels.push_back(f["kernel"]);
        else kernels.push_back(nullptr);
        component_keys.push_back(key);
        ctx.add(std::move(key), std::move(subject), std::move(bodies[i]));
    }

    Json summary;
    summary["k"] = k.get_str();
    summary["D"] = rep.D.get_str();
    summary["radicands"] = std::move(radicands);
    summary["kernels"] = std::move(kernels);
    summary["all_valid"] = rep.all_valid;
    summary["component_keys"] = std::move(component_keys);
    ctx.add("quadruple:" + k.get_str(), Json{{"kind", "quadruple"}, {"k", k.get_str()}},
            std::move(summary));
    return rep.all_valid ? 0 : 2;
}

int run_classnumber(CommandContext& ctx, const mpz_class& radicand, bool narrow) {
    SquarefreeDecomposition dec =
        decompose_cached(ctx.cache, radicand, ctx.cfg.factor_budget());
    QuadraticField field = field_from_decomposition(dec);

    Json body;
    body["field"] = field_json(dec);
    std::string key = "classnumber:" + radicand.get_str() + (narrow ? ":narrow" : "");
    Json subject{{"kind", "classnumber"}, {"radicand", radicand.get_str()}, {"narrow", narrow}};

    if (!dec.complete) {
        body["skip_reason"] = "radicand not factored within budget; fundamental discriminant "
                              "unknown";
        ctx.add(std::move(key), std::move(subject), std::move(body));
        return 0;
    }
    if (!field.discriminant.fits_slong_p() ||
        abs(field.discriminant) > mpz_class("4000000000000000000")) {
        body["skip_reason"] = "fundamental discriminant exceeds machine range for form "
                              "enumeration";
        ctx.add(std::move(key), std::move(subject), std::move(body));
        return 0;
    }

    std::int64_t disc = field.discriminant.get_si();
    try {
        ClassNumberResult r;
        if (!field.real) {
            r = imaginary_class_number(disc, ctx.cfg.form_config());
            if (narrow)
                body["note"] = "narrow and wide class numbers coincide for imaginary fields";
        } else if (narrow) {
            r = narrow_class_number(disc, ctx.cfg.form_config());
        } else {
            r = real_class_number(disc, ctx.cfg.form_config());
        }
        body["class_number"] = class_number_json(r, ctx.stamps());
    } catch (const FormCapExceeded& e) {
        body["skip_reason"] = std::string("enumeration aborted: ") + e.what();
    }
    ctx.add(std::move(key), std::move(subject), std::move(body));
    return 0;
}

int run_scholz(CommandContext& ctx, std::int64_t d) {
    if (d < 2) throw ConfigError("scholz-check: --d must be >= 2");
    mpz_class dz(static_cast<long>(d));
    SquarefreeDecomposition dec = decompose_cached(ctx.cache, dz, ctx.cfg.factor_budget());
    QuadraticField field = field_from_decomposition(dec);  // rejects squares

    Json body;
    body["d"] = std::to_string(d);
    Json premise;
    premise["field"] = field_json(dec);

    std::string key = "scholz:" + std::to_string(d);
    Json subject{{"kind", "scholz"}, {"d", std::to_string(d)}};

    if (!dec.complete || !field.discriminant.fits_slong_p()) {
        body["premise"] = std::move(premise);
        body["skip_reason"] = "cannot establish the premise: fundamental discriminant of the "
                              "real field is unavailable";
        ctx.add(std::move(key), std::move(subject), std::move(body));
        return 0;
    }

    ClassNumberResult real_h = narrow_class_number(field.discriminant.get_si(),
                                                   ctx.cfg.form_config());
    premise["class_number"] = class_number_json(real_h, ctx.stamps());
    bool premise_holds = real_h.narrow_h % 3 == 0;
    premise["divisible_by_3"] = premise_holds;
    body["premise"] = std::move(premise);

    if (!premise_holds) {
        body["verdict"] = "vacuous";
        body["note"] = "3 does not divide the narrow class number of the real field, so the "
                       "reflection statement asserts nothing here";
        ctx.add(std::move(key), std::move(subject), std::move(body));
        return 0;
    }

    int rc = 0;
    try {
        ScholzResult res = scholz_reflection_check(d, ctx.cfg.factor_budget(),
                                                   ctx.cfg.form_config());
        Json mirror;
        mirror["radicand"] = mpz_class(mpz_class(-3) * d).get_str();
        mirror["kernel"] = res.mirror_kernel.get_str();
        mirror["discriminant"] = std::to_string(res.mirror_discriminant);
        mirror["h"] = res.mirror_h;
        mirror["divisible_by_3"] = res.holds;
        body["mirror"] = std::move(mirror);
        body["verdict"] = res.holds ? "holds" : "violated";
        if (!res.holds) {
            body["note"] = "reflection inequality failed; this contradicts the theorem and "
                           "indicates a computation error";
            rc = 2;
        }
    } catch (const std::runtime_error& e) {
        body["skip_reason"] = std::string("mirror side unavailable: ") + e.what();
        body["verdict"] = "undetermined";
    }
    ctx.add(std::move(key), std::move(subject), std::move(body));
    return rc;
}

bool rational_square(const mpq_class& q, mpq_class& root) {
    if (q < 0) return false;
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    root = mpq_class(rn) / mpq_class(rd);
    return true;
}

int run_torsion(CommandContext& ctx, const std::string& name) {
    CubicCurve c = curve_by_name(name);
    auto [w, scale] = to_weierstrass(c);

    Json body;
    body["curve"] = Json{{"name", name},
                         {"model", Json{{"a3", c.a3.get_str()},
                                        {"a2", c.a2.get_str()},
                                        {"a1", c.a1.get_str()},
                                        {"a0", c.a0.get_str()}}}};
    body["weierstrass"] = Json{{"A", w.A.get_str()},
                               {"B", w.B.get_str()},
                               {"C", w.C.get_str()},
                               {"scale", scale.get_str()}};

    Json root_log = Json::array();
    for (const mpq_class& x : three_division_roots(w)) {
        mpq_class fx = ((x + w.A) * x + w.B) * x + w.C;
        mpq_class y;
        bool sq = rational_square(fx, y);
        Json e{{"x", x.get_str()}, {"curve_value", fx.get_str()}, {"value_is_square", sq}};
        if (sq) e["y"] = y.get_str();
        root_log.push_back(std::move(e));
    }
    body["three_division_roots"] = std::move(root_log);

    std::vector<RationalPoint> pts3 = three_torsion_points(w);
    Json pts_json = Json::array();
    for (const auto& p : pts3) {
        Json e;
        e["weierstrass"] = point_json(p);
        e["cubic_model"] = point_json(map_from_weierstrass(scale, p));
        pts_json.push_back(std::move(e));
    }
    body["three_torsion"] = std::move(pts_json);

    NagellLutzResult nl = nagell_lutz_scan(w, ctx.cfg.factor_budget());
    Json nl_json;
    nl_json["complete"] = nl.complete;
    if (!nl.note.empty()) nl_json["note"] = nl.note;
    Json nl_points = Json::array();
    std::vector<RationalPoint> nl_order3;
    for (const auto& [p, order] : nl.points) {
        nl_points.push_back(Json{{"point", point_json(p)}, {"order", order}});
        if (order == 3) nl_order3.push_back(p);
    }
    nl_json["points"] = std::move(nl_points);
    body["nagell_lutz"] = std::move(nl_json);

    if (nl.complete && nl_order3 != pts3)
        throw std::logic_error("torsion: division-polynomial roots and torsion scan disagree "
                               "on the order-3 points");
    body["oracles_agree"] = nl.complete ? Json(nl_order3 == pts3) : Json(nullptr);
    body["verdict"] = pts3.empty() ? "no rational 3-torsion" : "rational 3-torsion present";

    ctx.add("torsion:" + name, Json{{"kind", "torsion"}, {"curve", name}}, std::move(body));
    return 0;
}

int run_scan_distinct(CommandContext& ctx, const mpz_class& from, const mpz_class& to) {
    if (from < 1) throw ConfigError("scan-distinct: --from must be >= 1");
    if (to < from) throw ConfigError("scan-distinct: --to must be >= --from");
    if (to - from + 1 > 100000) throw ConfigError("scan-distinct: range wider than 100000");

    DistinctnessReport rep = kernel_distinctness_scan(from, to, ctx.cfg.factor_budget());
    Json entries = Json::array();
    for (const auto& e : rep.entries) {
        Json j{{"k", e.k.get_str()}, {"radicand", e.radicand.get_str()}};
        if (e.kernel) j["kernel"] = e.kernel->get_str();
        else j["kernel"] = nullptr;
        entries.push_back(std::move(j));
    }
    Json body;
    body["from"] = from.get_str();
    body["to"] = to.get_str();
    body["entries"] = std::move(entries);
    Json incomplete = Json::array();
    for (const auto& k : rep.incomplete) incomplete.push_back(k.get_str());
    body["incomplete"] = std::move(incomplete);
    Json collisions = Json::array();
    for (const auto& [a, b] : rep.collisions)
        collisions.push_back(Json::array({a.get_str(), b.get_str()}));
    body["collisions"] = std::move(collisions);
    body["all_distinct"] = rep.collisions.empty();
    body["verdict"] = rep.collisions.empty()
                          ? (rep.incomplete.empty() ? "all kernels distinct"
                                                    : "no collision among completed kernels")
                          : "kernel collision found";

    std::string range = from.get_str() + ":" + to.get_str();
    ctx.add("distinct:" + range,
            Json{{"kind", "distinctness-scan"}, {"from", from.get_str()}, {"to", to.get_str()}},
            std::move(body));
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CommandContext ctx;
    try {
        ctx.cfg = config_from_env();
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    }

    CLI::App app{"verifiable certificates for 3-divisibility of quadratic class numbers",
                 "quadclass"};
    app.require_subcommand(1);

    std::string format_name;
    auto* format_opt =
        app.add_option("--format", format_name, "output format: json-lines, csv or pretty")
            ->check(CLI::IsMember({"json-lines", "csv", "pretty"}));
    std::string output_path;
    auto* output_opt =
        app.add_option("--output", output_path, "append records to this json-lines file");
    app.add_flag("--no-timestamps", ctx.cfg.suppress_timestamps,
                 "omit timestamps and timings from records");
    app.add_option("--jobs", ctx.cfg.parallelism, "worker threads (0 = hardware concurrency)");
    app.add_option("--factoring-budget", ctx.cfg.factoring_budget,
                   "trial-division bound for factoring work");
    app.add_option("--form-cap", ctx.cfg.form_count_cap,
                   "abort form enumeration past this many forms");
    std::string threshold_str;
    auto* threshold_opt = app.add_option("--threshold", threshold_str,
                                         "max |discriminant| for direct class-number checks");

    auto* fam = app.add_subcommand("verify-family", "certify one family over a parameter range");
    fam->fallthrough();
    std::string family_name;
    fam->add_option("family", family_name, "family id: A, B or C")
        ->required()
        ->check(CLI::IsMember({"A", "B", "C"}));
    std::string fam_from{"1"}, fam_to;
    fam->add_option("--from", fam_from, "first parameter (default 1)");
    auto* fam_to_opt = fam->add_option("--to", fam_to, "last parameter (default --from)");

    auto* quad = app.add_subcommand("verify-quadruple",
                                    "certify the four linked fields grown from one parameter");
    quad->fallthrough();
    std::string quad_k;
    quad->add_option("--k", quad_k, "seed parameter")->required();

    auto* cls = app.add_subcommand("classnumber", "compute a class number by form reduction");
    cls->fallthrough();
    std::string cls_radicand;
    cls->add_option("--radicand", cls_radicand, "field radicand (any nonzero nonsquare)")
        ->required();
    bool cls_narrow = false;
    cls->add_flag("--narrow", cls_narrow, "report the narrow class number");

    auto* sch = app.add_subcommand("scholz-check", "test the reflection inequality for one d");
    sch->fallthrough();
    std::int64_t sch_d = 0;
    sch->add_option("--d", sch_d, "positive nonsquare radicand")->required();

    auto* tor = app.add_subcommand("torsion", "rational 3-torsion analysis of a named curve");
    tor->fallthrough();
    std::string tor_curve;
    tor->add_option("--curve", tor_curve, "curve name")
        ->required()
        ->check(CLI::IsMember({"E1", "E2", "E3"}));

    auto* scan = app.add_subcommand("scan-distinct",
                                    "check family C kernels for pairwise distinctness");
    scan->fallthrough();
    std::string scan_from{"1"}, scan_to;
    scan->add_option("--from", scan_from, "first parameter (default 1)");
    scan->add_option("--to", scan_to, "last parameter")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    int rc = 0;
    try {
        if (format_opt->count()) ctx.cfg.output_format = parse_output_format(format_name);
        if (output_opt->count()) ctx.cfg.output_path = output_path;
        if (threshold_opt->count())
            ctx.cfg.direct_check_threshold = parse_mpz(threshold_str, "--threshold");
        if (ctx.cfg.output_path)
            ctx.cache = SquarefreeCache::load(*ctx.cfg.output_path + ".cache");

        if (fam->parsed()) {
            mpz_class from = parse_mpz(fam_from, "--from");
            mpz_class to = fam_to_opt->count() ? parse_mpz(fam_to, "--to") : from;
            rc = run_verify_family(ctx, family_name, from, to);
        } else if (quad->parsed()) {
            rc = run_verify_quadruple(ctx, parse_mpz(quad_k, "--k"));
        } else if (cls->parsed()) {
            rc = run_classnumber(ctx, parse_mpz(cls_radicand, "--radicand"), cls_narrow);
        } else if (sch->parsed()) {
            rc = run_scholz(ctx, sch_d);
        } else if (tor->parsed()) {
            rc = run_torsion(ctx, tor_curve);
        } else if (scan->parsed()) {
            rc = run_scan_distinct(ctx, parse_mpz(scan_from, "--from"),
                                   parse_mpz(scan_to, "--to"));
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::cout << render_records(ctx.records, ctx.cfg.output_format);
    if (ctx.cfg.output_path) {
        try {
            persist_records(ctx.records, *ctx.cfg.output_path);
        } catch (const std::runtime_error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return rc;
}

}  // namespace quadclass
