#include "quadclass/report.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "quadclass/version.hpp"

namespace quadclass {

namespace {

std::string now_utc_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string esc_csv(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

Json class_number_json(const ClassNumberResult& r, bool with_timing) {
    Json j;
    j["discriminant"] = std::to_string(r.discriminant);
    j["narrow_h"] = r.narrow_h;
    j["divisible_by_3"] = (r.narrow_h % 3 == 0);
    if (r.h) j["h"] = *r.h;
    if (r.unit_norm) j["unit_norm"] = *r.unit_norm;
    j["form_count"] = r.form_count;
    if (with_timing) j["elapsed_seconds"] = r.elapsed_seconds;
    return j;
}

Json km_certificate_json(const KMCertificate& c) {
    Json j;
    j["type"] = "km";
    j["u"] = c.u.get_str();
    j["v"] = c.v.get_str();
    j["cond_a_coprime"] = c.cond_a;
    j["cond_b_irreducible"] = c.cond_b;
    j["cond_c_nonsquare_disc"] = c.cond_c;
    j["d_branch"] = d_branch_name(c.d_branch);
    j["discriminant"] = c.discriminant.get_str();
    j["field_radicand"] = c.field_radicand.get_str();
    j["field_radicand_complete"] = c.field_radicand_complete;
    j["valid"] = c.valid;
    j["notes"] = c.notes;
    return j;
}

Json kishi_certificate_json(const KishiCertificate& c) {
    Json j;
    j["type"] = "kishi";
    j["element"] = Json{{"a", c.element.a.get_str()},
                        {"b", c.element.b.get_str()},
                        {"m", c.element.m.get_str()}};
    j["d"] = c.d.get_str();
    j["trace"] = c.trace.get_str();
    j["norm"] = c.norm.get_str();
    if (c.norm_cube_root) j["norm_cube_root"] = c.norm_cube_root->get_str();
    else j["norm_cube_root"] = nullptr;
    j["norm_is_cube"] = c.norm_is_cube;
    j["gcd_ok"] = c.gcd_ok;
    j["irreducible"] = c.irreducible;
    j["ramification_testable"] = c.ramification_testable;
    j["not_totally_ramified_at_3"] = c.not_totally_ramified_at_3;
    j["valid"] = c.valid;
    j["target_radicand"] = c.target_radicand.get_str();
    j["notes"] = c.notes;
    return j;
}

Json family_instance_json(const FamilyInstance& inst, bool with_timing) {
    Json j;
    j["family"] = std::string(1, inst.family_id);
    j["parameter"] = inst.parameter.get_str();
    j["radicand"] = inst.radicand.get_str();
    Json prov = Json::array({"certified-by-theorem"});
    if (inst.direct_check) prov.push_back("directly-computed");
    j["provenance"] = prov;
    if (inst.km) j["certificate"] = km_certificate_json(*inst.km);
    if (inst.kishi) j["certificate"] = kishi_certificate_json(*inst.kishi);
    if (inst.direct_check) j["class_number"] = class_number_json(*inst.direct_check, with_timing);
    if (inst.direct_skip_reason) j["skip_reason"] = *inst.direct_skip_reason;
    return j;
}

Json point_json(const RationalPoint& p) {
    if (p.infinity) return Json{{"infinity", true}};
    return Json{{"x", p.x.get_str()}, {"y", p.y.get_str()}};
}

VerificationRecord make_record(std::string key, Json subject, Json body, bool with_timestamp) {
    Json j;
    j["schema"] = std::string(record_schema);
    j["key"] = key;
    j["subject"] = std::move(subject);
    for (auto& [k, v] : body.items()) j[k] = v;
    j["toolkit_version"] = std::string(toolkit_version);
    if (with_timestamp) j["timestamp"] = now_utc_iso8601();
    return {std::move(key), std::move(j)};
}

std::string render_records(const std::vector<VerificationRecord>& records, OutputFormat fmt) {
    std::ostringstream out;
    switch (fmt) {
        case OutputFormat::json_lines:
            for (const auto& r : records) out << r.payload.dump() << '\n';
            break;
        case OutputFormat::csv: {
            out << "key,kind,valid,narrow_h,divisible_by_3,skip_reason\n";
            for (const auto& r : records) {
                const Json& p = r.payload;
                std::string kind = p.contains("subject") && p["subject"].contains("kind")
                                       ? p["subject"]["kind"].get<std::string>()
                                       : "";
                std::string valid;
                if (p.contains("certificate") && p["certificate"].contains("valid"))
                    valid = p["certificate"]["valid"].get<bool>() ? "true" : "false";
                std::string nh, div3;
                if (p.contains("class_number")) {
                    nh = std::to_string(p["class_number"]["narrow_h"].get<long long>());
                    div3 = p["class_number"]["divisible_by_3"].get<bool>() ? "true" : "false";
                }
                std::string skip = p.contains("skip_reason") ? p["skip_reason"].get<std::string>() : "";
                out << esc_csv(r.key) << ',' << esc_csv(kind) << ',' << valid << ',' << nh << ','
                    << div3 << ',' << esc_csv(skip) << '\n';
            }
            break;
        }
        case OutputFormat::pretty:
            for (const auto& r : records) {
                out << r.key;
                const Json& p = r.payload;
                if (p.contains("certificate"))
                    out << "  certificate="
                        << (p["certificate"]["valid"].get<bool>() ? "valid" : "INVALID");
                if (p.contains("class_number")) {
                    const Json& cn = p["class_number"];
                    out << "  narrow_h=" << cn["narrow_h"].get<long long>() << "  3|h: "
                        << (cn["divisible_by_3"].get<bool>() ? "yes" : "no");
                }
                if (p.contains("skip_reason"))
                    out << "  skipped: " << p["skip_reason"].get<std::string>();
                if (p.contains("verdict")) out << "  verdict=" << p["verdict"].get<std::string>();
                out << '\n';
            }
            break;
    }
    return out.str();
}

namespace {

// Pull every completed (radicand, kernel, sqrt) triple out of a record.
void harvest_decompositions(const Json& node, SquarefreeCache& cache) {
    if (node.is_object()) {
        if (node.contains("radicand") && node.contains("kernel") &&
            node.contains("square_root_part") && node.value("complete", false)) {
            SquarefreeDecomposition dec;
            dec.n = mpz_class(node["radicand"].get<std::string>());
            dec.kernel = mpz_class(node["kernel"].get<std::string>());
            dec.square_root_part = mpz_class(node["square_root_part"].get<std::string>());
            dec.complete = true;
            cache.store(dec);
        }
        for (const auto& [k, v] : node.items()) harvest_decompositions(v, cache);
    } else if (node.is_array()) {
        for (const auto& v : node) harvest_decompositions(v, cache);
    }
}

}  // namespace

void persist_records(const std::vector<VerificationRecord>& records, const std::string& path) {
    std::set<std::string> seen;
    std::vector<std::string> lines;
    {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            lines.push_back(line);
            try {
                Json j = Json::parse(line);
                if (j.contains("key")) seen.insert(j["key"].get<std::string>());
            } catch (const Json::parse_error&) {
                // Keep foreign lines verbatim; they simply never dedup.
            }
        }
    }
    for (const auto& r : records) {
        if (seen.count(r.key)) continue;
        seen.insert(r.key);
        lines.push_back(r.payload.dump());
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("persist_records: cannot write " + path);
    for (const auto& l : lines) out << l << '\n';
    out.flush();
    if (!out) throw std::runtime_error("persist_records: write failed for " + path);

    SquarefreeCache cache = SquarefreeCache::load(path + ".cache");
    for (const auto& r : records) harvest_decompositions(r.payload, cache);
    cache.save(path + ".cache");
}

SquarefreeCache SquarefreeCache::load(const std::string& path) {
    SquarefreeCache c;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string n, kernel, s;
        if (std::getline(ss, n, '\t') && std::getline(ss, kernel, '\t') && std::getline(ss, s)) {
            try {
                c.entries[mpz_class(n)] = {mpz_class(kernel), mpz_class(s)};
            } catch (const std::exception&) {
                // skip malformed lines
            }
        }
    }
    return c;
}

void SquarefreeCache::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("SquarefreeCache: cannot write " + path);
    for (const auto& [n, kv] : entries)
        out << n.get_str() << '\t' << kv.first.get_str() << '\t' << kv.second.get_str() << '\n';
}

void SquarefreeCache::store(const SquarefreeDecomposition& dec) {
    if (!dec.complete) return;
    entries[dec.n] = {dec.kernel, dec.square_root_part};
}

std::optional<SquarefreeDecomposition> SquarefreeCache::lookup(const mpz_class& n) const {
    auto it = entries.find(n);
    if (it == entries.end()) return std::nullopt;
    SquarefreeDecomposition dec;
    dec.n = n;
    dec.kernel = it->second.first;
    dec.square_root_part = it->second.second;
    dec.complete = true;
    return dec;
}

void run_parallel(unsigned jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    unsigned workers = std::min<std::size_t>(jobs == 0 ? 1 : jobs, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace quadclass
