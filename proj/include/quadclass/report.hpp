#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadclass/config.hpp"
#include "quadclass/elliptic.hpp"
#include "quadclass/families.hpp"

namespace quadclass {

using Json = nlohmann::ordered_json;

struct VerificationRecord {
    std::string key;   // dedup identity ("family:A:3", "torsion:E2", ...)
    Json payload;      // complete record object, key order fixed
};

// Building blocks shared by the CLI and the tests.
Json class_number_json(const ClassNumberResult& r, bool with_timing);
Json km_certificate_json(const KMCertificate& c);
Json kishi_certificate_json(const KishiCertificate& c);
Json family_instance_json(const FamilyInstance& inst, bool with_timing);
Json point_json(const RationalPoint& p);

VerificationRecord make_record(std::string key, Json subject, Json body, bool with_timestamp);

std::string render_records(const std::vector<VerificationRecord>& records, OutputFormat fmt);

// json-lines persistence: one record per line, stable key order, idempotent
// append (records whose key already exists in the file are skipped). Also
// maintains a sidecar "<path>.cache" of completed squarefree decompositions
// harvested from the records, one "radicand<TAB>kernel<TAB>sqrt" line each.
void persist_records(const std::vector<VerificationRecord>& records, const std::string& path);

struct SquarefreeCache {
    std::map<mpz_class, std::pair<mpz_class, mpz_class>> entries;  // n -> (kernel, s)

    static SquarefreeCache load(const std::string& path);
    void save(const std::string& path) const;
    void store(const SquarefreeDecomposition& dec);
    std::optional<SquarefreeDecomposition> lookup(const mpz_class& n) const;
};

// Runs fn(0..count-1) on up to jobs workers; results must be written to
// index-addressed slots so the merge stays deterministic.
void run_parallel(unsigned jobs, std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace quadclass
