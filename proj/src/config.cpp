#include "quadclass/config.hpp"

#include <cstdlib>
#include <thread>

namespace quadclass {

DirectCheckPolicy RunConfig::direct_policy() const {
    DirectCheckPolicy p;
    p.threshold = direct_check_threshold;
    p.forms = form_config();
    p.budget = factor_budget();
    return p;
}

unsigned RunConfig::effective_jobs() const {
    if (parallelism > 0) return parallelism;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

OutputFormat parse_output_format(const std::string& s) {
    if (s == "json-lines") return OutputFormat::json_lines;
    if (s == "csv") return OutputFormat::csv;
    if (s == "pretty") return OutputFormat::pretty;
    throw ConfigError("unknown output format: " + s);
}

namespace {

std::uint64_t parse_u64(const char* name, const std::string& value) {
    try {
        size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(std::string(name) + ": not a nonnegative integer: " + value);
    }
}

}  // namespace

RunConfig config_from_env() {
    RunConfig cfg;
    if (const char* v = std::getenv("QUADCLASS_FACTORING_BUDGET")) {
        cfg.factoring_budget = parse_u64("QUADCLASS_FACTORING_BUDGET", v);
        if (cfg.factoring_budget == 0) throw ConfigError("QUADCLASS_FACTORING_BUDGET must be positive");
    }
    if (const char* v = std::getenv("QUADCLASS_FORM_CAP")) {
        cfg.form_count_cap = parse_u64("QUADCLASS_FORM_CAP", v);
        if (cfg.form_count_cap == 0) throw ConfigError("QUADCLASS_FORM_CAP must be positive");
    }
    if (const char* v = std::getenv("QUADCLASS_THRESHOLD")) {
        try {
            cfg.direct_check_threshold = mpz_class(v);
        } catch (const std::exception&) {
            throw ConfigError(std::string("QUADCLASS_THRESHOLD: not an integer: ") + v);
        }
        if (cfg.direct_check_threshold < 1) throw ConfigError("QUADCLASS_THRESHOLD must be positive");
    }
    if (const char* v = std::getenv("QUADCLASS_JOBS")) {
        std::uint64_t jobs = parse_u64("QUADCLASS_JOBS", v);
        if (jobs == 0 || jobs > 4096) throw ConfigError("QUADCLASS_JOBS out of range");
        cfg.parallelism = static_cast<unsigned>(jobs);
    }
    if (const char* v = std::getenv("QUADCLASS_FORMAT")) {
        cfg.output_format = parse_output_format(v);
    }
    return cfg;
}

}  // namespace quadclass
