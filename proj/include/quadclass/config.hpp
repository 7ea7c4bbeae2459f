#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "quadclass/families.hpp"
#include "quadclass/forms.hpp"
#include "quadclass/integers.hpp"

namespace quadclass {

enum class OutputFormat { json_lines, csv, pretty };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t factoring_budget = 1'000'000;
    std::uint64_t form_count_cap = 10'000'000;
    mpz_class direct_check_threshold = 1'000'000'000;
    unsigned parallelism = 0;  // 0: pick hardware_concurrency at use
    OutputFormat output_format = OutputFormat::json_lines;
    bool suppress_timestamps = false;
    std::optional<std::string> output_path;

    FactorBudget factor_budget() const { return FactorBudget::from_effort(factoring_budget); }
    FormEnumConfig form_config() const { return {form_count_cap}; }
    DirectCheckPolicy direct_policy() const;
    unsigned effective_jobs() const;
};

OutputFormat parse_output_format(const std::string& s);

// Defaults overlaid with QUADCLASS_FACTORING_BUDGET, QUADCLASS_FORM_CAP,
// QUADCLASS_THRESHOLD, QUADCLASS_JOBS and QUADCLASS_FORMAT. Malformed
// values raise ConfigError.
RunConfig config_from_env();

}  // namespace quadclass
