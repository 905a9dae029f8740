#pragma once

#include "helm/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace helm {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

inline constexpr int criterion_count = 12;

/// Seeds of the alternating-spec sweep behind the beta-bound criterion.
inline constexpr std::uint64_t beta_sweep_seed_base = 4000;

/// Runs acceptance criterion `id` (1..12); never throws, failures are reported in the result.
CriterionResult run_criterion(int id);

/// Criterion ids of a named suite: oracle, bounds, figures, specfun, whisper, all.
/// Throws Error(validation) for an unknown name.
std::vector<int> suite_criteria(const std::string& suite);

std::string criteria_json(const std::string& suite, const std::vector<CriterionResult>& results);

/// Random spec used by the oracle criteria: d in {1,3}, m <= 5 for d = 3, n in 1..n_max,
/// omega in [1, 50], speeds in [0.5, 4], sorted uniform jump points.
ProblemSpec random_oracle_spec(std::uint64_t seed, int n_max = 20);

} // namespace helm
