#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zslice/transfer_oracle.hpp"

namespace zslice::inv {

enum class Comparison {
    AtMost,     // passes when measured <= threshold
    Above,      // passes when measured > threshold
    Report      // informational, always passes
};

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    Comparison comparison = Comparison::AtMost;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool all_passed() const;
};

struct SuiteOptions {
    lattice::LatticeSpec4D lattice{};
    std::uint64_t seed = 42;
    int configurations = 20;
};

const std::vector<std::string>& suite_names();

/// Runs "algebra", "fieldops", "evolution", "oracle" or "all".
SuiteReport run_suite(const std::string& name, const SuiteOptions& opts = {});

SuiteReport algebra_suite();
SuiteReport fieldops_suite();
SuiteReport evolution_suite(std::uint64_t seed = 42);
SuiteReport oracle_suite(const SuiteOptions& opts = {});

/// Largest pairwise relative deviation among direct, T-sliced and Z-sliced
/// amplitudes over `configurations` seeded boundaries.
struct OracleAgreement {
    double direct_vs_t = 0.0;
    double direct_vs_z = 0.0;
    double t_vs_z = 0.0;
};
OracleAgreement oracle_agreement(const lattice::LatticeSpec4D& spec, std::uint64_t seed, int configurations);

std::string to_string(Comparison c);

}  // namespace zslice::inv
