#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qkahler/family.hpp"

namespace qk {

/// Everything a verification run depends on; the seed drives every
/// randomized suite through counter-based streams.
struct RunConfig {
    FamilySpec spec;
    // cutoffs
    int dim = 64;        // mono families: D = n_max + 1
    int k_max = 16;      // QHW, per mode
    int j_max2 = 6;      // Minkowski: doubled j cutoff
    int m_max = 6;       // Minkowski
    // tolerances
    double relation_tol = 1e-12;
    double eigen_tol = 1e-6;
    double geometry_tol = 1e-6;
    double rank_tol = 1e-10;
    // randomized suites
    std::uint64_t seed = 1;
    int theorem10_trials = 200;
    int oracle_expressions = 60;
    std::string output_path;  // report file; empty = stdout only

    TruncationScheme truncation() const;
    void validate_config() const;  // throws Error on bad values
};

struct CheckRecord {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string error;
    double wall_ms = 0.0;  // stdout summary only, never in the report file
};

struct VerificationReport {
    int schema_version = 1;
    RunConfig config;
    std::vector<CheckRecord> checks;
    bool overall_pass = true;

    /// Canonical report bytes: fixed key order, no timings (so identical
    /// config + seed gives identical bytes).
    std::string to_json() const;
    std::string human_summary() const;
};

/// Executes, in order: relation residuals, eigen-residual sweep, covariant
/// symbol checks, Kahler positivity, rewriter oracle suite, coherence
/// residual, the Theorem-10 order test, GNS equivalence, commutant dimension,
/// and (single-mode families) quadrature checks. Module errors become failed
/// checks, not crashes.
VerificationReport run_verify(const RunConfig& config);

} // namespace qk
