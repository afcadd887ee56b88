#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phardy {

/// One assertion inside a criterion: measured against target at a tolerance.
struct BatteryCheck {
    std::string name;
    double measured = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<BatteryCheck> checks;
    double seconds = 0.0;
    bool pass() const
    {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct BatteryOptions {
    std::uint64_t seed = 0x9e3779b97f4a7c15ull;
    int jobs = 1;              ///< parallel workers for the end-to-end solves
    std::string out_dir;       ///< when set, solved profiles land here as CSV
    std::string kernel_cache;  ///< optional on-disk kernel cache directory
    int grid_nodes = 2048;
    std::int64_t mc_samples = 1000000;
    /// Exponent-target overrides for the asymptotics checks (normally unset;
    /// injecting wrong values must flip the suite exit code).
    std::optional<double> override_gamma_near;
    std::optional<double> override_gamma_far;
};

/// The desk-scale verification battery: exponent reproduction, ordering
/// invariants, convolution cross-validation against the Monte-Carlo oracle,
/// the Riesz decay laws, the closed-form end-to-end solve, sharp-asymptotics
/// reproduction on solved profiles, doubling estimates, and the invariance
/// suite.  Deterministic given (options, seed).
std::vector<CriterionResult> run_battery(const BatteryOptions& opts);

bool battery_passed(const std::vector<CriterionResult>& results);

/// CSV rows (criterion, check, measured, target, tolerance, pass).
void write_battery_csv(const std::string& path, const std::vector<CriterionResult>& results);

/// One "[PASS]/[FAIL] criterion k: title (t s)" line per criterion.
void print_battery_summary(const std::vector<CriterionResult>& results);

} // namespace phardy
