#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace modcurv {

struct CheckResult {
    std::string name;
    double max_err = 0;
    double tol = 0;
    bool pass() const { return max_err <= tol; }
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    double tol = -1;  // < 0 keeps each check's own tolerance
    int jobs = 1;
};

using CheckTask = std::function<CheckResult(const VerifyOptions&)>;

// suite ∈ {algebra, symbols, integrals, matrix, gauss-bonnet, all}
std::vector<CheckTask> verify_suite(const std::string& suite);
// Runs the tasks on at most opts.jobs workers; results keep task order.
std::vector<CheckResult> run_checks(const std::vector<CheckTask>& tasks, const VerifyOptions& opts);
std::string format_check(const CheckResult& r);

}  // namespace modcurv
