#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace clubsim {

/// One failed check: where it happened and what was wrong.
struct ValidationIssue {
    std::string location;  // e.g. "region 3 (india)" or "row 5"
    std::string field;
    std::string message;
};

class ValidationReport {
public:
    void add(std::string location, std::string field, std::string message);
    void merge(const ValidationReport& other);

    bool ok() const { return issues_.empty(); }
    const std::vector<ValidationIssue>& issues() const { return issues_; }
    std::string to_string() const;

private:
    std::vector<ValidationIssue> issues_;
};

/// Bad input: calibration, config, or a state that violates an invariant.
/// The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what);
    explicit ValidationError(ValidationReport report);

    const ValidationReport& report() const { return report_; }

private:
    ValidationReport report_;
};

/// Failure while running or writing results (exit code 2).
class RuntimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace clubsim
