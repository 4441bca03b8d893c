#include "clubsim/error.hpp"

#include <utility>

namespace clubsim {

void ValidationReport::add(std::string location, std::string field, std::string message) {
    issues_.push_back({std::move(location), std::move(field), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const ValidationIssue& issue : issues_) {
        if (!out.empty()) out += '\n';
        out += issue.location;
        if (!issue.field.empty()) {
            const bool tabular = issue.location.starts_with("row ") || issue.location == "header";
            out += tabular ? ", column " : ", field ";
            out += issue.field;
        }
        out += ": ";
        out += issue.message;
    }
    return out;
}

ValidationError::ValidationError(const std::string& what) : std::runtime_error(what) {
    report_.add("input", "", what);
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(report.to_string()), report_(std::move(report)) {}

}  // namespace clubsim
