#pragma once

#include <string>
#include <vector>

namespace clubsim {

/// Non-fatal event worth surfacing in the trajectory: a dropped proposal, a
/// clamped group choice, a consumption floor hit.
struct Diagnostic {
    int step = -1;
    std::string stage;
    std::string message;
};

class Diagnostics {
public:
    void set_step(int step) { step_ = step; }
    void add(std::string stage, std::string message);

    const std::vector<Diagnostic>& entries() const { return entries_; }
    std::size_t count(const std::string& stage) const;
    bool empty() const { return entries_.empty(); }

private:
    int step_ = -1;
    std::vector<Diagnostic> entries_;
};

/// Records into `diags` when it is non-null.
inline void note(Diagnostics* diags, std::string stage, std::string message) {
    if (diags != nullptr) diags->add(std::move(stage), std::move(message));
}

}  // namespace clubsim
