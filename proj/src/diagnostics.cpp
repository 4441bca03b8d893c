#include "clubsim/diagnostics.hpp"

#include <algorithm>

namespace clubsim {

void Diagnostics::add(std::string stage, std::string message) {
    entries_.push_back({step_, std::move(stage), std::move(message)});
}

std::size_t Diagnostics::count(const std::string& stage) const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [&](const Diagnostic& d) { return d.stage == stage; }));
}

}  // namespace clubsim
