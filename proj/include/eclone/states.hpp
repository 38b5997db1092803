#pragma once

#include <string_view>

#include "eclone/qmath.hpp"

namespace eclone::states {

// Werner-form clone 4/9 |Phi+><Phi+| + 5/36 I of the symmetric cloner.
DensityMatrix ideal_clone(const Labels& labels = {"1", "2"});

// Two-qubit states by name: phi+, psi+, psi-, sigma (the ideal clone),
// mixed (I/4) and schmidt:<theta> with theta in radians.
// PreconditionError for anything else.
DensityMatrix named(std::string_view name, const Labels& labels = {"1", "2"});

}  // namespace eclone::states
