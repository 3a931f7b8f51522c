#pragma once

#include <string>
#include <vector>

namespace swreg {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the bundled-example verification suite: certificate checks against the
// published Q and G matrices, reproduction of the published V* basis and the
// structural conditions, Francis solvability, spot checks of the published V
// and F matrices, end-to-end regulation decay under the published and random
// switching signals, and the randomized oracle suites for the subspace and
// V* algorithms. Every tolerance is pinned in code.
std::vector<CriterionResult> run_acceptance();

std::string format_acceptance_table(const std::vector<CriterionResult>& results);

}  // namespace swreg
