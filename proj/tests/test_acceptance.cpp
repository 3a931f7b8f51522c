// Acceptance suite for the bundled example: runs every criterion and prints
// one pass/fail line each. The same checks back the `reproduce-paper` CLI
// subcommand.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <chrono>
#include <cstdio>

#include "doctest.h"
#include "swreg/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    const auto t0 = std::chrono::steady_clock::now();
    auto results = swreg::run_acceptance();
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::fputs(swreg::format_acceptance_table(results).c_str(), stdout);
    std::printf("total: %.2f s\n", total);

    REQUIRE(results.size() == 9);
    for (const auto& r : results) {
        INFO(r.index, ": ", r.name, " -- ", r.detail);
        CHECK(r.passed);
    }
    CHECK(total < 60.0);
}
