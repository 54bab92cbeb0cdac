#include <algorithm>
#include <iomanip>
#include <iostream>

#include "multidet/acceptance.hpp"

int main() {
    using namespace multidet;
    auto results = run_acceptance({});
    for (const auto& c : results) {
        std::cout << (c.pass() ? "PASS" : "FAIL") << " " << c.number << " " << c.title << " (" << std::fixed
                  << std::setprecision(1) << c.seconds << " s)\n";
        if (!c.pass())
            for (const auto& it : c.report.sorted_items())
                if (it.verdict == Verdict::fail) std::cout << "    " << it.check << " @ " << it.location << " " << it.detail << "\n";
    }
    return std::all_of(results.begin(), results.end(), [](const auto& c) { return c.pass(); }) ? 0 : 1;
}
