#pragma once

#include "core/beta.hpp"

#include <string>
#include <vector>

namespace betaforms {

struct VerifyRow {
    std::string id;
    std::string expected;
    std::string computed;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass = true;
};

// Runs the reproduction fixtures under <fixtures_dir>/paper/*.json whose file
// stem matches the scope ("all" runs everything). Expected values live in the
// fixture data, never in code.
VerifyReport verify_paper(BetaEngine& engine, Registry& reg, const std::string& fixtures_dir,
                          const std::string& scope);

std::string verify_table(const VerifyReport& rep);
std::string verify_json(const VerifyReport& rep);

} // namespace betaforms
