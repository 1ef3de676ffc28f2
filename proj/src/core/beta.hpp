#pragma once

#include "core/closure.hpp"
#include "core/pullback.hpp"
#include "core/variety.hpp"

#include <map>
#include <string>
#include <vector>

namespace betaforms {

// Generator set for one level of the filtration; level 0 (and -1) is alpha.
struct GradedGeneratorSet {
    std::string variety;
    int q = 0;
    int level = 0;
    std::vector<DiffForm> gens;              // canonical chart
    std::vector<std::string> provenance;     // aligned with gens
};

struct BetaResult {
    GradedGeneratorSet gens;
    int pstar = 0;
};

enum class Rung { Yes, No, Unknown };
std::string to_string(Rung r);

struct ClassificationReport {
    std::string variety;
    std::string form_text;
    int q = 0;
    Rung in_omega = Rung::Unknown;
    Rung in_alpha = Rung::Unknown;
    std::optional<int> min_level;  // smallest p with form in alpha[p], if found <= cap
    Rung in_beta = Rung::Unknown;
    Rung in_L = Rung::Unknown;
    std::string alpha_evidence;
    std::string beta_evidence;
    std::string L_evidence;
    int level_cap = 0;
};

struct PullbackLevelReport {
    std::string map_name;
    struct Row {
        int level;
        std::string generator;
        bool preserved;
    };
    std::vector<Row> rows;
    bool wedge_d_commute = true;
    bool all_preserved = true;
};

// Level recursion, seeds, stabilization and classification. Holds a registry
// reference for product factors; level sets are cached per (variety, q, p).
class BetaEngine {
public:
    explicit BetaEngine(Registry& reg) : reg_(reg) {}

    // alpha seed (level 0), including the product rule for product varieties
    const GradedGeneratorSet& seed(const VarietyPtr& X, int q);
    const GradedGeneratorSet& alpha_level(const VarietyPtr& X, int q, int p);
    BetaResult beta(const VarietyPtr& X, int q, int cap = -1);

    // Whether the alpha seed is complete for this variety (computed sweep) or
    // a declared lower bound (M_k, Fermat).
    bool seeds_complete(const VarietyPtr& X) const;

    ClassificationReport classify(const VarietyPtr& X, const DiffForm& f,
                                  const DependenceCertificate* cert = nullptr, int cap = -1);

    PullbackLevelReport check_pullback_levels(const MapSpec& f, int max_level);

    FormModule module_of(const VarietyPtr& X, const GradedGeneratorSet& s) const;

private:
    GradedGeneratorSet build_level(const VarietyPtr& X, int q, int p);
    std::vector<DiffForm> ambient_gens(const VarietyPtr& X, const GradedGeneratorSet& s) const;

    Registry& reg_;
    std::mutex mu_;
    std::map<std::tuple<std::string, int, int>, GradedGeneratorSet> levels_;
};

} // namespace betaforms
