#include "floqgen/tolerances.hpp"

#include <fstream>
#include <map>

#include <json.hpp>

#include "floqgen/errors.hpp"

namespace floqgen {

namespace {
Tolerances g_tol;

std::map<std::string, double Tolerances::*> field_map() {
    return {
        {"hermiticity", &Tolerances::hermiticity},
        {"trace", &Tolerances::trace},
        {"positivity", &Tolerances::positivity},
        {"positivity_effective", &Tolerances::positivity_effective},
        {"trace_annihilation", &Tolerances::trace_annihilation},
        {"hermiticity_preserving", &Tolerances::hermiticity_preserving},
        {"pairing", &Tolerances::pairing},
        {"expm_residual", &Tolerances::expm_residual},
        {"kernel_residual", &Tolerances::kernel_residual},
        {"kernel_degeneracy_ratio", &Tolerances::kernel_degeneracy_ratio},
        {"fd_match_rel", &Tolerances::fd_match_rel},
        {"trajectory_trace", &Tolerances::trajectory_trace},
        {"trajectory_hermiticity", &Tolerances::trajectory_hermiticity},
        {"oracle_pointwise", &Tolerances::oracle_pointwise},
        {"composition", &Tolerances::composition},
        {"truncation_population", &Tolerances::truncation_population},
        {"form_compress", &Tolerances::form_compress},
        {"term_drop", &Tolerances::term_drop},
    };
}
} // namespace

Tolerances& tolerances() { return g_tol; }

void set_tolerances(const Tolerances& t) { g_tol = t; }

Tolerances load_tolerance_overrides(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open tolerance file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("tolerance file parse error: ") + e.what());
    }
    auto fields = field_map();
    Tolerances t = g_tol;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto f = fields.find(it.key());
        if (f == fields.end()) throw ConfigError("unknown tolerance key: " + it.key());
        if (!it.value().is_number()) throw ConfigError("tolerance " + it.key() + " not a number");
        t.*(f->second) = it.value().get<double>();
    }
    g_tol = t;
    return t;
}

} // namespace floqgen
