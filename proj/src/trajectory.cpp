#include "floqgen/trajectory.hpp"

namespace floqgen {

std::string method_tag_name(MethodTag tag) {
    switch (tag) {
    case MethodTag::exact: return "exact";
    case MethodTag::extended_space: return "extended_space";
    case MethodTag::effective: return "effective";
    case MethodTag::effective_micromotion: return "effective_micromotion";
    }
    return "?";
}

Trajectory::Trajectory(std::vector<double> times, std::vector<Operator> states, MethodTag tag,
                       int order_or_nmax)
    : times_(std::move(times)), tag_(tag), order_(order_or_nmax) {
    if (times_.size() != states.size())
        throw InvalidArgument("Trajectory: times and states lengths differ");
    for (size_t i = 1; i < times_.size(); ++i)
        if (times_[i] <= times_[i - 1]) throw InvalidArgument("Trajectory: times not increasing");
    const bool relaxed = tag == MethodTag::effective || tag == MethodTag::effective_micromotion ||
                         tag == MethodTag::extended_space;
    const Tolerances& tol = tolerances();
    const double tol_p = relaxed ? tol.positivity_effective : tol.positivity;
    states_.reserve(states.size());
    for (size_t i = 0; i < states.size(); ++i) {
        try {
            states_.emplace_back(std::move(states[i]), tol_p, tol.trajectory_hermiticity,
                                 tol.trajectory_trace);
        } catch (const StateInvariantViolation& e) {
            throw StateInvariantViolation(method_tag_name(tag) + " trajectory at t=" +
                                          std::to_string(times_[i]) + ": " + e.what());
        }
    }
}

void Trajectory::add_observable(const std::string& name, const Operator& obs) {
    if (!obs.is_hermitian(1e-12))
        throw InvalidArgument("Trajectory::add_observable: observable not Hermitian");
    std::vector<double> vals;
    vals.reserve(states_.size());
    for (const auto& s : states_) vals.push_back(expectation(obs, s.op()));
    observables_[name] = std::move(vals);
}

const std::vector<double>& Trajectory::observable(const std::string& name) const {
    const auto it = observables_.find(name);
    if (it == observables_.end()) throw InvalidArgument("Trajectory: no observable " + name);
    return it->second;
}

std::vector<double> uniform_grid(double t_end, int n) {
    if (t_end <= 0.0 || n < 1) throw InvalidArgument("uniform_grid: bad arguments");
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = t_end * i / n;
    return g;
}

} // namespace floqgen
