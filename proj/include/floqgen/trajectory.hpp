#pragma once

#include <map>
#include <string>
#include <vector>

#include "floqgen/operators.hpp"

namespace floqgen {

enum class MethodTag { exact, extended_space, effective, effective_micromotion };

std::string method_tag_name(MethodTag tag);

/// Time grid, states and scalar observables from one propagation method.
/// Construction validates every state; effective(K) tags use the relaxed
/// positivity tolerance.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(std::vector<double> times, std::vector<Operator> states, MethodTag tag,
               int order_or_nmax = 0);

    const std::vector<double>& times() const { return times_; }
    const std::vector<DensityMatrix>& states() const { return states_; }
    MethodTag tag() const { return tag_; }
    int order_or_nmax() const { return order_; }

    void add_observable(const std::string& name, const Operator& obs);
    const std::map<std::string, std::vector<double>>& observables() const { return observables_; }
    const std::vector<double>& observable(const std::string& name) const;

    size_t size() const { return times_.size(); }

private:
    std::vector<double> times_;
    std::vector<DensityMatrix> states_;
    MethodTag tag_ = MethodTag::exact;
    int order_ = 0;
    std::map<std::string, std::vector<double>> observables_;
};

struct IntegratorConfig {
    int steps_per_fast_period = 40;
    double max_step = 0.0; // 0: no cap
    std::vector<double> t_grid;
};

/// n+1 equally spaced output times on [0, t_end].
std::vector<double> uniform_grid(double t_end, int n);

} // namespace floqgen
