#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morseq/morse_instance.hpp"

namespace morseq {

/// Upright torus x = (R + r cos(theta)) cos(phi), y = r sin(theta),
/// z = (R + r cos(theta)) sin(phi), height function f = z, reflection
/// y -> -y (theta -> -theta). Fixed locus: the circles theta = 0 and pi.
struct TorusChart {
    double R = 2.0;
    double r = 1.0;

    double height(double theta, double phi) const;
    /// grad f = g^{-1} df with g = diag(r^2, (R + r cos(theta))^2).
    Eigen::Vector2d gradient(double theta, double phi) const;
};

struct FlowParams {
    double step = 1e-3;       // RK4 step in flow time
    int samples = 720;        // descending-sphere samples at index-2 sources
    double arrival_eps = 1e-5;  // chart-distance convergence threshold
    long max_steps = 400000;
};

struct FlowTrajectory {
    std::string source;
    std::string target;
    Carrier carrier = Carrier::ambient;
    std::optional<int> depart;
    std::optional<int> arrive;
    std::optional<XiClass> xi;
};

struct FlowResult {
    std::vector<FlowTrajectory> trajectories;
    double max_energy_increase = 0.0;  // worst single-step increase of f seen
};

/// Rigid trajectories between one pair of torus critical points
/// ("a","b","c","d"), recovered by shooting and separatrix bisection.
std::vector<FlowTrajectory> count_trajectories(const TorusChart& chart, const FlowParams& params,
                                               const std::string& source,
                                               const std::string& target, Carrier carrier,
                                               double* max_energy_increase = nullptr);

/// P/R class of a fixed-locus trajectory: integrate the scalar normal
/// equation xi' = a11(t) xi along the arc and compare the terminal sign
/// with the normal choice at the target. o_source/o_target give the sign of
/// the chosen normal against +y (the dataset's global convention is +1).
XiClass classify_xi(const TorusChart& chart, const FlowParams& params, const std::string& source,
                    const std::string& target, int direction, int o_source, int o_target);

struct FlowMismatch {
    std::string what;
};

struct FlowVerifyReport {
    bool ok = true;
    FlowResult result;
    std::vector<FlowMismatch> mismatches;
    std::map<std::string, int> counts_by_pair;
};

/// Record-for-record comparison of the recovered flow data against the
/// shipped torus dataset, up to trajectory relabeling.
FlowVerifyReport verify_against(const MorseInstance& torus, const TorusChart& chart,
                                const FlowParams& params);

}  // namespace morseq
