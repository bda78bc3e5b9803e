#include "morseq/flow_verifier.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "morseq/errors.hpp"

namespace morseq {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a < -kPi) a += 2 * kPi;
    return a;
}

struct ChartPoint {
    double theta;
    double phi;
};

// a, b on top (phi = pi/2), c, d at the bottom; a, d on the outer circle
// theta = 0, b, c on the inner circle theta = pi.
ChartPoint critical_point(const std::string& id) {
    if (id == "a") return {0.0, kPi / 2};
    if (id == "b") return {kPi, kPi / 2};
    if (id == "c") return {kPi, -kPi / 2};
    if (id == "d") return {0.0, -kPi / 2};
    throw UnknownGenerator("no torus critical point '" + id + "'");
}

double chart_distance(const ChartPoint& p, const ChartPoint& q) {
    double dt = wrap_angle(p.theta - q.theta);
    double dp = wrap_angle(p.phi - q.phi);
    return std::sqrt(dt * dt + dp * dp);
}

struct FlowOutcome {
    std::string target;       // converged critical point ("" on NonConvergence)
    int y_sign = 0;           // last nonzero sign of y along the path
    int route = 0;            // sign of the unwrapped phi displacement
    double energy_increase = 0.0;
};

FlowOutcome integrate(const TorusChart& chart, const FlowParams& params, ChartPoint start,
                      bool budget_is_error = true) {
    static const std::vector<std::string> ids = {"a", "b", "c", "d"};
    double theta = start.theta, phi = start.phi;
    double phi_unwrapped = 0.0;
    FlowOutcome out;
    double f_prev = chart.height(theta, phi);
    if (std::sin(theta) != 0.0) out.y_sign = std::sin(theta) > 0 ? 1 : -1;

    auto field = [&](double t, double p, double& dt, double& dp) {
        Eigen::Vector2d g = chart.gradient(t, p);
        dt = -g[0];
        dp = -g[1];
    };

    for (long step = 0; step < params.max_steps; ++step) {
        for (const auto& id : ids) {
            if (chart_distance({theta, phi}, critical_point(id)) < params.arrival_eps) {
                out.target = id;
                return out;
            }
        }
        double h = params.step;
        double k1t, k1p, k2t, k2p, k3t, k3p, k4t, k4p;
        field(theta, phi, k1t, k1p);
        field(theta + h / 2 * k1t, phi + h / 2 * k1p, k2t, k2p);
        field(theta + h / 2 * k2t, phi + h / 2 * k2p, k3t, k3p);
        field(theta + h * k3t, phi + h * k3p, k4t, k4p);
        double dphi = h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
        theta += h / 6 * (k1t + 2 * k2t + 2 * k3t + k4t);
        phi += dphi;
        phi_unwrapped += dphi;

        double f_now = chart.height(theta, phi);
        out.energy_increase = std::max(out.energy_increase, f_now - f_prev);
        f_prev = f_now;
        double y = chart.r * std::sin(theta);
        if (y != 0.0) out.y_sign = y > 0 ? 1 : -1;
        if (phi_unwrapped != 0.0) out.route = phi_unwrapped > 0 ? 1 : -1;
    }
    if (budget_is_error)
        throw NonConvergence("flow did not reach a critical point within the step budget");
    return out;
}

// Flow restricted to a fixed circle (theta held at 0 or pi): 1-dimensional
// shooting, exact because the locus is invariant.
FlowOutcome integrate_on_locus(const TorusChart& chart, const FlowParams& params, double theta,
                               double phi0, int direction) {
    double rho = chart.R + chart.r * std::cos(theta);
    double phi = phi0 + direction * 10 * params.arrival_eps;
    static const std::vector<std::string> ids = {"a", "b", "c", "d"};
    FlowOutcome out;
    double phi_unwrapped = 0.0;
    for (long step = 0; step < params.max_steps; ++step) {
        for (const auto& id : ids) {
            ChartPoint cp = critical_point(id);
            if (cp.theta == theta && std::abs(wrap_angle(phi - cp.phi)) < params.arrival_eps) {
                out.target = id;
                out.route = phi_unwrapped > 0 ? 1 : (phi_unwrapped < 0 ? -1 : 0);
                return out;
            }
        }
        auto field = [&](double p) { return std::cos(p) / rho; };  // -grad^phi
        double h = params.step;
        double k1 = -field(phi), k2 = -field(phi + h / 2 * k1), k3 = -field(phi + h / 2 * k2),
               k4 = -field(phi + h * k3);
        double dphi = h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        phi += dphi;
        phi_unwrapped += dphi;
    }
    throw NonConvergence("locus flow did not converge");
}

void bisect_separatrix(const TorusChart& chart, const FlowParams& params,
                       const ChartPoint& center, double radius, double alpha_lo, double alpha_hi,
                       std::string& target, int& y_sign) {
    auto launch = [&](double alpha) {
        return ChartPoint{center.theta + radius * std::cos(alpha),
                          center.phi + radius * std::sin(alpha)};
    };
    FlowOutcome lo = integrate(chart, params, launch(alpha_lo));
    for (int iter = 0; iter < 80 && alpha_hi - alpha_lo > 1e-13; ++iter) {
        double mid = (alpha_lo + alpha_hi) / 2;
        FlowOutcome m = integrate(chart, params, launch(mid));
        if (m.target == lo.target && m.y_sign == lo.y_sign && m.route == lo.route)
            alpha_lo = mid;
        else
            alpha_hi = mid;
    }
    FlowOutcome sep = integrate(chart, params, launch((alpha_lo + alpha_hi) / 2));
    target = sep.target;
    y_sign = sep.y_sign;
}

}  // namespace

double TorusChart::height(double theta, double phi) const {
    return (R + r * std::cos(theta)) * std::sin(phi);
}

Eigen::Vector2d TorusChart::gradient(double theta, double phi) const {
    double rho = R + r * std::cos(theta);
    Eigen::Vector2d g;
    g[0] = -std::sin(theta) * std::sin(phi) / r;  // f_theta / r^2
    g[1] = std::cos(phi) / rho;                   // f_phi / rho^2
    return g;
}

std::vector<FlowTrajectory> count_trajectories(const TorusChart& chart, const FlowParams& params,
                                               const std::string& source,
                                               const std::string& target, Carrier carrier,
                                               double* max_energy_increase) {
    std::vector<FlowTrajectory> found;
    double worst = 0.0;
    ChartPoint src = critical_point(source);

    if (carrier == Carrier::fixed) {
        // One-dimensional shooting inside the invariant circle.
        for (int direction : {+1, -1}) {
            FlowOutcome out = integrate_on_locus(chart, params, src.theta, src.phi, direction);
            if (out.target != target) continue;
            FlowTrajectory t;
            t.source = source;
            t.target = target;
            t.carrier = Carrier::fixed;
            if (target == "c")  // unstable target: transport class attached
                t.xi = classify_xi(chart, params, source, target, direction, +1, +1);
            found.push_back(t);
        }
    } else if (source == "a") {
        // Index gap 1 from the maximum. Generic samples drain to the minimum;
        // a trajectory into the intermediate target shows up either as a short
        // run of samples absorbed there or as a separatrix between two sample
        // cells with different fates.
        const int n = std::max(16, params.samples);
        double radius = 1e-3;
        std::vector<FlowOutcome> fates;
        for (int i = 0; i < n; ++i) {
            double alpha = 2 * kPi * i / n;
            FlowOutcome out = integrate(
                chart, params,
                {src.theta + radius * std::cos(alpha), src.phi + radius * std::sin(alpha)});
            worst = std::max(worst, out.energy_increase);
            fates.push_back(out);
        }
        auto emit = [&](int y_sign) {
            FlowTrajectory t;
            t.source = source;
            t.target = target;
            t.carrier = Carrier::ambient;
            t.depart = y_sign;
            t.arrive = y_sign;  // y never changes sign off the fixed circles
            found.push_back(t);
        };
        // Maximal cyclic runs of samples absorbed at the intermediate target.
        std::vector<bool> counted(static_cast<size_t>(n), false);
        for (int i = 0; i < n; ++i) {
            if (fates[static_cast<size_t>(i)].target != target || counted[static_cast<size_t>(i)])
                continue;
            int j = i;
            while (fates[static_cast<size_t>((j + n - 1) % n)].target == target &&
                   (j + n - 1) % n != i)
                j = (j + n - 1) % n;
            int k = j;
            do {
                counted[static_cast<size_t>(k)] = true;
                k = (k + 1) % n;
            } while (fates[static_cast<size_t>(k)].target == target && k != j);
            emit(fates[static_cast<size_t>(j)].y_sign);
        }
        // Separatrices between adjacent cells that both miss the target.
        for (int i = 0; i < n; ++i) {
            const FlowOutcome& here = fates[static_cast<size_t>(i)];
            const FlowOutcome& next = fates[static_cast<size_t>((i + 1) % n)];
            if (here.target == target || next.target == target) continue;
            if (here.target == next.target && here.y_sign == next.y_sign &&
                here.route == next.route)
                continue;
            std::string sep_target;
            int y_sign = 0;
            bisect_separatrix(chart, params, src, radius, 2 * kPi * i / n, 2 * kPi * (i + 1) / n,
                              sep_target, y_sign);
            if (sep_target != target) continue;
            emit(y_sign);
        }
    } else {
        // Index-1 source: its descending sphere is the two normal directions.
        for (int direction : {+1, -1}) {
            ChartPoint start{src.theta + direction * 10 * params.arrival_eps, src.phi};
            FlowOutcome out = integrate(chart, params, start);
            worst = std::max(worst, out.energy_increase);
            if (out.target != target) continue;
            FlowTrajectory t;
            t.source = source;
            t.target = target;
            t.carrier = Carrier::ambient;
            t.depart = out.y_sign;
            t.arrive = out.y_sign;
            found.push_back(t);
        }
    }
    if (max_energy_increase) *max_energy_increase = std::max(*max_energy_increase, worst);
    return found;
}

XiClass classify_xi(const TorusChart& chart, const FlowParams& params, const std::string& source,
                    const std::string& target, int direction, int o_source, int o_target) {
    ChartPoint src = critical_point(source);
    ChartPoint tgt = critical_point(target);
    if (src.theta != tgt.theta)
        throw UnknownGenerator("classify_xi: endpoints on different fixed circles");
    double theta = src.theta;
    double rho = chart.R + chart.r * std::cos(theta);
    // e1 = normal unit vector d_theta / r; its +y component has sign cos(theta).
    double e1_y = std::cos(theta);
    double phi = src.phi + direction * 10 * params.arrival_eps;
    // xi normalized to point along the chosen normal at the source.
    double xi = o_source * e1_y;  // componentwise: <o_source * y-hat, e1>
    double phi_target = tgt.phi;
    for (long step = 0; step < params.max_steps; ++step) {
        if (std::abs(wrap_angle(phi - phi_target)) < params.arrival_eps) {
            double terminal = xi * e1_y * o_target;  // <xi, o_target * y-hat>
            return terminal > 0 ? XiClass::P : XiClass::R;
        }
        // a11 = <e1, nabla_{e1} grad f> = -cos(theta) sin(phi) / r on the circle.
        auto a11 = [&](double p) { return -std::cos(theta) * std::sin(p) / chart.r; };
        auto dphi = [&](double p) { return -std::cos(p) / rho; };
        double h = params.step;
        // Joint RK4 on (phi, xi); xi' = a11(phi) xi.
        double p1 = dphi(phi), x1 = a11(phi) * xi;
        double p2 = dphi(phi + h / 2 * p1), x2 = a11(phi + h / 2 * p1) * (xi + h / 2 * x1);
        double p3 = dphi(phi + h / 2 * p2), x3 = a11(phi + h / 2 * p2) * (xi + h / 2 * x2);
        double p4 = dphi(phi + h * p3), x4 = a11(phi + h * p3) * (xi + h * x3);
        phi += h / 6 * (p1 + 2 * p2 + 2 * p3 + p4);
        xi += h / 6 * (x1 + 2 * x2 + 2 * x3 + x4);
        if (std::abs(xi) > 1e100) xi /= 1e100;  // rescale; only the sign matters
    }
    throw NonConvergence("classify_xi: trajectory did not reach the target");
}

FlowVerifyReport verify_against(const MorseInstance& torus, const TorusChart& chart,
                                const FlowParams& params) {
    FlowVerifyReport report;
    double worst = 0.0;

    struct PairSpec {
        std::string source, target;
        Carrier carrier;
    };
    const std::vector<PairSpec> pairs = {{"a", "b", Carrier::ambient},
                                         {"c", "d", Carrier::ambient},
                                         {"b", "c", Carrier::fixed},
                                         {"a", "d", Carrier::fixed}};

    auto signature = [](const FlowTrajectory& t) {
        std::ostringstream s;
        s << (t.carrier == Carrier::ambient ? "ambient" : "fixed");
        if (t.depart) s << " depart " << *t.depart;
        if (t.arrive) s << " arrive " << *t.arrive;
        if (t.xi) s << " xi " << (*t.xi == XiClass::P ? "P" : "R");
        return s.str();
    };

    for (const auto& pair : pairs) {
        auto recovered =
            count_trajectories(chart, params, pair.source, pair.target, pair.carrier, &worst);
        report.counts_by_pair[pair.source + "->" + pair.target] =
            static_cast<int>(recovered.size());
        for (const auto& t : recovered) report.result.trajectories.push_back(t);

        std::multiset<std::string> got, want;
        for (const auto& t : recovered) got.insert(signature(t));
        for (const auto& rec : torus.trajectories) {
            if (rec.from != pair.source || rec.to != pair.target || rec.carrier != pair.carrier)
                continue;
            FlowTrajectory t;
            t.carrier = rec.carrier;
            t.depart = rec.depart;
            t.arrive = rec.arrive;
            t.xi = rec.xi;
            want.insert(signature(t));
        }
        if (got != want) {
            report.ok = false;
            std::ostringstream msg;
            msg << pair.source << " -> " << pair.target << ": recovered {";
            for (const auto& s : got) msg << " [" << s << "]";
            msg << " } but the dataset has {";
            for (const auto& s : want) msg << " [" << s << "]";
            msg << " }";
            report.mismatches.push_back({msg.str()});
        }
    }
    report.result.max_energy_increase = worst;
    return report;
}

}  // namespace morseq
