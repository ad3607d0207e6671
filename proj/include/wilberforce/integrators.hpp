#pragma once

// Time stepping for Hamilton's equations: the velocity Verlet scheme and a
// classical fourth-order Runge-Kutta reference method.

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

#include "dynamics.hpp"
#include "errors.hpp"
#include "io.hpp"

namespace wilberforce {

enum class Method { verlet, reference };

struct IntegratorConfig {
    double k = 1e-3;
    Method method = Method::verlet;
    double t_final = 1.0;
    std::size_t sample_stride = 1;

    void validate() const {
        if (!(k > 0.0) || !std::isfinite(k))
            throw InvalidArgument("step size k must be positive");
        if (!(t_final > 0.0) || !std::isfinite(t_final))
            throw InvalidArgument("t_final must be positive");
        if (sample_stride < 1)
            throw InvalidArgument("sample_stride must be at least 1");
    }
};

struct Trajectory {
    SystemParams params;
    std::vector<double> times;
    std::vector<PhaseState> states;

    std::size_t size() const noexcept { return states.size(); }
    bool empty() const noexcept { return states.empty(); }
    const PhaseState& back() const { return states.back(); }
};

/// One velocity Verlet step of size k. Both positions are advanced before
/// either momentum, so the momentum update sees F(x_{i+1}, y_{i+1}).
inline PhaseState verlet_step(const SystemParams& params, const PhaseState& s, double k) noexcept {
    const double f1_old = force1(params, s.q1, s.q2);
    const double f2_old = force2(params, s.q1, s.q2);
    const double half_k2 = 0.5 * k * k;

    PhaseState next;
    next.q1 = s.q1 + k * s.p1 + half_k2 * f1_old;
    next.q2 = s.q2 + k * s.p2 + half_k2 * f2_old;

    const double f1_new = force1(params, next.q1, next.q2);
    const double f2_new = force2(params, next.q1, next.q2);
    next.p1 = s.p1 + 0.5 * k * (f1_new + f1_old);
    next.p2 = s.p2 + 0.5 * k * (f2_new + f2_old);
    return next;
}

/// Classical RK4 step for an arbitrary autonomous field.
template <typename State, typename Field>
State rk4_step(const Field& field, const State& s, double k) {
    const State k1 = field(s);
    const State k2 = field(s + (0.5 * k) * k1);
    const State k3 = field(s + (0.5 * k) * k2);
    const State k4 = field(s + k * k3);
    return s + (k / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline PhaseState reference_step(const SystemParams& params, const PhaseState& s, double k) {
    return rk4_step([&](const PhaseState& x) { return vector_field(params, x); }, s, k);
}

inline PhaseState step(Method method, const SystemParams& params, const PhaseState& s, double k) {
    return method == Method::verlet ? verlet_step(params, s, k) : reference_step(params, s, k);
}

/// Number of steps used to cover t_final with step k: ceil(t_final / k).
inline std::size_t step_count(double t_final, double k) {
    const double n = std::ceil(t_final / k - 1e-9);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

inline Trajectory integrate(const SystemParams& params, const PhaseState& s0, const IntegratorConfig& cfg) {
    params.validate();
    cfg.validate();

    const std::size_t n = step_count(cfg.t_final, cfg.k);
    Trajectory traj{params, {}, {}};
    traj.times.reserve(n / cfg.sample_stride + 2);
    traj.states.reserve(n / cfg.sample_stride + 2);
    traj.times.push_back(0.0);
    traj.states.push_back(s0);

    // k is rounded down so that n steps end exactly at t_final
    const double h = cfg.t_final / static_cast<double>(n);
    PhaseState s = s0;
    for (std::size_t i = 1; i <= n; ++i) {
        s = step(cfg.method, params, s, h);
        const double t = i == n ? cfg.t_final : static_cast<double>(i) * h;
        if (!s.is_finite())
            throw Divergence(i, t);
        if (i % cfg.sample_stride == 0 || i == n) {
            traj.times.push_back(t);
            traj.states.push_back(s);
        }
    }
    return traj;
}

/// Final state after integrating for t_final, without storing samples.
inline PhaseState advance(const SystemParams& params, const PhaseState& s0, double t_final, double k,
                          Method method = Method::reference) {
    const std::size_t n = step_count(t_final, k);
    const double h = t_final / static_cast<double>(n);
    PhaseState s = s0;
    for (std::size_t i = 1; i <= n; ++i) {
        s = step(method, params, s, h);
        if (!s.is_finite())
            throw Divergence(i, static_cast<double>(i) * h);
    }
    return s;
}

/// Maximum relative energy error max_t |H(s_t) - H(s_0)| / |H(s_0)|.
inline double energy_drift(const Trajectory& traj) {
    if (traj.empty())
        throw InvalidArgument("energy_drift: empty trajectory");
    const double e0 = hamiltonian(traj.params, traj.states.front());
    if (e0 == 0.0)
        throw InvalidArgument("energy_drift: initial energy is zero");
    double worst = 0.0;
    for (const auto& s : traj.states)
        worst = std::max(worst, std::abs(hamiltonian(traj.params, s) - e0) / std::abs(e0));
    return worst;
}

/// CSV with header t,q1,p1,q2,p2 at round-trip precision.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,q1,p1,q2,p2\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& s = traj.states[i];
        os << format_double(traj.times[i]) << ',' << format_double(s.q1) << ',' << format_double(s.p1) << ','
           << format_double(s.q2) << ',' << format_double(s.p2) << '\n';
    }
}

} // namespace wilberforce
