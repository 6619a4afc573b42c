#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "kelvsim/errors.hpp"
#include "kelvsim/linalg.hpp"

namespace kelvsim {

// Joint (k, v) state of one Kelvin mode.
struct ModeState {
    Vec3 k{};
    CVec3 v{};
};

// ---- elementwise state operations --------------------------------------
// Every state type used with the steppers defines the same three primitives.
// The per-element expressions are written once per scalar so that a single
// mode evolved standalone and the same mode inside an ensemble go through
// identical floating-point operations (bit-reproducible trajectories).

inline void state_set_axpy(ModeState& out, const ModeState& y, double a, const ModeState& d) {
    for (int i = 0; i < 3; ++i) out.k[i] = y.k[i] + a * d.k[i];
    for (int i = 0; i < 3; ++i) out.v[i] = y.v[i] + a * d.v[i];
}

inline void state_add_scaled(ModeState& y, double a, const ModeState& d) {
    for (int i = 0; i < 3; ++i) y.k[i] += a * d.k[i];
    for (int i = 0; i < 3; ++i) y.v[i] += a * d.v[i];
}

inline void state_rk4_combine(ModeState& y, double h, const ModeState& k1, const ModeState& k2,
                              const ModeState& k3, const ModeState& k4) {
    const double c = h / 6.0;
    for (int i = 0; i < 3; ++i) y.k[i] += c * (k1.k[i] + 2.0 * k2.k[i] + 2.0 * k3.k[i] + k4.k[i]);
    for (int i = 0; i < 3; ++i) y.v[i] += c * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
}

inline double state_error_norm(const ModeState& err, const ModeState& y, double abs_tol,
                               double rel_tol) {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
        m = std::max(m, std::abs(err.k[i]) / (abs_tol + rel_tol * std::abs(y.k[i])));
    for (int i = 0; i < 3; ++i)
        m = std::max(m, std::abs(err.v[i]) / (abs_tol + rel_tol * std::abs(y.v[i])));
    return m;
}

inline void state_resize_like(ModeState&, const ModeState&) {}

// Ensembles are plain vectors of mode states; ops apply mode by mode.
using EnsembleState = std::vector<ModeState>;

inline void state_set_axpy(EnsembleState& out, const EnsembleState& y, double a,
                           const EnsembleState& d) {
    for (size_t m = 0; m < y.size(); ++m) state_set_axpy(out[m], y[m], a, d[m]);
}
inline void state_add_scaled(EnsembleState& y, double a, const EnsembleState& d) {
    for (size_t m = 0; m < y.size(); ++m) state_add_scaled(y[m], a, d[m]);
}
inline void state_rk4_combine(EnsembleState& y, double h, const EnsembleState& k1,
                              const EnsembleState& k2, const EnsembleState& k3,
                              const EnsembleState& k4) {
    for (size_t m = 0; m < y.size(); ++m) state_rk4_combine(y[m], h, k1[m], k2[m], k3[m], k4[m]);
}
inline double state_error_norm(const EnsembleState& err, const EnsembleState& y, double abs_tol,
                               double rel_tol) {
    double m = 0.0;
    for (size_t i = 0; i < y.size(); ++i)
        m = std::max(m, state_error_norm(err[i], y[i], abs_tol, rel_tol));
    return m;
}
inline void state_resize_like(EnsembleState& s, const EnsembleState& ref) { s.resize(ref.size()); }

// ---- classic RK4 --------------------------------------------------------

template <class State>
struct RkWork {
    State k1, k2, k3, k4, tmp;
    explicit RkWork(const State& ref) {
        state_resize_like(k1, ref);
        state_resize_like(k2, ref);
        state_resize_like(k3, ref);
        state_resize_like(k4, ref);
        state_resize_like(tmp, ref);
    }
};

// One classic RK4 step; rhs(y, t, dydt).
template <class State, class Rhs>
void rk4_step(State& y, double t, double h, Rhs&& rhs, RkWork<State>& w) {
    rhs(y, t, w.k1);
    state_set_axpy(w.tmp, y, 0.5 * h, w.k1);
    rhs(w.tmp, t + 0.5 * h, w.k2);
    state_set_axpy(w.tmp, y, 0.5 * h, w.k2);
    rhs(w.tmp, t + 0.5 * h, w.k3);
    state_set_axpy(w.tmp, y, h, w.k3);
    rhs(w.tmp, t + h, w.k4);
    state_rk4_combine(y, h, w.k1, w.k2, w.k3, w.k4);
}

// Fixed-step RK4 driver over [t0, t_end]. Steps are t0 + i*dt with a single
// shortened final step when the span is not a multiple of dt. The recorder is
// called as record(step_index, t, y) for the initial state and after every
// step; post_step(t, y) may mutate the state (per-step projection hook).
template <class State, class Rhs, class Recorder, class PostStep>
void integrate_rk4(State& y, double t0, double t_end, double dt, Rhs&& rhs, Recorder&& record,
                   PostStep&& post_step) {
    const double span = t_end - t0;
    const long rounded = std::llround(span / dt);
    long n_full;
    double tail;
    if (rounded >= 1 && std::abs(static_cast<double>(rounded) * dt - span) <= 1e-9 * dt) {
        n_full = rounded;
        tail = 0.0;
    } else {
        n_full = static_cast<long>(std::floor(span / dt));
        tail = span - static_cast<double>(n_full) * dt;
        if (tail <= 1e-12 * dt) tail = 0.0;
    }

    RkWork<State> work(y);
    record(0, t0, y);
    long step = 0;
    for (long i = 0; i < n_full; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        rk4_step(y, t, dt, rhs, work);
        const bool last = (i + 1 == n_full) && tail == 0.0;
        const double t_next = last ? t_end : t0 + static_cast<double>(i + 1) * dt;
        post_step(t_next, y);
        record(++step, t_next, y);
    }
    if (tail > 0.0) {
        rk4_step(y, t0 + static_cast<double>(n_full) * dt, tail, rhs, work);
        post_step(t_end, y);
        record(++step, t_end, y);
    }
}

// ---- Dormand-Prince 5(4) adaptive -----------------------------------------

// Embedded adaptive driver with elementwise error control
//   |err_i| <= abs_tol + rel_tol |y_i|.
// Throws IntegrationError when the controller underflows the step size.
template <class State, class Rhs, class Recorder, class PostStep>
void integrate_dopri45(State& y, double t0, double t_end, double dt_init, double abs_tol,
                       double rel_tol, Rhs&& rhs, Recorder&& record, PostStep&& post_step) {
    // Dormand-Prince coefficients.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    State k1 = y, k2 = y, k3 = y, k4 = y, k5 = y, k6 = y, k7 = y, tmp = y, ynew = y, err = y;

    double t = t0;
    double h = std::min(dt_init, t_end - t0);
    long step = 0;
    record(0, t0, y);
    const double h_floor = 1e4 * std::numeric_limits<double>::epsilon();

    while (t < t_end) {
        if (t + h > t_end) h = t_end - t;
        if (h <= h_floor * std::max(std::abs(t), 1.0))
            throw IntegrationError("adaptive step size underflow", t);

        rhs(y, t, k1);
        state_set_axpy(tmp, y, h * a21, k1);
        rhs(tmp, t + c2 * h, k2);
        state_set_axpy(tmp, y, h * a31, k1);
        state_add_scaled(tmp, h * a32, k2);
        rhs(tmp, t + c3 * h, k3);
        state_set_axpy(tmp, y, h * a41, k1);
        state_add_scaled(tmp, h * a42, k2);
        state_add_scaled(tmp, h * a43, k3);
        rhs(tmp, t + c4 * h, k4);
        state_set_axpy(tmp, y, h * a51, k1);
        state_add_scaled(tmp, h * a52, k2);
        state_add_scaled(tmp, h * a53, k3);
        state_add_scaled(tmp, h * a54, k4);
        rhs(tmp, t + c5 * h, k5);
        state_set_axpy(tmp, y, h * a61, k1);
        state_add_scaled(tmp, h * a62, k2);
        state_add_scaled(tmp, h * a63, k3);
        state_add_scaled(tmp, h * a64, k4);
        state_add_scaled(tmp, h * a65, k5);
        rhs(tmp, t + h, k6);

        state_set_axpy(ynew, y, h * b1, k1);
        state_add_scaled(ynew, h * b3, k3);
        state_add_scaled(ynew, h * b4, k4);
        state_add_scaled(ynew, h * b5, k5);
        state_add_scaled(ynew, h * b6, k6);
        rhs(ynew, t + h, k7);

        state_set_axpy(err, ynew, -1.0, ynew);  // zero, same shape
        state_add_scaled(err, h * e1, k1);
        state_add_scaled(err, h * e3, k3);
        state_add_scaled(err, h * e4, k4);
        state_add_scaled(err, h * e5, k5);
        state_add_scaled(err, h * e6, k6);
        state_add_scaled(err, h * e7, k7);

        const double ratio = state_error_norm(err, ynew, abs_tol, rel_tol);
        if (ratio <= 1.0) {
            t += h;
            y = ynew;
            post_step(t, y);
            record(++step, t, y);
        }
        const double factor =
            ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
}

struct NoPostStep {
    template <class State>
    void operator()(double, State&) const {}
};

}  // namespace kelvsim
