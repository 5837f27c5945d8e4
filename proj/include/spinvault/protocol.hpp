#pragma once

#include <complex>
#include <vector>

#include "spinvault/errors.hpp"

namespace spinvault::protocol {

enum class Kind { PaperSymmetric, Unmodulated, FreeSpins, Custom };

struct Segment {
    double duration;  // > 0
    double delta;     // cavity detuning during the segment
};

// One period of the periodic piecewise-constant detuning Delta(t).
struct DetuningSchedule {
    std::vector<Segment> segments;
    double period = 0.0;  // sum of durations
    Kind kind = Kind::Custom;

    void validate() const;
    double max_abs_delta() const;
    double min_duration() const;
    // PaperSymmetric accessors (t_0 = first+last segment, t_on = middle)
    double t0() const;
    double t_on() const;
    double delta() const;
};

// Off-resonant/resonant/off-resonant split of Eq.-3 type:
// [(t0/2, delta), (t_on, 0), (t0/2, delta)], period t0 + t_on.
DetuningSchedule paper_protocol(double t0, double t_on, double delta);

// Delta(t) = 0 throughout; `period` only sets the stroboscopic reference.
DetuningSchedule unmodulated(double period);

// Cavity absent (the propagators drop the photon coupling).
DetuningSchedule free_spins(double period);

DetuningSchedule custom(std::vector<Segment> segments);

// Piecewise-linear accumulated phase phi(t) = int_0^t Delta over one period.
struct PhaseProfile {
    std::vector<std::pair<double, double>> breakpoints;  // (time, phase)
    explicit PhaseProfile(const DetuningSchedule& s);
    double at(double t) const;  // t in [0, period]
};

// phi(t) at t in [0, period]; callers reduce mod period and add full-period
// multiples themselves.
double phase_at(const DetuningSchedule& schedule, double t);

// int_0^T exp(i phi(t)) dt. For PaperSymmetric this is the closed form
// ((2/Delta) sin(Delta t0/2) + t_on) exp(i Delta t0/2); for other kinds the
// integral is evaluated per segment in closed form (each segment contributes
// e^{i phi_k}(e^{i delta dt}-1)/(i delta)), exact up to roundoff.
std::complex<double> phase_integral(const DetuningSchedule& schedule);

}  // namespace spinvault::protocol
