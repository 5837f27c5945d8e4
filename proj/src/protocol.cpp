#include "spinvault/protocol.hpp"

#include <algorithm>
#include <cmath>

namespace spinvault::protocol {

using cd = std::complex<double>;

void DetuningSchedule::validate() const {
    if (segments.empty()) throw NonPositiveDuration("schedule has no segments");
    double sum = 0.0;
    for (const auto& s : segments) {
        if (!(s.duration > 0.0))
            throw NonPositiveDuration("segment duration must be > 0");
        sum += s.duration;
    }
    if (std::abs(sum - period) > 1e-14 * std::max(1.0, std::abs(period)))
        throw InvalidArgument("period does not equal the sum of segment durations");
}

double DetuningSchedule::max_abs_delta() const {
    double m = 0.0;
    for (const auto& s : segments) m = std::max(m, std::abs(s.delta));
    return m;
}

double DetuningSchedule::min_duration() const {
    double m = segments.front().duration;
    for (const auto& s : segments) m = std::min(m, s.duration);
    return m;
}

double DetuningSchedule::t0() const {
    if (kind != Kind::PaperSymmetric) throw UnsupportedKind("t0() needs PaperSymmetric");
    return segments[0].duration + segments[2].duration;
}

double DetuningSchedule::t_on() const {
    if (kind != Kind::PaperSymmetric) throw UnsupportedKind("t_on() needs PaperSymmetric");
    return segments[1].duration;
}

double DetuningSchedule::delta() const {
    if (kind != Kind::PaperSymmetric) throw UnsupportedKind("delta() needs PaperSymmetric");
    return segments[0].delta;
}

DetuningSchedule paper_protocol(double t0, double t_on, double delta) {
    if (!(t0 > 0.0) || !(t_on > 0.0))
        throw NonPositiveDuration("paper protocol needs t0 > 0 and t_on > 0");
    if (delta < 0.0) throw InvalidArgument("delta must be >= 0");
    DetuningSchedule s;
    s.kind = Kind::PaperSymmetric;
    s.segments = {{0.5 * t0, delta}, {t_on, 0.0}, {0.5 * t0, delta}};
    s.period = t0 + t_on;
    return s;
}

DetuningSchedule unmodulated(double period) {
    if (!(period > 0.0)) throw NonPositiveDuration("period must be > 0");
    DetuningSchedule s;
    s.kind = Kind::Unmodulated;
    s.segments = {{period, 0.0}};
    s.period = period;
    return s;
}

DetuningSchedule free_spins(double period) {
    if (!(period > 0.0)) throw NonPositiveDuration("period must be > 0");
    DetuningSchedule s;
    s.kind = Kind::FreeSpins;
    s.segments = {{period, 0.0}};
    s.period = period;
    return s;
}

DetuningSchedule custom(std::vector<Segment> segments) {
    DetuningSchedule s;
    s.kind = Kind::Custom;
    s.segments = std::move(segments);
    s.period = 0.0;
    for (const auto& seg : s.segments) s.period += seg.duration;
    s.validate();
    return s;
}

PhaseProfile::PhaseProfile(const DetuningSchedule& s) {
    s.validate();
    breakpoints.reserve(s.segments.size() + 1);
    double t = 0.0, phi = 0.0;
    breakpoints.emplace_back(0.0, 0.0);
    for (const auto& seg : s.segments) {
        t += seg.duration;
        phi += seg.delta * seg.duration;
        breakpoints.emplace_back(t, phi);
    }
}

double PhaseProfile::at(double t) const {
    const double period = breakpoints.back().first;
    if (t < -1e-15 || t > period * (1.0 + 1e-15) + 1e-15)
        throw OutOfRange("phase_at: t outside [0, period]");
    t = std::clamp(t, 0.0, period);
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        if (t <= breakpoints[k].first) {
            const auto& [ta, pa] = breakpoints[k - 1];
            const auto& [tb, pb] = breakpoints[k];
            const double slope = (pb - pa) / (tb - ta);
            return pa + slope * (t - ta);
        }
    }
    return breakpoints.back().second;
}

double phase_at(const DetuningSchedule& schedule, double t) {
    return PhaseProfile(schedule).at(t);
}

cd phase_integral(const DetuningSchedule& schedule) {
    schedule.validate();
    if (schedule.kind == Kind::PaperSymmetric) {
        const double t0 = schedule.t0();
        const double ton = schedule.t_on();
        const double d = schedule.delta();
        if (d == 0.0) return cd(t0 + ton, 0.0);
        return ((2.0 / d) * std::sin(0.5 * d * t0) + ton) *
               std::exp(cd(0.0, 0.5 * d * t0));
    }
    // generic: each constant segment integrates in closed form
    cd total = 0.0;
    double phi = 0.0;
    for (const auto& seg : schedule.segments) {
        const cd head = std::exp(cd(0.0, phi));
        if (seg.delta == 0.0) {
            total += head * seg.duration;
        } else {
            const cd rot = std::exp(cd(0.0, seg.delta * seg.duration)) - 1.0;
            total += head * rot / cd(0.0, seg.delta);
        }
        phi += seg.delta * seg.duration;
    }
    return total;
}

}  // namespace spinvault::protocol
