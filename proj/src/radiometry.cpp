#include "irhvac/radiometry.hpp"

#include <cmath>

#include <fmt/format.h>

#include "irhvac/error.hpp"

namespace irhvac {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void PlanckConstants::validate() const {
    if (!positive_finite(r1)) throw DomainError(fmt::format("planck constant r1 = {} must be positive", r1));
    if (!positive_finite(r2)) throw DomainError(fmt::format("planck constant r2 = {} must be positive", r2));
    if (!positive_finite(b)) throw DomainError(fmt::format("planck constant b = {} must be positive", b));
    if (!positive_finite(f)) throw DomainError(fmt::format("planck constant f = {} must be positive", f));
    if (!std::isfinite(o)) throw DomainError("planck constant o must be finite");
}

void RadiometricScene::validate() const {
    if (!(emissivity > 0.0 && emissivity <= 1.0))
        throw DomainError(fmt::format("emissivity {} outside (0, 1]", emissivity));
    if (!(transmissivity > 0.0 && transmissivity <= 1.0))
        throw DomainError(fmt::format("transmissivity {} outside (0, 1]", transmissivity));
    if (!std::isfinite(reflected_signal) || !std::isfinite(atmospheric_signal))
        throw DomainError("reflected/atmospheric signal must be finite");
}

double counts_to_temperature(double counts, const PlanckConstants& c, PlanckSign sign) {
    const double shifted = sign == PlanckSign::plus_offset ? counts + c.o : counts - c.o;
    const char* term = sign == PlanckSign::plus_offset ? "(u + o)" : "(u - o)";
    if (!(shifted > 0.0))
        throw DomainError(fmt::format("{} = {} must be positive (u = {})", term, shifted, counts));
    const double arg = c.r1 / (c.r2 * shifted) + c.f;
    if (!(arg > 1.0) || !std::isfinite(arg))
        throw DomainError(fmt::format("log argument r1 / (r2 {}) + f = {} must exceed 1 (u = {})", term, arg, counts));
    return c.b / std::log(arg);
}

double temperature_to_counts(double kelvin, const PlanckConstants& c, PlanckSign sign) {
    if (!(kelvin > 0.0) || !std::isfinite(kelvin))
        throw DomainError(fmt::format("temperature {} K must be positive", kelvin));
    const double e = std::exp(c.b / kelvin);
    if (!std::isfinite(e) || !(e > c.f))
        throw DomainError(fmt::format("exp(b / t) - f = {} must be positive and finite (t = {} K)", e - c.f, kelvin));
    const double shifted = c.r1 / (c.r2 * (e - c.f));
    return sign == PlanckSign::plus_offset ? shifted - c.o : shifted + c.o;
}

double object_signal(double total_counts, const RadiometricScene& s) {
    const double gain = s.emissivity * s.transmissivity;
    if (gain == 0.0) throw DomainError("emissivity * transmissivity is zero");
    return (total_counts - s.transmissivity * (1.0 - s.emissivity) * s.reflected_signal -
            (1.0 - s.transmissivity) * s.atmospheric_signal) /
           gain;
}

double total_signal(double object_counts, const RadiometricScene& s) {
    return s.emissivity * s.transmissivity * object_counts +
           s.transmissivity * (1.0 - s.emissivity) * s.reflected_signal +
           (1.0 - s.transmissivity) * s.atmospheric_signal;
}

}  // namespace irhvac
