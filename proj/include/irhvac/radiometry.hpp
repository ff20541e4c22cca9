#pragma once

// Camera Planck model: raw detector counts <-> temperature, and the
// three-source radiance decomposition (object, reflected, atmosphere).
//
// All temperatures are kelvin. Functions are pure and thread-safe.

namespace irhvac {

/// Which way the count offset O enters the Planck model.
///   plus_offset:  T = B / ln(R1 / (R2 (U + O)) + F)   (default; pairs with negative O)
///   minus_offset: T = B / ln(R1 / (R2 (U - O)) + F)   (pairs with positive O)
enum class PlanckSign { plus_offset, minus_offset };

struct PlanckConstants {
    double r1 = 14911.1846;
    double r2 = 0.0108;
    double b = 1396.6;
    double o = -6303.0;
    double f = 1.0;

    /// Factory defaults of the reference 320x240 LWIR camera.
    static constexpr PlanckConstants reference_camera() { return {}; }

    /// Throws DomainError unless r1, r2, b, f are finite and positive.
    void validate() const;
    friend bool operator==(const PlanckConstants&, const PlanckConstants&) = default;
};

/// Emissivity/transmissivity and the reflected and atmospheric signals, all
/// in count units. The default scene (1, 1, 0, 0) yields apparent temperature.
struct RadiometricScene {
    double emissivity = 1.0;
    double transmissivity = 1.0;
    double reflected_signal = 0.0;
    double atmospheric_signal = 0.0;

    /// Throws DomainError unless emissivity and transmissivity lie in (0, 1].
    void validate() const;
    friend bool operator==(const RadiometricScene&, const RadiometricScene&) = default;
};

/// Temperature for a raw count. Throws DomainError naming the failing term when
/// the shifted count is not positive or the log argument does not exceed 1.
double counts_to_temperature(double counts, const PlanckConstants& c, PlanckSign sign = PlanckSign::plus_offset);

/// Exact algebraic inverse of counts_to_temperature. Throws DomainError when
/// kelvin <= 0 or exp(B / kelvin) <= F.
double temperature_to_counts(double kelvin, const PlanckConstants& c, PlanckSign sign = PlanckSign::plus_offset);

/// U_obj = (U_tot - tau (1 - eps) U_refl - (1 - tau) U_atm) / (eps tau)
double object_signal(double total_counts, const RadiometricScene& s);

/// U_tot = eps tau U_obj + tau (1 - eps) U_refl + (1 - tau) U_atm
double total_signal(double object_counts, const RadiometricScene& s);

}  // namespace irhvac
