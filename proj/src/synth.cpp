#include "irhvac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "irhvac/error.hpp"

namespace irhvac {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<const char*, 7> weekday_keys = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};

// Thermal time constants of the toy facade, seconds.
constexpr double wall_lag = 2.0 * 3600.0;
constexpr double window_lag = 0.75 * 3600.0;
constexpr double cooling_lag = 10.0 * 60.0;
constexpr double warming_lag = 30.0 * 60.0;
constexpr double condenser_solar_gain = 0.4;

void check(bool ok, const std::string& what) {
    if (!ok) throw SpecError("scenario: " + what);
}

// First-order lag with exact discretization for a piecewise-constant input.
struct Lag {
    double y;
    double alpha;
    Lag(double initial, double tau, double dt) : y(initial), alpha(1.0 - std::exp(-dt / tau)) {}
    double step(double u) { return y += alpha * (u - y); }
};

}  // namespace

void ScenarioSpec::validate() const {
    check(days >= 1, "days must be >= 1");
    check(step > 0 && seconds_per_day % step == 0, fmt::format("step {} s must divide 24 h", step));
    for (std::size_t d = 0; d < hvac.size(); ++d) {
        if (!hvac[d]) continue;
        check(hvac[d]->start >= 0 && hvac[d]->end <= seconds_per_day && hvac[d]->start < hvac[d]->end,
              fmt::format("hvac schedule for {} must switch on before it switches off", weekday_keys[d]));
    }
    for (const auto& ac : ac_units) {
        check(!ac.name.empty(), "ac unit needs a name");
        check(ac.duty_period > 2.0 * static_cast<double>(step),
              fmt::format("ac '{}': duty period {} s is below Nyquist for step {} s", ac.name, ac.duty_period, step));
        check(allow_out_of_band_duty || (ac.duty_period >= 960.0 && ac.duty_period <= 1920.0),
              fmt::format("ac '{}': duty period {} s outside 960-1920 s", ac.name, ac.duty_period));
        check(ac.duty_fraction > 0.0 && ac.duty_fraction < 1.0,
              fmt::format("ac '{}': duty fraction must lie in (0, 1)", ac.name));
        for (const auto& u : ac.usage)
            check(u.start >= 0 && u.start < seconds_per_day && u.end >= 0 && u.end <= seconds_per_day &&
                      u.start != u.end,
                  fmt::format("ac '{}': usage interval times out of range", ac.name));
    }
    for (std::size_t i = 0; i < ac_units.size(); ++i)
        for (std::size_t j = i + 1; j < ac_units.size(); ++j)
            check(ac_units[i].name != ac_units[j].name, fmt::format("duplicate ac name '{}'", ac_units[i].name));
    check(noise_sigma >= 0.0 && solar_amplitude >= 0.0 && solar_flicker >= 0.0, "amplitudes must be >= 0");
    check(ambient_mean > 0.0 && setpoint > 0.0, "temperatures must be positive kelvin");
}

ScenarioSpec ScenarioSpec::canonical() {
    ScenarioSpec s;
    s.step = 120;
    for (int d = 0; d < 5; ++d) s.hvac[d] = DailyInterval{6 * 3600, 22 * 3600};
    s.hvac[5] = DailyInterval{6 * 3600, 18 * 3600};
    return s;
}

// ---------------------------------------------------------------- JSON

ScenarioSpec parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SpecError(fmt::format("scenario: invalid JSON ({})", e.what()));
    }
    if (!doc.is_object()) throw SpecError("scenario: top level must be an object");
    ScenarioSpec s;
    try {
        if (doc.contains("start_date")) s.start_date = parse_date(doc["start_date"].get<std::string>());
        if (doc.contains("days")) s.days = doc["days"].get<std::size_t>();
        if (doc.contains("step")) s.step = doc["step"].get<std::int64_t>();
        if (doc.contains("utc_offset")) s.offset = parse_utc_offset(doc["utc_offset"].get<std::string>());
        if (doc.contains("hvac")) {
            const json& h = doc["hvac"];
            for (std::size_t d = 0; d < 7; ++d) {
                if (!h.contains(weekday_keys[d]) || h[weekday_keys[d]].is_null()) continue;
                const json& e = h[weekday_keys[d]];
                s.hvac[d] = DailyInterval{parse_time_of_day(e.at("on").get<std::string>()),
                                          parse_time_of_day(e.at("off").get<std::string>())};
            }
        }
        if (doc.contains("ac_units")) {
            for (const json& a : doc["ac_units"]) {
                AcUnitSpec ac;
                ac.name = a.at("name").get<std::string>();
                ac.duty_period = a.value("duty_period", ac.duty_period);
                ac.duty_fraction = a.value("duty_fraction", ac.duty_fraction);
                ac.duty_amplitude = a.value("duty_amplitude", ac.duty_amplitude);
                for (const json& u : a.value("usage", json::array()))
                    ac.usage.push_back({parse_time_of_day(u.at("start").get<std::string>()),
                                        parse_time_of_day(u.at("end").get<std::string>())});
                s.ac_units.push_back(std::move(ac));
            }
        }
        s.ambient_mean = doc.value("ambient_mean", s.ambient_mean);
        s.diurnal_amplitude = doc.value("diurnal_amplitude", s.diurnal_amplitude);
        s.solar_amplitude = doc.value("solar_amplitude", s.solar_amplitude);
        s.solar_flicker = doc.value("solar_flicker", s.solar_flicker);
        s.noise_sigma = doc.value("noise_sigma", s.noise_sigma);
        s.setpoint = doc.value("setpoint", s.setpoint);
        s.indoor_free_offset = doc.value("indoor_free_offset", s.indoor_free_offset);
        s.window_coupling = doc.value("window_coupling", s.window_coupling);
        s.allow_out_of_band_duty = doc.value("allow_out_of_band_duty", s.allow_out_of_band_duty);
        s.seed = doc.value("seed", s.seed);
    } catch (const json::exception& e) {
        throw SpecError(fmt::format("scenario: {}", e.what()));
    } catch (const FormatError& e) {
        throw SpecError(fmt::format("scenario: {}", e.what()));
    }
    s.validate();
    return s;
}

std::string scenario_to_json(const ScenarioSpec& s) {
    json hvac = json::object();
    for (std::size_t d = 0; d < 7; ++d)
        hvac[weekday_keys[d]] = s.hvac[d] ? json{{"on", format_time_of_day(s.hvac[d]->start)},
                                                 {"off", format_time_of_day(s.hvac[d]->end)}}
                                          : json(nullptr);
    json units = json::array();
    for (const auto& ac : s.ac_units) {
        json usage = json::array();
        for (const auto& u : ac.usage)
            usage.push_back({{"start", format_time_of_day(u.start)}, {"end", format_time_of_day(u.end)}});
        units.push_back({{"name", ac.name},
                         {"duty_period", ac.duty_period},
                         {"duty_fraction", ac.duty_fraction},
                         {"duty_amplitude", ac.duty_amplitude},
                         {"usage", usage}});
    }
    json doc = {{"start_date", format_date(s.start_date)},
                {"days", s.days},
                {"step", s.step},
                {"utc_offset", format_utc_offset(s.offset)},
                {"hvac", hvac},
                {"ac_units", units},
                {"ambient_mean", s.ambient_mean},
                {"diurnal_amplitude", s.diurnal_amplitude},
                {"solar_amplitude", s.solar_amplitude},
                {"solar_flicker", s.solar_flicker},
                {"noise_sigma", s.noise_sigma},
                {"setpoint", s.setpoint},
                {"indoor_free_offset", s.indoor_free_offset},
                {"window_coupling", s.window_coupling},
                {"allow_out_of_band_duty", s.allow_out_of_band_duty},
                {"seed", s.seed}};
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------- generation

ScenarioOutput generate(const ScenarioSpec& spec) {
    spec.validate();
    const Instant start = local_midnight(spec.start_date, spec.offset);
    const std::size_t n = spec.days * static_cast<std::size_t>(seconds_per_day / spec.step);
    const double dt = static_cast<double>(spec.step);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    // Cloud flicker: a few sinusoids with periods scattered over 15-40 min.
    struct Tone {
        double period, phase;
    };
    std::array<Tone, 4> tones{};
    for (auto& t : tones) t = {900.0 + 1500.0 * uniform(rng), 2.0 * std::numbers::pi * uniform(rng)};

    ScenarioOutput out;
    auto blank = [&](const std::string& name, RoiLabel label) {
        TemperatureSeries s = TemperatureSeries::from_values(start, spec.step, std::vector<double>(n, 0.0));
        s.roi_name = name;
        s.label = label;
        return s;
    };
    out.wall = blank("wall", RoiLabel::wall);
    out.window = blank("window", RoiLabel::window);
    out.indoor = blank("indoor", RoiLabel::none);
    for (const auto& ac : spec.ac_units) out.condensers.push_back(blank(ac.name, RoiLabel::ac_unit));

    // Usage intervals as instants, clipped to the series span.
    const Instant end = start + static_cast<std::int64_t>(n) * spec.step;
    for (const auto& ac : spec.ac_units) {
        std::vector<UsageInterval> iv;
        for (std::int64_t d = -1; d <= static_cast<std::int64_t>(spec.days); ++d) {
            const Instant midnight = local_midnight(spec.start_date + std::chrono::days{d}, spec.offset);
            for (const auto& u : ac.usage) {
                Instant b = midnight + u.start;
                Instant e = midnight + u.end + (u.end <= u.start ? seconds_per_day : 0);
                b = std::max(b, start);
                e = std::min(e, end);
                if (b < e) iv.push_back({b, e});
            }
        }
        std::sort(iv.begin(), iv.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
        std::vector<UsageInterval> merged;
        for (const auto& u : iv) {
            if (!merged.empty() && u.start <= merged.back().end)
                merged.back().end = std::max(merged.back().end, u.end);
            else
                merged.push_back(u);
        }
        out.truth.ac_usage.push_back(std::move(merged));
    }

    auto hvac_on = [&](Instant t) {
        const auto& day = spec.hvac[static_cast<std::size_t>(weekday_index(local_date(t, spec.offset)))];
        const std::int64_t sod = local_seconds_of_day(t, spec.offset);
        return day && sod >= day->start && sod < day->end;
    };
    auto unit_running = [&](std::size_t k, Instant t) {
        return std::any_of(out.truth.ac_usage[k].begin(), out.truth.ac_usage[k].end(),
                           [&](const UsageInterval& u) { return t >= u.start && t < u.end; });
    };

    auto ambient_at = [&](double hour) {
        return spec.ambient_mean + spec.diurnal_amplitude * std::cos(2.0 * std::numbers::pi * (hour - 15.0) / 24.0);
    };
    auto solar_at = [&](double hour) {
        return (hour >= 7.0 && hour < 19.0) ? spec.solar_amplitude * std::sin(std::numbers::pi * (hour - 7.0) / 12.0)
                                            : 0.0;
    };

    const double hour0 = static_cast<double>(local_seconds_of_day(start, spec.offset)) / 3600.0;
    const double drive0 = ambient_at(hour0) + solar_at(hour0);
    Lag wall(drive0, wall_lag, dt), window(drive0, window_lag, dt);
    double indoor = ambient_at(hour0) + spec.indoor_free_offset;
    const double cool_alpha = 1.0 - std::exp(-dt / cooling_lag);
    const double warm_alpha = 1.0 - std::exp(-dt / warming_lag);

    out.truth.indoor_states.start = start;
    out.truth.indoor_states.step = spec.step;
    out.truth.indoor_states.states.assign(n, State::off);
    std::vector<double> prev_square(spec.ac_units.size(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const Instant t = start + static_cast<std::int64_t>(i) * spec.step;
        const double hour = static_cast<double>(local_seconds_of_day(t, spec.offset)) / 3600.0;
        const double ambient = ambient_at(hour);
        const double solar = solar_at(hour);
        double flicker = 0.0;
        if (spec.solar_amplitude > 0.0 && spec.solar_flicker > 0.0) {
            double f = 0.0;
            for (const auto& tone : tones)
                f += std::sin(2.0 * std::numbers::pi * static_cast<double>(t.seconds) / tone.period + tone.phase);
            flicker = spec.solar_flicker * (solar / spec.solar_amplitude) * f / 2.0;
        }
        const double drive = ambient + solar + flicker;
        const double free = ambient + spec.indoor_free_offset;

        const bool cooling = hvac_on(t) || (!spec.ac_units.empty() && unit_running(0, t));
        indoor += (cooling ? cool_alpha : warm_alpha) * ((cooling ? spec.setpoint : free) - indoor);
        out.truth.indoor_states.states[i] = cooling ? State::on : State::off;

        out.wall.values[i] = wall.step(drive);
        out.window.values[i] = window.step(drive) + spec.window_coupling * (indoor - free);
        out.indoor.values[i] = indoor;

        for (std::size_t k = 0; k < spec.ac_units.size(); ++k) {
            const AcUnitSpec& ac = spec.ac_units[k];
            double square = 0.0;
            for (const auto& u : out.truth.ac_usage[k]) {
                if (t < u.start || t >= u.end) continue;
                const double phase = std::fmod(static_cast<double>(t - u.start), ac.duty_period) / ac.duty_period;
                square = phase < ac.duty_fraction ? ac.duty_amplitude : 0.0;
            }
            // Two-sample smoothing of the compressor square wave.
            const double duty = 0.5 * (square + prev_square[k]);
            prev_square[k] = square;
            out.condensers[k].values[i] = ambient + condenser_solar_gain * solar + flicker + duty;
        }
    }

    if (spec.noise_sigma > 0.0) {
        auto add_noise = [&](TemperatureSeries& s) {
            for (double& v : s.values) v += spec.noise_sigma * gauss(rng);
        };
        add_noise(out.wall);
        add_noise(out.window);
        add_noise(out.indoor);
        for (auto& c : out.condensers) add_noise(c);
    }

    for (std::size_t d = 0; d < spec.days; ++d) {
        const Date day = spec.start_date + std::chrono::days{static_cast<int>(d)};
        const auto& sched = spec.hvac[static_cast<std::size_t>(weekday_index(day))];
        if (!sched) {
            out.truth.idle_days.push_back(day);
            continue;
        }
        out.truth.hvac_days.push_back(day);
        const Instant midnight = local_midnight(day, spec.offset);
        out.truth.events.push_back({midnight + sched->start, EventKind::switch_on, 1.0});
        out.truth.events.push_back({midnight + sched->end, EventKind::switch_off, 1.0});
    }
    return out;
}

// ---------------------------------------------------------------- frames

FrameLayout FrameLayout::standard(const ScenarioSpec& spec) {
    FrameLayout l;
    l.placements.push_back({"wall", "wall", 2, 2, 6, 4});
    l.placements.push_back({"window", "window", 12, 2, 6, 4});
    for (std::size_t k = 0; k < spec.ac_units.size(); ++k) {
        const int col = static_cast<int>(k % 5), row = static_cast<int>(k / 5);
        l.placements.push_back({spec.ac_units[k].name, spec.ac_units[k].name, 2 + 4 * col, 8 + 3 * row, 2, 2});
    }
    l.height = std::max(l.height, 8 + 3 * static_cast<int>((spec.ac_units.size() + 4) / 5) + 1);
    return l;
}

EmitResult emit_frames(const ScenarioOutput& scenario, const FrameLayout& layout, const PlanckConstants& constants,
                       UtcOffset offset, const fs::path& frames_dir, PlanckSign sign) {
    const int w = layout.width, h = layout.height;
    if (w <= 0 || h <= 0) throw LayoutError("frame layout needs positive dimensions");

    // Per-pixel source series; nullptr is background.
    std::vector<const TemperatureSeries*> source(static_cast<std::size_t>(w) * h, nullptr);
    EmitResult result;
    for (const auto& p : layout.placements) {
        const TemperatureSeries* s = nullptr;
        RoiLabel label = RoiLabel::ac_unit;
        if (p.source == "wall") {
            s = &scenario.wall;
            label = RoiLabel::wall;
        } else if (p.source == "window") {
            s = &scenario.window;
            label = RoiLabel::window;
        } else {
            for (const auto& c : scenario.condensers)
                if (c.roi_name == p.source) s = &c;
        }
        if (!s) throw LayoutError(fmt::format("placement '{}': unknown source '{}'", p.roi_name, p.source));
        if (p.w <= 0 || p.h <= 0 || p.x < 0 || p.y < 0 || p.x + p.w > w || p.y + p.h > h)
            throw LayoutError(fmt::format("placement '{}' does not fit the {}x{} frame", p.roi_name, w, h));
        for (int y = p.y; y < p.y + p.h; ++y)
            for (int x = p.x; x < p.x + p.w; ++x) {
                auto& slot = source[static_cast<std::size_t>(y) * w + x];
                if (slot) throw LayoutError(fmt::format("placement '{}' overlaps another roi at ({}, {})", p.roi_name, x, y));
                slot = s;
            }
        const double x0 = p.x, y0 = p.y, x1 = p.x + p.w, y1 = p.y + p.h;
        result.rois.push_back({p.roi_name, layout.scene_id, label, {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}});
    }

    const fs::path dir = frames_dir / layout.scene_id;
    fs::create_directories(dir);
    const std::size_t n = scenario.wall.size();
    ThermalFrame frame;
    frame.scene_id = layout.scene_id;
    frame.width = w;
    frame.height = h;
    frame.counts.resize(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < n; ++i) {
        frame.timestamp = scenario.wall.time_at(i);
        const bool washout = layout.washout_every > 0 && (i + 1) % layout.washout_every == 0;
        const double base = scenario.wall.values[i];
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const std::size_t px = static_cast<std::size_t>(y) * w + x;
                double kelvin = base;
                if (washout) {
                    kelvin = base;
                } else if (source[px]) {
                    kelvin = source[px]->values[i];
                } else {
                    kelvin = base + layout.background_contrast * ((x + 0.5) / w - 0.5) +
                             0.5 * layout.background_contrast * ((y + 0.5) / h - 0.5);
                }
                frame.counts[px] = temperature_to_counts(kelvin, constants, sign);
            }
        }
        if (washout) result.washed_out.push_back(frame.timestamp);
        write_frame_file(dir / frame_file_name(frame.timestamp, offset), frame);
        ++result.frames_written;
    }
    return result;
}

}  // namespace irhvac
