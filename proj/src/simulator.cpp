#include "gotl/simulator.hpp"

#include <cmath>

namespace gotl {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void HouseConfig::validate() const {
  if (thermal_capacitance <= 0 || envelope_conductance <= 0 || size_factor <= 0 ||
      solar_aperture <= 0 || internal_gain_per_person <= 0)
    throw ConfigError("house parameters must be positive");
  if (radiant_effectiveness <= 0 || radiant_effectiveness > 1)
    throw ConfigError("radiant_effectiveness must be in (0,1]");
}

StepResult step_zone(const HouseConfig& config, const ZoneState& state,
                     const ControlAction& action, const Disturbances& dist,
                     double dt_h) {
  if (dt_h <= 0) throw ConfigError("dt must be positive");
  const double tz = state.zone_temp, tw = state.wall_temp;
  const double q = config.radiant_effectiveness * kWaterSpecificHeat * action.water_flow *
                   (action.inlet_temp - tz);  // kW
  const double gains = config.solar_aperture * dist.solar_gain +
                       config.internal_gain_per_person * dist.occupancy;
  const double dtz = (q + gains - config.zone_wall_conductance() * (tz - tw) -
                      config.vent_conductance() * (tz - dist.outdoor_temp)) *
                     dt_h / config.zone_capacitance();
  const double dtw = (config.zone_wall_conductance() * (tz - tw) -
                      config.wall_out_conductance() * (tw - dist.outdoor_temp)) *
                     dt_h / config.wall_capacitance();
  StepResult r;
  r.state.zone_temp = tz + dtz;
  r.state.wall_temp = tw + dtw;
  r.state.time_index = state.time_index + 1;
  r.outlet_temp = action.water_flow > 0
                      ? action.inlet_temp - q / (kWaterSpecificHeat * action.water_flow)
                      : action.inlet_temp;
  r.heat_delivered_kwh = q * dt_h;
  if (!(r.state.zone_temp > -30 && r.state.zone_temp < 60) ||
      !(r.state.wall_temp > -30 && r.state.wall_temp < 60))
    throw NumericalError("simulation diverged outside the [-30,60] degC sanity band");
  return r;
}

std::vector<Disturbances> generate_weather(const std::string& profile, int days,
                                           std::uint64_t seed) {
  if (days < 1) throw ConfigError("days must be >= 1");
  double mean, seas, damp, smax, rise, sset;
  if (profile == "mild-site") {
    mean = 5.0; seas = 3.0; damp = 4.0; smax = 1.2; rise = 8.0; sset = 17.0;
  } else if (profile == "cold-site") {
    mean = 0.0; seas = 3.0; damp = 5.0; smax = 0.9; rise = 8.5; sset = 16.5;
  } else {
    throw ConfigError("unknown weather profile: " + profile);
  }
  const int n = days * 48;
  Rng rng(seed);
  std::vector<Disturbances> out(n);
  double ar = 0.0, arc = 0.0;
  const double rho = 0.97, sig = 1.5 * std::sqrt(1.0 - rho * rho);
  for (int t = 0; t < n; ++t) {
    const double h = (t % 48) * 0.5;
    const double frac = static_cast<double>(t) / n;
    // monotone seasonal drift into the heating season plus a daily cycle
    const double base = mean - seas * std::sin(0.5 * kPi * frac) +
                        damp * std::cos(2.0 * kPi * (h - 15.0) / 24.0);
    ar = rho * ar + sig * rng.gauss();
    out[t].outdoor_temp = base + ar;
    arc = 0.9 * arc + std::sqrt(1.0 - 0.81) * rng.gauss();
    if (h > rise && h < sset) {
      double cloud = 0.75 + 0.25 * arc;
      if (cloud < 0.15) cloud = 0.15;
      if (cloud > 1.0) cloud = 1.0;
      out[t].solar_gain = smax * std::sin(kPi * (h - rise) / (sset - rise)) * cloud;
    }
  }
  return out;
}

std::vector<Disturbances> generate_occupancy(const std::string& pattern, int days,
                                             std::uint64_t seed,
                                             std::vector<Disturbances> base) {
  if (days < 1) throw ConfigError("days must be >= 1");
  int tag_offset;
  if (pattern == "workweek") tag_offset = 0;
  else if (pattern == "homebody") tag_offset = 1;
  else if (pattern == "shiftwork") tag_offset = 2;
  else throw ConfigError("unknown occupancy pattern: " + pattern);
  const int n = days * 48;
  if (static_cast<int>(base.size()) < n) base.resize(n);
  Rng rng(seed + tag_offset);
  for (int d = 0; d < days; ++d) {
    const int dow = d % 7;
    const int jit = static_cast<int>(rng.uniform() * 3.0) - 1;  // -1, 0, +1 half-steps
    for (int s = 0; s < 48; ++s) {
      const double h = s * 0.5;
      const int t = d * 48 + s;
      int occ = 0;
      if (pattern == "workweek") {
        bool home;
        if (dow < 5) home = !(h >= 8.0 + 0.5 * jit && h < 17.0 + 0.5 * jit);
        else home = !(h >= 13.0 && h < 16.0 && rng.uniform() < 0.01);
        occ = home ? 2 : 0;
      } else if (pattern == "homebody") {
        const bool away = (h >= 10.0 + 0.5 * jit && h < 12.0 + 0.5 * jit) && (dow == 1 || dow == 4);
        occ = away ? 0 : 1;
        if (h >= 18.0 && (dow == 5 || dow == 6)) occ = 2;
      } else {  // shiftwork: away nights on weekdays, home from 10:00 weekends
        bool home;
        if (dow < 5) home = !(h >= 20.0 + 0.5 * jit || h < 6.0 + 0.5 * jit);
        else home = h >= 10.0;
        occ = home ? 1 : 0;
      }
      base[t].occupancy = occ;
      base[t].presence_flag = occ > 0;
    }
  }
  return base;
}

ControlAction HysteresisController::act(double zone_temp) {
  if (zone_temp < setpoint_ - band_) on_ = true;
  else if (zone_temp > setpoint_ + band_) on_ = false;
  ControlAction a;
  a.water_flow = on_ ? flow_max_ : 0.0;
  a.inlet_temp = inlet_;
  return a;
}

Dataset run_scenario(const HouseConfig& config, const ControllerFn& controller,
                     const std::vector<Disturbances>& conditions, int days,
                     double sensor_noise_sd, std::uint64_t noise_seed,
                     const std::string& domain_id) {
  config.validate();
  const int n = days * 48;
  if (static_cast<int>(conditions.size()) < n)
    throw ConfigError("conditions sequence shorter than the requested run");
  Rng noise(noise_seed);
  ZoneState st;
  Dataset data;
  data.domain_id = domain_id;
  data.records.reserve(n);
  for (int t = 0; t < n; ++t) {
    const double measured =
        st.zone_temp + (sensor_noise_sd > 0 ? sensor_noise_sd * noise.gauss() : 0.0);
    ControlAction a = controller(t, measured);
    SampleRecord rec;
    rec.time_index = t;
    rec.output = measured;
    rec.inputs = {a.water_flow, a.inlet_temp, conditions[t].outdoor_temp,
                  conditions[t].solar_gain, static_cast<double>(conditions[t].occupancy)};
    data.records.push_back(std::move(rec));
    StepResult r = step_zone(config, st, a, conditions[t], kSamplingHours);
    st = r.state;
  }
  return data;
}

}  // namespace gotl
