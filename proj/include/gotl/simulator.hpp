#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gotl/core.hpp"

namespace gotl {

constexpr double kWaterSpecificHeat = 4.186;  // kJ/kg degC == kW/(kg/s degC)
constexpr double kSamplingHours = 0.5;

// Lumped-parameter house. The capacitance/conductance pair is split internally
// into a two-node (zone + wall) network; size_factor scales both together.
struct HouseConfig {
  double thermal_capacitance = 2.5;       // kWh/degC, zone node
  double envelope_conductance = 0.12;     // kW/degC, base envelope value
  double radiant_effectiveness = 0.6;     // heat-exchanger effectiveness of the radiator
  double solar_aperture = 0.5;            // fraction of solar gain entering the zone
  double internal_gain_per_person = 0.12; // kW
  double size_factor = 1.0;

  double zone_capacitance() const { return thermal_capacitance * size_factor; }
  double wall_capacitance() const { return 3.0 * thermal_capacitance * size_factor; }
  double zone_wall_conductance() const { return 3.0 * envelope_conductance * size_factor; }
  double wall_out_conductance() const { return 1.5 * envelope_conductance * size_factor; }
  double vent_conductance() const { return 0.2 * envelope_conductance * size_factor; }

  void validate() const;
};

struct ZoneState {
  double zone_temp = 21.0;
  double wall_temp = 18.0;
  long long time_index = 0;
};

struct Disturbances {
  double outdoor_temp = 0.0;
  double solar_gain = 0.0;  // kW
  int occupancy = 0;
  bool presence_flag = false;
};

struct ControlAction {
  double water_flow = 0.0;   // kg/s
  double inlet_temp = 45.0;  // degC
};

struct StepResult {
  ZoneState state;
  double outlet_temp = 0.0;
  double heat_delivered_kwh = 0.0;
};

// Forward-Euler advance of the two-node thermal network by dt_h hours.
StepResult step_zone(const HouseConfig& config, const ZoneState& state,
                     const ControlAction& action, const Disturbances& dist,
                     double dt_h);

// Seeded weather generator; presets "mild-site" and "cold-site" differ in mean
// temperature, seasonal drift and solar strength. Occupancy fields are zero.
std::vector<Disturbances> generate_weather(const std::string& profile, int days,
                                           std::uint64_t seed);

// Seeded weekly occupancy schedule; tags "workweek", "homebody", "shiftwork".
// Fills occupancy/presence_flag on a copy of the weather sequence.
std::vector<Disturbances> generate_occupancy(const std::string& pattern, int days,
                                             std::uint64_t seed,
                                             std::vector<Disturbances> base);

// On/off thermostat with a deadband; holds its previous action inside the band.
class HysteresisController {
public:
  HysteresisController(double setpoint, double band, double flow_max,
                       double inlet_temp = 45.0)
      : setpoint_(setpoint), band_(band), flow_max_(flow_max), inlet_(inlet_temp) {}

  ControlAction act(double zone_temp);

private:
  double setpoint_, band_, flow_max_, inlet_;
  bool on_ = false;
};

// Controller callback: measured zone temperature -> action for this step.
using ControllerFn = std::function<ControlAction(long long t, double measured_temp)>;

// Closed-loop simulation at the 0.5 h sampling period. The logged output is
// the measured temperature: the true state plus optional sensor noise drawn
// from noise_seed; the plant itself always advances from the true state.
Dataset run_scenario(const HouseConfig& config, const ControllerFn& controller,
                     const std::vector<Disturbances>& conditions, int days,
                     double sensor_noise_sd = 0.0, std::uint64_t noise_seed = 0,
                     const std::string& domain_id = "scenario");

}  // namespace gotl
