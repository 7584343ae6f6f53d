#include "gotl/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

namespace gotl {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return in;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  double v = 0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ConfigError("invalid number for " + what + ": '" + raw + "'");
  return v;
}

long long parse_int(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("invalid integer for " + what + ": '" + raw + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("invalid seed for " + what + ": '" + raw + "'");
  return v;
}

// Tracks which keys of the flat config were consumed so leftovers can be
// reported as unknown.
class KvReader {
 public:
  explicit KvReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool take(const std::string& key, std::string* out) {
    auto it = kv_.find(key);
    if (it == kv_.end()) return false;
    used_.insert(key);
    *out = trim(it->second);
    return true;
  }
  bool take(const std::string& key, double* out) {
    std::string s;
    if (!take(key, &s)) return false;
    *out = parse_double(s, key);
    return true;
  }
  bool take(const std::string& key, int* out) {
    std::string s;
    if (!take(key, &s)) return false;
    *out = static_cast<int>(parse_int(s, key));
    return true;
  }
  bool take(const std::string& key, std::uint64_t* out) {
    std::string s;
    if (!take(key, &s)) return false;
    *out = parse_u64(s, key);
    return true;
  }
  bool take_list(const std::string& key, std::vector<double>* out) {
    std::string s;
    if (!take(key, &s)) return false;
    out->clear();
    for (const auto& item : split(s, ',')) out->push_back(parse_double(item, key));
    return true;
  }
  bool take_list(const std::string& key, std::vector<int>* out) {
    std::string s;
    if (!take(key, &s)) return false;
    out->clear();
    for (const auto& item : split(s, ','))
      out->push_back(static_cast<int>(parse_int(item, key)));
    return true;
  }

  void fail_on_unused() const {
    for (const auto& [key, value] : kv_)
      if (!used_.count(key)) throw ConfigError("unknown config key: " + key);
  }

 private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

void read_scenario(KvReader& kv, const std::string& prefix, ScenarioSpec* spec) {
  kv.take(prefix + "weather", &spec->weather);
  kv.take(prefix + "occupancy", &spec->occupancy);
  kv.take(prefix + "flow_max", &spec->flow_max);
  kv.take(prefix + "noise_sd", &spec->noise_sd);
  kv.take(prefix + "weather_seed", &spec->weather_seed);
  kv.take(prefix + "occupancy_seed", &spec->occupancy_seed);
  kv.take(prefix + "noise_seed", &spec->noise_seed);
  kv.take(prefix + "house.size_factor", &spec->house.size_factor);
  kv.take(prefix + "house.thermal_capacitance", &spec->house.thermal_capacitance);
  kv.take(prefix + "house.envelope_conductance", &spec->house.envelope_conductance);
  kv.take(prefix + "house.radiant_effectiveness", &spec->house.radiant_effectiveness);
  kv.take(prefix + "house.solar_aperture", &spec->house.solar_aperture);
  kv.take(prefix + "house.internal_gain_per_person",
          &spec->house.internal_gain_per_person);
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw NumericalError("number formatting failed");
  return std::string(buf, ptr);
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto out = open_output(path);
  const int m = data.input_dim();
  out << "t,y";
  for (int j = 1; j <= m; ++j) out << ",u" << j;
  out << "\n";
  for (const auto& rec : data.records) {
    out << rec.time_index << ',' << format_number(rec.output);
    for (double u : rec.inputs) out << ',' << format_number(u);
    out << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

Dataset read_dataset_csv(const std::string& path, const std::string& domain_id) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty dataset file: " + path);
  const auto header = split(trim(line), ',');
  if (header.size() < 3 || header[0] != "t" || header[1] != "y")
    throw ConfigError("bad dataset header in " + path);
  const std::size_t m = header.size() - 2;
  Dataset data;
  data.domain_id = domain_id.empty() ? path : domain_id;
  while (std::getline(in, line)) {
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto cells = split(row, ',');
    if (cells.size() != header.size())
      throw ConfigError("dataset row width mismatch in " + path);
    SampleRecord rec;
    rec.time_index = parse_int(cells[0], "t");
    rec.output = parse_double(cells[1], "y");
    rec.inputs.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
      rec.inputs.push_back(parse_double(cells[2 + j], header[2 + j]));
    data.records.push_back(std::move(rec));
  }
  return data;
}

void save_linear_model(const std::string& path, const LinearModel& model, int ell,
                       int input_channels) {
  if (model.coefficients.size() != feature_dim(ell, input_channels))
    throw ConfigError("coefficient count does not match the declared layout");
  auto out = open_output(path);
  out << "ell,input_channels\n" << ell << ',' << input_channels << "\n";
  out << "index,coefficient\n";
  for (int i = 0; i < model.coefficients.size(); ++i)
    out << i << ',' << format_number(model.coefficients[i]) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

LinearModel load_linear_model(const std::string& path, int* ell, int* input_channels) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ell,input_channels")
    throw ConfigError("bad model header in " + path);
  if (!std::getline(in, line)) throw ConfigError("truncated model file: " + path);
  const auto layout = split(trim(line), ',');
  if (layout.size() != 2) throw ConfigError("bad model layout line in " + path);
  const int l = static_cast<int>(parse_int(layout[0], "ell"));
  const int c = static_cast<int>(parse_int(layout[1], "input_channels"));
  if (!std::getline(in, line) || trim(line) != "index,coefficient")
    throw ConfigError("bad coefficient header in " + path);
  std::vector<double> coefs;
  while (std::getline(in, line)) {
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto cells = split(row, ',');
    if (cells.size() != 2) throw ConfigError("bad coefficient row in " + path);
    if (parse_int(cells[0], "index") != static_cast<long long>(coefs.size()))
      throw ConfigError("coefficient rows out of order in " + path);
    coefs.push_back(parse_double(cells[1], "coefficient"));
  }
  if (static_cast<int>(coefs.size()) != feature_dim(l, c))
    throw ConfigError("coefficient count does not match the layout in " + path);
  LinearModel model;
  model.coefficients = Eigen::Map<const Eigen::VectorXd>(coefs.data(), coefs.size());
  if (ell) *ell = l;
  if (input_channels) *input_channels = c;
  return model;
}

void save_tca_model(const std::string& path, const TcaModel& model) {
  auto out = open_output(path);
  const int n = static_cast<int>(model.training_points.rows());
  const int d = static_cast<int>(model.training_points.cols());
  out << "section,values\n";
  out << "meta," << model.components << ',' << format_number(model.mu) << ','
      << model.kernel << ',' << n << ',' << d << "\n";
  auto write_row = [&](const char* tag, const auto& row) {
    out << tag;
    for (int j = 0; j < row.size(); ++j) out << ',' << format_number(row[j]);
    out << "\n";
  };
  write_row("mean", model.mean);
  write_row("sd", model.sd);
  for (int i = 0; i < n; ++i) write_row("point", model.training_points.row(i));
  for (int i = 0; i < n; ++i) write_row("projection", model.projection.row(i));
  if (!out) throw ConfigError("write failed: " + path);
}

TcaModel load_tca_model(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "section,values")
    throw ConfigError("bad bundle header in " + path);
  TcaModel model;
  int n = -1, d = -1;
  std::vector<std::vector<double>> points, projections;
  while (std::getline(in, line)) {
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto cells = split(row, ',');
    const std::string& tag = cells[0];
    auto numbers = [&](std::size_t from) {
      std::vector<double> v;
      for (std::size_t j = from; j < cells.size(); ++j)
        v.push_back(parse_double(cells[j], tag));
      return v;
    };
    if (tag == "meta") {
      if (cells.size() != 6) throw ConfigError("bad meta line in " + path);
      model.components = static_cast<int>(parse_int(cells[1], "components"));
      model.mu = parse_double(cells[2], "mu");
      model.kernel = trim(cells[3]);
      n = static_cast<int>(parse_int(cells[4], "points"));
      d = static_cast<int>(parse_int(cells[5], "dim"));
    } else if (tag == "mean") {
      const auto v = numbers(1);
      model.mean = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    } else if (tag == "sd") {
      const auto v = numbers(1);
      model.sd = Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
    } else if (tag == "point") {
      points.push_back(numbers(1));
    } else if (tag == "projection") {
      projections.push_back(numbers(1));
    } else {
      throw ConfigError("unknown section '" + tag + "' in " + path);
    }
  }
  if (n < 0 || static_cast<int>(points.size()) != n ||
      static_cast<int>(projections.size()) != n)
    throw ConfigError("inconsistent bundle in " + path);
  model.training_points.resize(n, d);
  model.projection.resize(n, model.components);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(points[i].size()) != d ||
        static_cast<int>(projections[i].size()) != model.components)
      throw ConfigError("inconsistent bundle row width in " + path);
    for (int j = 0; j < d; ++j) model.training_points(i, j) = points[i][j];
    for (int j = 0; j < model.components; ++j) model.projection(i, j) = projections[i][j];
  }
  return model;
}

void write_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  auto out = open_output(path);
  const std::size_t singles = rows.empty() ? 0 : rows.front().rmse_singles.size();
  out << "k,rmse_source,rmse_target,rmse_gotl,rmse_ensemble,"
         "ewma_source,ewma_target,ewma_gotl,ewma_ensemble,alpha";
  for (std::size_t j = 1; j <= singles; ++j) out << ",rmse_source" << j;
  for (std::size_t j = 1; j <= singles; ++j) out << ",ewma_source" << j;
  out << "\n";
  for (const auto& r : rows) {
    out << r.k << ',' << format_number(r.rmse_source) << ','
        << format_number(r.rmse_target) << ',' << format_number(r.rmse_gotl) << ','
        << format_number(r.rmse_ensemble) << ',' << format_number(r.ewma_source) << ','
        << format_number(r.ewma_target) << ',' << format_number(r.ewma_gotl) << ','
        << format_number(r.ewma_ensemble) << ',' << format_number(r.alpha);
    for (double v : r.rmse_singles) out << ',' << format_number(v);
    for (double v : r.ewma_singles) out << ',' << format_number(v);
    out << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

void write_weight_log_csv(const std::string& path,
                          const std::vector<IntervalLogRow>& rows) {
  auto out = open_output(path);
  out << "k,alpha,R_target,R_source,R_combined,rmse_interval\n";
  for (const auto& r : rows)
    out << r.k << ',' << format_number(r.alpha) << ',' << format_number(r.r_target)
        << ',' << format_number(r.r_source) << ',' << format_number(r.r_combined)
        << ',' << format_number(r.rmse_interval) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

void write_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows) {
  auto out = open_output(path);
  out << "t,flow,zone_temp,comfort_cum,heating_cum_kwh,pump_cum_kwh,alpha\n";
  for (const auto& r : rows)
    out << r.t << ',' << format_number(r.flow) << ',' << format_number(r.zone_temp)
        << ',' << format_number(r.comfort_cum) << ',' << format_number(r.heating_cum_kwh)
        << ',' << format_number(r.pump_cum_kwh) << ',' << format_number(r.alpha) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

void write_curve_csv(const std::string& path, const std::vector<CurvePoint>& points) {
  auto out = open_output(path);
  out << "kappa,comfort,heating\n";
  for (const auto& p : points)
    out << format_number(p.kappa) << ',' << format_number(p.comfort) << ','
        << format_number(p.heating_kwh) << "\n";
  if (!out) throw ConfigError("write failed: " + path);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  auto in = open_input(path);
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string row = trim(line);
    if (row.empty()) continue;
    const std::size_t eq = row.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(row.substr(0, eq));
    const std::string value = trim(row.substr(eq + 1));
    if (key.empty())
      throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate key " + key);
  }
  return kv;
}

ExperimentConfig parse_experiment_config(const std::map<std::string, std::string>& kv) {
  KvReader reader(kv);
  ExperimentConfig config;
  reader.take("experiment_id", &config.experiment_id);

  const bool multi = config.experiment_id == "exp4";
  if (multi) {
    config.sources.resize(2);
    read_scenario(reader, "source1.", &config.sources[0]);
    read_scenario(reader, "source2.", &config.sources[1]);
  } else {
    config.sources.resize(1);
    read_scenario(reader, "source.", &config.sources[0]);
  }
  read_scenario(reader, "target.", &config.target);

  reader.take("source_days", &config.source_days);
  reader.take("target_days", &config.target_days);
  reader.take("ell", &config.ell);
  reader.take("rls_forgetting", &config.rls_forgetting);
  reader.take("rls_p0", &config.rls_p0);
  reader.take("source_ridge", &config.source_ridge);
  reader.take("gotl_delta", &config.gotl_delta);
  reader.take("gotl_discount", &config.gotl_discount);
  reader.take("gotl_retention", &config.gotl_retention);
  reader.take("initial_alpha", &config.initial_alpha);
  reader.take("interval_steps", &config.interval_steps);
  reader.take("ewma_smoothing", &config.ewma_smoothing);
  reader.take("tca_mu", &config.tca_mu);
  reader.take("tca_components", &config.tca_components);
  reader.take_list("tca_grid", &config.tca_grid);
  reader.take("tca_landmark_cap", &config.tca_landmark_cap);
  reader.take_list("kappa_list", &config.kappa_list);
  reader.take("mpc_days", &config.mpc_days);
  reader.take("mpc_horizon", &config.mpc_horizon);
  reader.take("mpc_reopt", &config.mpc_reopt);
  reader.take("mpc_interval_steps", &config.mpc_interval_steps);
  reader.take("mpc_retention", &config.mpc_retention);
  reader.take("mpc_warmup_steps", &config.mpc_warmup_steps);
  reader.take("mpc_noise_sd", &config.mpc_noise_sd);
  reader.take("mpc_noise_seed", &config.mpc_noise_seed);

  reader.fail_on_unused();
  config.validate();
  return config;
}

ScenarioFileConfig parse_scenario_config(const std::map<std::string, std::string>& kv) {
  KvReader reader(kv);
  ScenarioFileConfig out;
  read_scenario(reader, "", &out.scenario);
  reader.take("days", &out.days);
  reader.take("scenario_id", &out.scenario_id);
  reader.fail_on_unused();
  if (out.days < 1) throw ConfigError("days must be >= 1");
  out.scenario.house.validate();
  if (out.scenario.flow_max <= 0 || out.scenario.noise_sd < 0)
    throw ConfigError("scenario flow/noise out of range");
  return out;
}

}  // namespace gotl
