#include "sarsim/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "sarsim/errors.hpp"
#include "sarsim/raster_io.hpp"

namespace sarsim {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// Reads one JSON object, tracking which keys were consumed so leftovers can be
// reported as unknown fields.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("expected true/false");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("expected a string");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("expected a number");
      } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("expected an integer");
      } else {
        if (!v.is_array()) throw ConfigError("expected an array");
        using E = typename T::value_type;
        for (const auto& e : v) {
          if constexpr (std::is_floating_point_v<E>) {
            if (!e.is_number()) throw ConfigError("expected numbers");
          } else if constexpr (std::is_unsigned_v<E>) {
            if (!e.is_number_unsigned()) throw ConfigError("expected non-negative integers");
          } else {
            if (!e.is_number_integer()) throw ConfigError("expected integers");
          }
        }
      }
      out = v.get<T>();
    } catch (const ConfigError& e) {
      throw ConfigError(where(key) + ": " + e.what());
    }
  }

  // Nullable number: null clears the optional.
  void get_optional(const std::string& key, std::optional<double>& out) {
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      seen_.insert(key);
      out.reset();
      return;
    }
    double v = 0.0;
    get(key, v);
    out = v;
  }

  // Angle given in degrees, stored in radians.
  void get_degrees(const std::string& key, double& radians) {
    if (!j_.contains(key)) return;
    double deg = radians / kDeg;
    get(key, deg);
    radians = deg * kDeg;
  }

  ObjectReader child(const std::string& key) {
    seen_.insert(key);
    return ObjectReader(j_.at(key), where(key));
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? std::string("config") : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + ": unknown field");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string look_model_name(LookModel m) {
  return m == LookModel::kTrigamma ? "trigamma" : "moment-matched";
}

LookModel look_model_by_name(const std::string& name) {
  if (name == "moment-matched") return LookModel::kMomentMatched;
  if (name == "trigamma") return LookModel::kTrigamma;
  throw ConfigError("unknown look model '" + name + "' (moment-matched, trigamma)");
}

std::string report_format_name(ReportFormat f) {
  switch (f) {
    case ReportFormat::kText: return "text";
    case ReportFormat::kCsv: return "csv";
    case ReportFormat::kBoth: return "both";
  }
  return "both";
}

ReportFormat report_format_by_name(const std::string& name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "both") return ReportFormat::kBoth;
  throw ConfigError("unknown report format '" + name + "' (text, csv, both)");
}

json method_to_json(const MethodConfig& m) {
  const ProxParams& p = m.spec.params;
  json j;
  j["regulariser"] = regulariser_name(m.spec.kind);
  j["gamma"] = p.gamma ? json(*p.gamma) : json(nullptr);
  j["gamma_scale"] = p.gamma_scale;
  j["omega"] = p.omega ? json(*p.omega) : json(nullptr);
  j["lambda"] = p.lambda;
  j["max_iter"] = p.max_iter;
  j["tol"] = p.tol;
  j["tv_inner_iter"] = p.tv_inner_iter;
  j["tune"] = m.tune;
  return j;
}

MethodConfig method_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  std::string name;
  if (!r.has("regulariser")) throw ConfigError(r.where("regulariser") + ": required");
  r.get("regulariser", name);
  MethodConfig m;
  try {
    m.spec.kind = regulariser_by_name(name);
  } catch (const ConfigError& e) {
    throw ConfigError(r.where("regulariser") + ": " + e.what());
  }
  // Defaults for this kind come from the built-in method list.
  for (const MethodConfig& d : default_methods()) {
    if (d.spec.kind == m.spec.kind) m = d;
  }
  ProxParams& p = m.spec.params;
  r.get_optional("gamma", p.gamma);
  r.get("gamma_scale", p.gamma_scale);
  r.get_optional("omega", p.omega);
  r.get("lambda", p.lambda);
  r.get("max_iter", p.max_iter);
  r.get("tol", p.tol);
  r.get("tv_inner_iter", p.tv_inner_iter);
  r.get("tune", m.tune);
  r.finish();
  return m;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string row_label(const std::string& method) {
  if (method == "noisy") return "Noisy";
  if (method == "l1") return "L1";
  if (method == "tv") return "TV";
  if (method == "cauchy") return "Cauchy";
  return method;
}

void write_tables(const ResultsTable& table, const fs::path& dir, ReportFormat format) {
  if (format != ReportFormat::kCsv) write_text(dir / "results.txt", format_table_text(table));
  if (format != ReportFormat::kText) write_text(dir / "results.csv", format_table_delimited(table));
}

json reports_to_json(const std::vector<SubbandReport>& reports) {
  json arr = json::array();
  for (const SubbandReport& s : reports) {
    json r;
    r["level"] = s.level;
    r["orientation"] = s.orientation;
    r["iterations"] = s.fb.iterations;
    r["converged"] = s.fb.converged;
    r["final_change"] = s.fb.final_change;
    r["final_objective"] = s.fb.objective.empty() ? 0.0 : s.fb.objective.back();
    r["gamma"] = s.fb.gamma;
    r["omega"] = s.fb.omega;
    r["omega_clamped"] = s.fb.omega_clamped;
    r["divergence_warning"] = s.fb.divergence_warning;
    arr.push_back(r);
  }
  return arr;
}

double strength_of(const RegulariserSpec& reg) {
  return reg.kind == Regulariser::kCauchy ? reg.params.gamma_scale : reg.params.lambda;
}

int looks_from_metadata(const IntensityImage& image) {
  const auto it = image.metadata.find("speckle.looks");
  if (it == image.metadata.end()) return 0;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw StructuralError("metadata speckle.looks is not an integer: " + it->second);
  }
}

}  // namespace

Scale scale_by_name(const std::string& name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "paper") return Scale::kPaper;
  throw ConfigError("unknown scale '" + name + "' (desk, paper)");
}

std::string scale_name(Scale s) { return s == Scale::kPaper ? "paper" : "desk"; }

GridSpec SceneConfig::grid() const {
  const double n = std::round(extent / facet);
  GridSpec g;
  g.nx = g.ny = static_cast<std::size_t>(std::max(n, 0.0));
  g.dx = g.dy = facet;
  return g;
}

namespace {

std::size_t margin_pixels(const SceneConfig& scene, double azimuth_resolution) {
  return static_cast<std::size_t>(std::llround(scene.azimuth_margin / azimuth_resolution));
}

}  // namespace

GridSpec SceneConfig::render_grid(double azimuth_resolution) const {
  GridSpec g = grid();
  const std::size_t block =
      static_cast<std::size_t>(std::max(1LL, std::llround(azimuth_resolution / facet)));
  const std::size_t pad = margin_pixels(*this, azimuth_resolution) * block;
  g.nx += 2 * pad;
  g.origin_x -= static_cast<double>(pad) * g.dx;
  return g;
}

SpectrumParams SceneConfig::spectrum() const {
  return SpectrumParams::make(wind_speed, wind_direction, inverse_wave_age, ship.gravity);
}

ShipPlacement SceneConfig::placement() const {
  const double fx = bow_x_fraction.value_or(0.5 + 0.3 * std::cos(ship.heading));
  const double fy = bow_y_fraction.value_or(0.5 + 0.3 * std::sin(ship.heading));
  return {fx * extent, fy * extent};
}

namespace {

// Quarter-octave ladder from lo to hi inclusive.
std::vector<double> ladder(double lo, double hi) {
  std::vector<double> out;
  for (int n = 0;; ++n) {
    const double v = lo * std::exp2(0.25 * n);
    if (v > hi * (1.0 + 1e-9)) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<MethodConfig> default_methods() {
  std::vector<MethodConfig> out(3);
  out[0].spec.kind = Regulariser::kL1;
  out[0].spec.params.lambda = 0.3;
  out[0].tune = ladder(0.05, 0.8);
  out[1].spec.kind = Regulariser::kTV;
  out[1].spec.params.lambda = 0.15;
  out[1].tune = ladder(0.025, 0.4);
  out[2].spec.kind = Regulariser::kCauchy;
  out[2].spec.params.gamma_scale = 1.0;
  out[2].tune = ladder(0.5, 16.0);
  return out;
}

ExperimentConfig default_config(Scale scale) {
  ExperimentConfig c;
  c.scale = scale;
  c.scene.extent = scale == Scale::kPaper ? 512.0 : 256.0;
  c.despeckle.methods = default_methods();
  return c;
}

void ExperimentConfig::validate() const {
  auto field = [](const std::string& name, auto&& check) {
    try {
      check();
    } catch (const ConfigError& e) {
      throw ConfigError(name + ": " + e.what());
    }
  };
  field("scene", [&] {
    if (!(scene.extent > 0.0) || !(scene.facet > 0.0)) {
      throw ConfigError("extent and facet must be positive");
    }
    const double n = scene.extent / scene.facet;
    if (std::abs(n - std::round(n)) > 1e-9 * n) {
      throw ConfigError("extent must be a whole number of facets");
    }
    scene.grid().validate();
    (void)scene.spectrum();
    if (scene.sampling.wavenumber_bins < 16 || scene.sampling.direction_bins < 16) {
      throw ConfigError("wavenumber_bins and direction_bins must be >= 16");
    }
    if (!std::isfinite(scene.time)) throw ConfigError("time must be finite");
    if (!(scene.azimuth_margin >= 0.0)) throw ConfigError("azimuth_margin must be >= 0");
  });
  field("scene.ship", [&] {
    if (scene.ship_enabled) scene.ship.validate();
  });
  field("radar", [&] { radar.validate(); });
  field("scattering", [&] {
    if (!(scattering.relaxation_rate > 0.0)) throw ConfigError("relaxation_rate must be positive");
    if (!(scattering.separation_wavenumber >= 0.0)) {
      throw ConfigError("separation_wavenumber must be >= 0");
    }
  });
  field("noise", [&] {
    if (noise.looks.empty()) throw ConfigError("looks must not be empty");
    for (int l : noise.looks) {
      if (l < 1) throw ConfigError("looks must be >= 1");
    }
    if (noise.seeds.empty()) throw ConfigError("seeds must not be empty");
  });
  field("despeckle", [&] {
    if (despeckle.methods.empty()) throw ConfigError("methods must not be empty");
    if (despeckle.options.levels < 1) throw ConfigError("levels must be >= 1");
    (void)Wavelet::by_name(despeckle.options.wavelet);
    const std::size_t block = static_cast<std::size_t>(
        std::llround(radar.azimuth_resolution / scene.facet));
    const std::size_t pixels = block > 0 ? scene.grid().nx / block : 0;
    const std::size_t tile = std::size_t{1} << despeckle.options.levels;
    if (pixels % tile != 0) {
      throw ConfigError("image side " + std::to_string(pixels) + " is not divisible by 2^levels");
    }
    for (const MethodConfig& m : despeckle.methods) {
      const ProxParams& p = m.spec.params;
      if (p.max_iter < 1) throw ConfigError("max_iter must be >= 1");
      if (!(p.tol > 0.0)) throw ConfigError("tol must be positive");
      if (!(p.lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
      if (!(p.gamma_scale > 0.0)) throw ConfigError("gamma_scale must be positive");
      if (p.gamma && !(*p.gamma > 0.0)) throw ConfigError("gamma must be positive");
      if (p.omega && !(*p.omega > 0.0 && *p.omega < 2.0)) {
        throw ConfigError("omega must lie in (0, 2)");
      }
      for (double t : m.tune) {
        if (!(t > 0.0)) throw ConfigError("tune values must be positive");
      }
    }
  });
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ObjectReader root(doc, "");
  std::string scale = "desk";
  root.get("scale", scale);
  ExperimentConfig c = default_config(scale_by_name(scale));

  if (root.has("scene")) {
    ObjectReader s = root.child("scene");
    s.get("wind_speed", c.scene.wind_speed);
    s.get_degrees("wind_direction_deg", c.scene.wind_direction);
    s.get("inverse_wave_age", c.scene.inverse_wave_age);
    s.get("extent", c.scene.extent);
    s.get("facet", c.scene.facet);
    s.get("time", c.scene.time);
    s.get("azimuth_margin", c.scene.azimuth_margin);
    s.get("wavenumber_bins", c.scene.sampling.wavenumber_bins);
    s.get("direction_bins", c.scene.sampling.direction_bins);
    s.get("k_min", c.scene.sampling.k_min);
    s.get("k_max", c.scene.sampling.k_max);
    if (s.has("ship")) {
      ObjectReader sh = s.child("ship");
      sh.get("enabled", c.scene.ship_enabled);
      sh.get("length", c.scene.ship.length);
      sh.get("beam", c.scene.ship.beam);
      sh.get("draft", c.scene.ship.draft);
      sh.get("froude", c.scene.ship.froude);
      sh.get_degrees("heading_deg", c.scene.ship.heading);
      sh.get("gravity", c.scene.ship.gravity);
      sh.get_optional("bow_x_fraction", c.scene.bow_x_fraction);
      sh.get_optional("bow_y_fraction", c.scene.bow_y_fraction);
      sh.finish();
    }
    s.finish();
  }
  if (root.has("radar")) {
    ObjectReader r = root.child("radar");
    r.get("altitude", c.radar.altitude);
    r.get("platform_velocity", c.radar.platform_velocity);
    r.get("carrier_frequency", c.radar.carrier_frequency);
    r.get_degrees("incidence_deg", c.radar.incidence);
    std::string pol = c.radar.polarization == Polarization::kHH ? "HH" : "VV";
    r.get("polarization", pol);
    if (pol == "VV") c.radar.polarization = Polarization::kVV;
    else if (pol == "HH") c.radar.polarization = Polarization::kHH;
    else throw ConfigError(r.where("polarization") + ": expected VV or HH");
    r.get("azimuth_resolution", c.radar.azimuth_resolution);
    r.get("range_resolution", c.radar.range_resolution);
    r.finish();
  }
  if (root.has("scattering")) {
    ObjectReader r = root.child("scattering");
    if (r.has("permittivity")) {
      std::vector<double> eps;
      r.get("permittivity", eps);
      if (eps.size() != 2) throw ConfigError(r.where("permittivity") + ": expected [real, imag]");
      c.scattering.permittivity = {eps[0], eps[1]};
    }
    r.get("relaxation_rate", c.scattering.relaxation_rate);
    r.get("separation_wavenumber", c.scattering.separation_wavenumber);
    r.get("include_tilt_mtf", c.scattering.include_tilt_mtf);
    r.get("velocity_bunching", c.scattering.velocity_bunching);
    r.finish();
  }
  if (root.has("noise")) {
    ObjectReader r = root.child("noise");
    r.get("looks", c.noise.looks);
    r.get("seeds", c.noise.seeds);
    std::string model = look_model_name(c.noise.model);
    r.get("look_model", model);
    try {
      c.noise.model = look_model_by_name(model);
    } catch (const ConfigError& e) {
      throw ConfigError(r.where("look_model") + ": " + e.what());
    }
    r.finish();
  }
  if (root.has("despeckle")) {
    ObjectReader r = root.child("despeckle");
    r.get("levels", c.despeckle.options.levels);
    r.get("wavelet", c.despeckle.options.wavelet);
    std::string boundary = boundary_name(c.despeckle.options.boundary);
    r.get("boundary", boundary);
    try {
      c.despeckle.options.boundary = boundary_by_name(boundary);
    } catch (const ConfigError& e) {
      throw ConfigError(r.where("boundary") + ": " + e.what());
    }
    r.get("log_floor", c.despeckle.options.log_floor);
    if (r.has("methods")) {
      const json& arr = r.raw("methods");
      if (!arr.is_array()) throw ConfigError(r.where("methods") + ": expected an array");
      c.despeckle.methods.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        c.despeckle.methods.push_back(
            method_from_json(arr[i], r.where("methods") + "[" + std::to_string(i) + "]"));
      }
    }
    r.finish();
  }
  std::string out_dir = c.output_dir.string();
  root.get("output_dir", out_dir);
  c.output_dir = out_dir;
  std::string format = report_format_name(c.report_format);
  root.get("report_format", format);
  try {
    c.report_format = report_format_by_name(format);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("report_format: ") + e.what());
  }
  root.finish();
  c.validate();
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

json config_json(const ExperimentConfig& c, bool with_output) {
  json j;
  j["scale"] = scale_name(c.scale);
  json& s = j["scene"];
  s["wind_speed"] = c.scene.wind_speed;
  s["wind_direction_deg"] = c.scene.wind_direction / kDeg;
  s["inverse_wave_age"] = c.scene.inverse_wave_age;
  s["extent"] = c.scene.extent;
  s["facet"] = c.scene.facet;
  s["time"] = c.scene.time;
  s["azimuth_margin"] = c.scene.azimuth_margin;
  s["wavenumber_bins"] = c.scene.sampling.wavenumber_bins;
  s["direction_bins"] = c.scene.sampling.direction_bins;
  s["k_min"] = c.scene.sampling.k_min;
  s["k_max"] = c.scene.sampling.k_max;
  json& sh = s["ship"];
  sh["enabled"] = c.scene.ship_enabled;
  sh["length"] = c.scene.ship.length;
  sh["beam"] = c.scene.ship.beam;
  sh["draft"] = c.scene.ship.draft;
  sh["froude"] = c.scene.ship.froude;
  sh["heading_deg"] = c.scene.ship.heading / kDeg;
  sh["gravity"] = c.scene.ship.gravity;
  sh["bow_x_fraction"] = c.scene.bow_x_fraction ? json(*c.scene.bow_x_fraction) : json(nullptr);
  sh["bow_y_fraction"] = c.scene.bow_y_fraction ? json(*c.scene.bow_y_fraction) : json(nullptr);
  json& r = j["radar"];
  r["altitude"] = c.radar.altitude;
  r["platform_velocity"] = c.radar.platform_velocity;
  r["carrier_frequency"] = c.radar.carrier_frequency;
  r["incidence_deg"] = c.radar.incidence / kDeg;
  r["polarization"] = c.radar.polarization == Polarization::kHH ? "HH" : "VV";
  r["azimuth_resolution"] = c.radar.azimuth_resolution;
  r["range_resolution"] = c.radar.range_resolution;
  json& sc = j["scattering"];
  sc["permittivity"] = {c.scattering.permittivity.real(), c.scattering.permittivity.imag()};
  sc["relaxation_rate"] = c.scattering.relaxation_rate;
  sc["separation_wavenumber"] = c.scattering.separation_wavenumber;
  sc["include_tilt_mtf"] = c.scattering.include_tilt_mtf;
  sc["velocity_bunching"] = c.scattering.velocity_bunching;
  json& n = j["noise"];
  n["looks"] = c.noise.looks;
  n["seeds"] = c.noise.seeds;
  n["look_model"] = look_model_name(c.noise.model);
  json& d = j["despeckle"];
  d["levels"] = c.despeckle.options.levels;
  d["wavelet"] = c.despeckle.options.wavelet;
  d["boundary"] = boundary_name(c.despeckle.options.boundary);
  d["log_floor"] = c.despeckle.options.log_floor;
  d["methods"] = json::array();
  for (const MethodConfig& m : c.despeckle.methods) d["methods"].push_back(method_to_json(m));
  if (with_output) j["output_dir"] = c.output_dir.string();
  j["report_format"] = report_format_name(c.report_format);
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) {
  return config_json(config, true).dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
  // The output directory does not change any result, so it is left out.
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config_json(config, false).dump());
  return s.str();
}

std::optional<WakeField> compute_wake(const ExperimentConfig& config) {
  if (!config.scene.ship_enabled) return std::nullopt;
  return wake_elevation(config.scene.render_grid(config.radar.azimuth_resolution),
                        config.scene.ship, config.scene.placement());
}

SceneResult simulate_scene(const ExperimentConfig& config, std::uint64_t seed,
                           const std::optional<WakeField>& wake) {
  const GridSpec grid = config.scene.render_grid(config.radar.azimuth_resolution);
  const SpectrumParams params = config.scene.spectrum();
  // The wavenumber band follows the visible scene, not the widened grid.
  SurfaceSampling sampling = config.scene.sampling;
  if (!(sampling.k_min > 0.0)) {
    sampling.k_min = 2.0 * std::numbers::pi / config.scene.extent;
  }
  SeaSurfaceRealization surface = synthesize(params, grid, sampling, config.scene.time, seed,
                                             config.radar.incidence, kAllFields);
  if (wake) surface = composite_surface(surface, *wake);
  RenderResult r = render(surface, config.radar, params, config.scattering);

  const std::size_t pad = margin_pixels(config.scene, config.radar.azimuth_resolution);
  const std::size_t width = r.image.width() - 2 * pad;
  IntensityImage image = r.image;
  image.pixels = Grid(width, r.image.height());
  for (std::size_t j = 0; j < image.height(); ++j) {
    for (std::size_t i = 0; i < width; ++i) image.pixels(i, j) = r.image.pixels(i + pad, j);
  }
  SceneResult out{std::move(image), r.stats};
  auto& md = out.image.metadata;
  md["config_hash"] = config_hash(config);
  md["version"] = kVersion;
  md["scene.ship"] = config.scene.ship_enabled ? "on" : "off";
  md["scene.heading"] = fmt(config.scene.ship.heading);
  md["scene.azimuth_margin"] = fmt(config.scene.azimuth_margin);
  return out;
}

void ResultsTable::add(const std::string& row, int l, const ScoreReport& s) {
  auto r_it = std::find(rows.begin(), rows.end(), row);
  if (r_it == rows.end()) {
    rows.push_back(row);
    cells.emplace_back(looks.size());
    r_it = rows.end() - 1;
  }
  auto l_it = std::find(looks.begin(), looks.end(), l);
  if (l_it == looks.end()) {
    looks.push_back(l);
    for (auto& row_cells : cells) row_cells.emplace_back();
    l_it = looks.end() - 1;
  }
  TableCell& c = cells[r_it - rows.begin()][l_it - looks.begin()];
  // Running mean over seeds.
  const double n = static_cast<double>(++c.samples);
  c.psnr_db += (s.psnr_db - c.psnr_db) / n;
  c.smse_db += (s.smse_db - c.smse_db) / n;
}

const TableCell* ResultsTable::find(const std::string& row, int l) const {
  const auto r_it = std::find(rows.begin(), rows.end(), row);
  const auto l_it = std::find(looks.begin(), looks.end(), l);
  if (r_it == rows.end() || l_it == looks.end()) return nullptr;
  const TableCell& c = cells[r_it - rows.begin()][l_it - looks.begin()];
  return c.samples > 0 ? &c : nullptr;
}

std::string format_table_text(const ResultsTable& table) {
  std::vector<std::string> header{"Method"};
  for (int l : table.looks) {
    header.push_back("L=" + std::to_string(l) + " PSNR");
    header.push_back("L=" + std::to_string(l) + " S/MSE");
  }
  std::vector<std::vector<std::string>> lines{header};
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::vector<std::string> line{table.rows[r]};
    for (std::size_t l = 0; l < table.looks.size(); ++l) {
      const TableCell& c = table.cells[r][l];
      char buf[32];
      if (c.samples == 0) {
        line.push_back("-");
        line.push_back("-");
        continue;
      }
      std::snprintf(buf, sizeof buf, "%.3f", c.psnr_db);
      line.push_back(buf);
      std::snprintf(buf, sizeof buf, "%.3f", c.smse_db);
      line.push_back(buf);
    }
    lines.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i == 0) {
        out << std::left << std::setw(static_cast<int>(width[i])) << line[i];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[i])) << line[i];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string format_table_delimited(const ResultsTable& table, char delimiter) {
  std::ostringstream out;
  out << "method" << delimiter << "looks" << delimiter << "psnr_db" << delimiter << "smse_db"
      << delimiter << "samples\n";
  out.precision(10);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t l = 0; l < table.looks.size(); ++l) {
      const TableCell& c = table.cells[r][l];
      if (c.samples == 0) continue;
      out << table.rows[r] << delimiter << table.looks[l] << delimiter << c.psnr_db << delimiter
          << c.smse_db << delimiter << c.samples << '\n';
    }
  }
  return out.str();
}

std::string method_label(const IntensityImage& image) {
  const auto it = image.metadata.find("despeckle.regulariser");
  if (it != image.metadata.end()) return row_label(it->second);
  if (image.metadata.count("speckle.looks")) return "Noisy";
  return "Reference";
}

void write_image_set(const fs::path& raster_path, const IntensityImage& image,
                     const ExperimentConfig& config, std::uint64_t seed) {
  fs::create_directories(raster_path.parent_path().empty() ? fs::path(".")
                                                           : raster_path.parent_path());
  write_raster(raster_path, image);
  fs::path pgm = raster_path;
  pgm.replace_extension(".pgm");
  write_pgm(pgm, image);
  json extra;
  extra["version"] = kVersion;
  extra["config_hash"] = config_hash(config);
  extra["seed"] = seed;
  extra["config"] = config_json(config, false);
  write_metadata_sidecar(raster_path, image, extra.dump());
}

std::vector<fs::path> cmd_simulate(const ExperimentConfig& config,
                                   const std::optional<std::uint64_t>& seed) {
  config.validate();
  fs::create_directories(config.output_dir);
  write_text(config.output_dir / "config.json", config_to_json(config));
  const std::vector<std::uint64_t> seeds =
      seed ? std::vector<std::uint64_t>{*seed} : config.noise.seeds;
  const std::optional<WakeField> wake = compute_wake(config);
  std::vector<fs::path> written;
  for (std::uint64_t s : seeds) {
    SceneResult scene = simulate_scene(config, s, wake);
    const fs::path path = config.output_dir / ("scene_seed" + std::to_string(s) + ".sar");
    write_image_set(path, scene.image, config, s);
    written.push_back(path);
    log_info("wrote " + path.string());
  }
  return written;
}

std::vector<fs::path> cmd_speckle(const fs::path& input, const std::vector<int>& looks,
                                  std::uint64_t seed, LookModel model, const fs::path& out) {
  if (looks.empty()) throw ConfigError("--looks: at least one value required");
  const IntensityImage clean = read_raster(input);
  clean.validate();
  fs::create_directories(out);
  std::vector<fs::path> written;
  for (int l : looks) {
    SpeckleParams sp;
    sp.looks = l;
    sp.seed = seed;
    sp.model = model;
    sp.validate();
    IntensityImage noisy = apply_speckle(clean, sp);
    noisy.metadata["version"] = kVersion;
    const fs::path path = out / (input.stem().string() + "_L" + std::to_string(l) + ".sar");
    write_raster(path, noisy);
    fs::path pgm = path;
    pgm.replace_extension(".pgm");
    write_pgm(pgm, noisy);
    json extra;
    extra["version"] = kVersion;
    extra["source"] = input.filename().string();
    extra["seed"] = seed;
    write_metadata_sidecar(path, noisy, extra.dump());
    written.push_back(path);
  }
  return written;
}

DespeckleCommandResult cmd_despeckle(const fs::path& input, const RegulariserSpec& reg,
                                     const DespeckleOptions& options, std::optional<int> looks,
                                     LookModel model, const fs::path& out) {
  const IntensityImage noisy = read_raster(input);
  noisy.validate();
  SpeckleParams sp;
  sp.looks = looks.value_or(looks_from_metadata(noisy));
  if (sp.looks < 1) {
    throw ConfigError("--looks: not given and input metadata has no speckle.looks");
  }
  const auto m = noisy.metadata.find("speckle.model");
  sp.model = m != noisy.metadata.end() && !looks ? look_model_by_name(m->second) : model;
  sp.validate();

  DespeckleCommandResult cr;
  cr.result = despeckle(noisy, reg, sp.log_variance(), options);
  fs::create_directories(out);
  const std::string stem = input.stem().string() + "_" + regulariser_name(reg.kind);
  cr.output = out / (stem + ".sar");
  cr.report = out / (stem + "_report.json");
  write_raster(cr.output, cr.result.image);
  fs::path pgm = cr.output;
  pgm.replace_extension(".pgm");
  write_pgm(pgm, cr.result.image);
  json extra;
  extra["version"] = kVersion;
  extra["source"] = input.filename().string();
  write_metadata_sidecar(cr.output, cr.result.image, extra.dump());

  json report;
  report["input"] = input.filename().string();
  report["regulariser"] = regulariser_name(reg.kind);
  report["looks"] = sp.looks;
  report["log_variance"] = sp.log_variance();
  report["floored_pixels"] = cr.result.floored_pixels;
  report["subbands"] = reports_to_json(cr.result.reports);
  write_text(cr.report, report.dump(2) + "\n");
  return cr;
}

ResultsTable cmd_evaluate(const fs::path& reference, const std::vector<fs::path>& estimates,
                          const fs::path& out, ReportFormat format) {
  if (estimates.empty()) throw ConfigError("evaluate: at least one estimate required");
  const IntensityImage ref = read_raster(reference);
  ResultsTable table;
  for (const fs::path& p : estimates) {
    const IntensityImage est = read_raster(p);
    const ScoreReport s = score(ref, est, reference.filename().string(), p.filename().string());
    table.add(method_label(est), looks_from_metadata(est), s);
  }
  if (!out.empty()) {
    fs::create_directories(out);
    write_tables(table, out, format);
  }
  return table;
}

PipelineResult cmd_pipeline(const ExperimentConfig& config) {
  config.validate();
  const fs::path& dir = config.output_dir;
  fs::create_directories(dir);
  write_text(dir / "config.json", config_to_json(config));

  PipelineResult result;
  // Fix the row order before any scores arrive.
  result.table.rows.push_back("Noisy");
  for (const MethodConfig& m : config.despeckle.methods) {
    result.table.rows.push_back(row_label(regulariser_name(m.spec.kind)));
  }
  result.table.looks = config.noise.looks;
  result.table.cells.assign(result.table.rows.size(),
                            std::vector<TableCell>(result.table.looks.size()));

  // The wake does not depend on the seed.
  const std::optional<WakeField> wake = compute_wake(config);
  json cells = json::array();

  for (std::uint64_t seed : config.noise.seeds) {
    const fs::path seed_dir = dir / ("seed" + std::to_string(seed));
    const SceneResult scene = simulate_scene(config, seed, wake);
    const IntensityImage& clean = scene.image;
    write_image_set(seed_dir / "clean.sar", clean, config, seed);

    for (int l : config.noise.looks) {
      SpeckleParams sp;
      sp.looks = l;
      sp.seed = seed;
      sp.model = config.noise.model;
      IntensityImage noisy = apply_speckle(clean, sp);
      const std::string tag = "L" + std::to_string(l);
      write_image_set(seed_dir / ("noisy_" + tag + ".sar"), noisy, config, seed);

      CellRecord noisy_cell{seed, l, "noisy", 0.0, score(clean, noisy, "clean", "noisy_" + tag), {}};
      result.table.add("Noisy", l, noisy_cell.score);
      result.cells.push_back(noisy_cell);

      for (const MethodConfig& m : config.despeckle.methods) {
        RegulariserSpec reg = m.spec;
        const std::string name = regulariser_name(reg.kind);
        if (!m.tune.empty()) {
          const TuningResult t = tune_regulariser(noisy, clean, reg, sp.log_variance(), m.tune,
                                                  config.despeckle.options);
          set_strength(reg, t.best_value);
        }
        DespeckleResult d = despeckle(noisy, reg, sp.log_variance(), config.despeckle.options);
        const std::string id = name + "_" + tag;
        write_image_set(seed_dir / (id + ".sar"), d.image, config, seed);
        CellRecord cell{seed, l, name, strength_of(reg), score(clean, d.image, "clean", id),
                        std::move(d.reports)};
        result.table.add(row_label(name), l, cell.score);
        result.cells.push_back(std::move(cell));
      }
    }
    log_info("pipeline: seed " + std::to_string(seed) + " done");
  }

  for (const CellRecord& c : result.cells) {
    json j;
    j["seed"] = c.seed;
    j["looks"] = c.looks;
    j["method"] = c.method;
    j["strength"] = c.strength;
    j["psnr_db"] = c.score.psnr_db;
    j["smse_db"] = c.score.smse_db;
    j["subbands"] = reports_to_json(c.reports);
    cells.push_back(j);
  }
  json report;
  report["version"] = kVersion;
  report["config_hash"] = config_hash(config);
  report["cells"] = cells;
  write_text(dir / "report.json", report.dump(2) + "\n");
  write_tables(result.table, dir, config.report_format);
  return result;
}

}  // namespace sarsim
