#include "gymtrack/io.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <fstream>
#include <set>
#include <sstream>

namespace gymtrack {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <class Error>
std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

/// Calls fn(record, line_number) for each non-blank line.
template <class Fn>
void for_each_line(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw InputFormatError("cannot open " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      throw InputFormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw InputFormatError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

double number(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw std::invalid_argument(std::string("missing or non-numeric field '") + key + "'");
  }
  return it->get<double>();
}

int integer(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw std::invalid_argument(std::string("missing or non-integer field '") + key + "'");
  }
  return it->get<int>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != N) {
    throw std::invalid_argument(std::string("field '") + key + "' must be an array of " +
                                std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> v;
  for (int i = 0; i < N; ++i) {
    if (!(*it)[static_cast<std::size_t>(i)].is_number()) {
      throw std::invalid_argument(std::string("field '") + key + "' must hold numbers");
    }
    v(i) = (*it)[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

Matrix3 mat3(const json& j, const char* key) {
  const auto v = vec<9>(j, key);
  Matrix3 m;
  m << v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7), v(8);
  return m;
}

ojson arr(const Eigen::Vector3d& v) { return ojson::array({v.x(), v.y(), v.z()}); }

ojson arr(const Matrix3& m) {
  ojson a = ojson::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Bbox read_box(const json& j) {
  Bbox b{number(j, "x"), number(j, "y"), number(j, "w"), number(j, "h")};
  if (!(b.w > 0.0 && b.h > 0.0)) throw std::invalid_argument("box width and height must be positive");
  return b;
}

ojson box_json(const Bbox& b) { return ojson{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

template <class T>
void opt(const json& j, const char* key, T& dst) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if constexpr (std::is_same_v<T, double>) {
    if (!it->is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  } else if constexpr (std::is_integral_v<T>) {
    if (!it->is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  dst = it->get<T>();
}

const std::set<std::string> kRoutineKeys = {
    "plane", "perf_space", "beta", "nu", "tau", "theta_opp", "opposite_pairs", "lambda", "omega",
    "min_observed", "max_extrapolation", "iou_threshold", "max_age", "unmatched_threshold",
    "delta", "occupancy", "h_top", "h_bot", "max_gap", "smooth_window", "alpha",
    "attach_radius", "mode", "threads"};

/// Applies the keys present in `j` on top of `cfg`.
void apply_routine(const json& j, PipelineConfig& cfg, bool require_geometry) {
  if (!j.is_object()) throw ConfigError("routine config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kRoutineKeys.contains(key)) spdlog::warn("routine config: ignoring unknown key '{}'", key);
  }
  try {
    if (j.contains("plane")) {
      cfg.plane.normal = vec<3>(j.at("plane"), "n");
      cfg.plane.point = vec<3>(j.at("plane"), "point");
    } else if (require_geometry) {
      throw ConfigError("routine config: missing 'plane'");
    }
    double beta = cfg.space.beta;
    opt(j, "beta", beta);
    if (j.contains("perf_space")) {
      const auto b = vec<6>(j, "perf_space");
      cfg.space = TrackingSpace::from_bounds({b(0), b(1), b(2), b(3), b(4), b(5)}, beta);
    } else if (require_geometry) {
      throw ConfigError("routine config: missing 'perf_space'");
    } else {
      cfg.space.beta = beta;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("routine config: ") + e.what());
  }

  opt(j, "nu", cfg.cascade.nu);
  opt(j, "tau", cfg.cascade.tau);
  opt(j, "theta_opp", cfg.cascade.theta_opp_deg);
  if (const auto it = j.find("opposite_pairs"); it != j.end()) {
    cfg.cascade.opposite_pairs.clear();
    if (!it->is_array()) throw ConfigError("'opposite_pairs' must be a list of camera pairs");
    for (const auto& p : *it) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        throw ConfigError("'opposite_pairs' entries must be [camera, camera]");
      }
      cfg.cascade.opposite_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  }
  opt(j, "lambda", cfg.lambda);
  if (j.contains("omega")) {
    opt(j, "omega", cfg.window.length);
    cfg.window.step = cfg.window.length / 2;
    cfg.stitch.step = cfg.window.step;
  }
  opt(j, "min_observed", cfg.window.min_observed);
  opt(j, "max_extrapolation", cfg.window.max_extrapolation);
  opt(j, "iou_threshold", cfg.iou.iou_threshold);
  opt(j, "max_age", cfg.iou.max_age);
  opt(j, "unmatched_threshold", cfg.stitch.unmatched_threshold);
  opt(j, "delta", cfg.target.criteria.delta);
  opt(j, "occupancy", cfg.target.criteria.occupancy);
  opt(j, "h_top", cfg.target.criteria.h_top);
  opt(j, "h_bot", cfg.target.criteria.h_bot);
  opt(j, "max_gap", cfg.target.max_gap);
  opt(j, "smooth_window", cfg.target.smooth_window);
  opt(j, "alpha", cfg.target.alpha);
  opt(j, "attach_radius", cfg.target.attach_radius);
  if (const auto it = j.find("mode"); it != j.end()) {
    const auto mode = it->is_string() ? cascade_mode_from_string(it->get<std::string>()) : std::nullopt;
    if (!mode) throw ConfigError("'mode' must be cascade, triangulation_only or plane_only");
    cfg.cascade.mode = *mode;
  }
  if (const auto it = j.find("threads"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() < 1) throw ConfigError("'threads' must be >= 1");
    cfg.threads = it->get<unsigned>();
  }

  cfg.validate();
  if (!cfg.plane.is_vertical(1e-6)) {
    spdlog::warn("routine plane is not vertical (n = [{}, {}, {}])", cfg.plane.normal.x(),
                 cfg.plane.normal.y(), cfg.plane.normal.z());
  }
}

ojson routine_json(const PipelineConfig& c) {
  ojson pairs = ojson::array();
  for (const auto& [a, b] : c.cascade.opposite_pairs) pairs.push_back({a, b});
  const auto& p = c.space.perf;
  return ojson{
      {"plane", {{"n", arr(c.plane.normal)}, {"point", arr(c.plane.point)}}},
      {"perf_space", {p.min.x(), p.min.y(), p.min.z(), p.max.x(), p.max.y(), p.max.z()}},
      {"beta", c.space.beta},
      {"nu", c.cascade.nu},
      {"tau", c.cascade.tau},
      {"theta_opp", c.cascade.theta_opp_deg},
      {"opposite_pairs", pairs},
      {"lambda", c.lambda},
      {"omega", c.window.length},
      {"min_observed", c.window.min_observed},
      {"max_extrapolation", c.window.max_extrapolation},
      {"iou_threshold", c.iou.iou_threshold},
      {"max_age", c.iou.max_age},
      {"unmatched_threshold", c.stitch.unmatched_threshold},
      {"delta", c.target.criteria.delta},
      {"occupancy", c.target.criteria.occupancy},
      {"h_top", c.target.criteria.h_top},
      {"h_bot", c.target.criteria.h_bot},
      {"max_gap", c.target.max_gap},
      {"smooth_window", c.target.smooth_window},
      {"alpha", c.target.alpha},
      {"attach_radius", c.target.attach_radius},
      {"mode", to_string(c.cascade.mode)},
  };
}

PersonSpec read_person(const json& j, TrajectoryKind kind) {
  PersonSpec p;
  p.kind = kind;
  opt(j, "body_height", p.body_height);
  opt(j, "base_height", p.base_height);
  opt(j, "lateral_amplitude", p.lateral_amplitude);
  opt(j, "lateral_period", p.lateral_period);
  opt(j, "jump_min", p.jump_min);
  opt(j, "jump_max", p.jump_max);
  opt(j, "rest_min", p.rest_min);
  opt(j, "rest_max", p.rest_max);
  opt(j, "walk_height", p.walk_height);
  opt(j, "speed", p.speed);
  if (j.contains("region")) {
    const auto r = vec<4>(j, "region");
    p.region = {r(0), r(1), r(2), r(3)};
  }
  if (const auto it = j.find("off_plane"); it != j.end()) {
    for (const auto& iv : *it) {
      p.off_plane.push_back({integer(iv, "from"), integer(iv, "to"), number(iv, "offset")});
    }
  }
  return p;
}

}  // namespace

std::vector<Detection> read_detections(const std::filesystem::path& path) {
  std::vector<Detection> out;
  for_each_line(path, [&](const json& j) {
    Detection d;
    d.frame = integer(j, "frame");
    d.camera = integer(j, "camera");
    if (d.frame < 0) throw std::invalid_argument("frame must be >= 0");
    d.box = read_box(j);
    d.confidence = j.contains("confidence") ? number(j, "confidence") : 1.0;
    out.push_back(d);
  });
  return out;
}

void write_detections(const std::filesystem::path& path, std::span<const Detection> detections) {
  auto out = open_out(path);
  for (const auto& d : detections) {
    ojson j{{"frame", d.frame}, {"camera", d.camera}, {"x", d.box.x}, {"y", d.box.y},
            {"w", d.box.w}, {"h", d.box.h}, {"confidence", d.confidence}};
    out << j.dump() << '\n';
  }
}

Rig read_calib(const std::filesystem::path& path) {
  const std::string text = slurp<ConfigError>(path);
  try {
    const json j = json::parse(text);
    if (!j.is_array() || j.empty()) throw ConfigError("calib must be a non-empty array of cameras");
    std::vector<CameraModel> cams;
    for (const auto& c : j) {
      cams.emplace_back(integer(c, "id"), mat3(c, "K"), mat3(c, "R"), vec<3>(c, "t"));
    }
    return Rig(std::move(cams));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("calib " + path.string() + ": " + e.what());
  }
}

void write_calib(const std::filesystem::path& path, const Rig& rig) {
  ojson j = ojson::array();
  for (const auto& c : rig.cameras()) {
    j.push_back(ojson{{"id", c.id()}, {"K", arr(c.K())}, {"R", arr(c.R())}, {"t", arr(c.t())}});
  }
  open_out(path) << j.dump(2) << '\n';
}

PipelineConfig parse_routine(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("routine config: ") + e.what());
  }
  PipelineConfig cfg;
  apply_routine(j, cfg, true);
  return cfg;
}

PipelineConfig read_routine(const std::filesystem::path& path) {
  return parse_routine(slurp<ConfigError>(path));
}

std::string routine_to_json(const PipelineConfig& config) { return routine_json(config).dump(2); }

void write_routine(const std::filesystem::path& path, const PipelineConfig& config) {
  open_out(path) << routine_to_json(config) << '\n';
}

ScenarioFile parse_scenario(const std::string& json_text) {
  ScenarioFile out;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    Scenario& s = out.scenario;
    s.name = j.value("name", std::string("scenario"));
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
      s.seed = j.at("seed").get<std::uint64_t>();
    }
    s.frames = integer(j, "frames");
    opt(j, "noise_px", s.noise_px);
    if (const auto it = j.find("rig"); it != j.end()) {
      opt(*it, "radius", s.rig.radius);
      opt(*it, "height", s.rig.height);
      opt(*it, "focal", s.rig.focal);
      opt(*it, "width", s.rig.image_width);
      opt(*it, "height_px", s.rig.image_height);
      opt(*it, "azimuth_offset_deg", s.rig.azimuth_offset_deg);
      if (it->contains("aim")) s.rig.aim = vec<3>(*it, "aim");
    }
    PipelineConfig& cfg = out.routine;
    apply_routine(json{{"plane", j.at("plane")}, {"perf_space", j.at("perf_space")},
                       {"beta", j.value("beta", 1.0)}},
                  cfg, true);
    if (const auto it = j.find("routine"); it != j.end()) apply_routine(*it, cfg, false);
    s.plane = cfg.plane;
    s.space = cfg.space;
    s.target = read_person(j.at("target"), TrajectoryKind::OnPlaneJump);
    for (const auto& d : j.value("distractors", json::array())) {
      s.distractors.push_back(read_person(d, TrajectoryKind::OffPlaneWalk));
    }
    for (const auto& d : j.value("dropout", json::array())) {
      DropoutRule rule;
      rule.cameras = d.at("cameras").get<std::vector<int>>();
      rule.from = integer(d, "from");
      rule.to = integer(d, "to");
      if (d.contains("person")) rule.person = integer(d, "person");
      s.dropout.push_back(std::move(rule));
    }
    s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return out;
}

ScenarioFile read_scenario(const std::filesystem::path& path) {
  return parse_scenario(slurp<ConfigError>(path));
}

void write_truth(const std::filesystem::path& path, std::span<const TruthFrame> truth) {
  auto out = open_out(path);
  for (const auto& tf : truth) {
    ojson persons = ojson::array();
    for (const auto& p : tf.persons) {
      ojson views = ojson::array();
      for (const auto& v : p.views) {
        ojson jv{{"camera", v.camera}};
        jv.update(box_json(v.box));
        jv["visible"] = v.visible;
        jv["detected"] = v.detected;
        views.push_back(std::move(jv));
      }
      persons.push_back(ojson{{"id", p.id}, {"is_target", p.is_target}, {"X", arr(p.X)},
                              {"top", arr(p.top)}, {"bottom", arr(p.bottom)},
                              {"on_plane", p.on_plane}, {"views", views}});
    }
    out << ojson{{"frame", tf.frame}, {"persons", persons}}.dump() << '\n';
  }
}

std::vector<TruthFrame> read_truth(const std::filesystem::path& path) {
  std::vector<TruthFrame> out;
  for_each_line(path, [&](const json& j) {
    TruthFrame tf;
    tf.frame = integer(j, "frame");
    for (const auto& jp : j.at("persons")) {
      TruthPerson p;
      p.id = integer(jp, "id");
      p.is_target = jp.at("is_target").get<bool>();
      p.X = vec<3>(jp, "X");
      p.top = vec<3>(jp, "top");
      p.bottom = vec<3>(jp, "bottom");
      p.on_plane = jp.value("on_plane", false);
      for (const auto& jv : jp.value("views", json::array())) {
        TruthView v;
        v.camera = integer(jv, "camera");
        v.box = {number(jv, "x"), number(jv, "y"), number(jv, "w"), number(jv, "h")};
        v.visible = jv.at("visible").get<bool>();
        v.detected = jv.value("detected", v.visible);
        p.views.push_back(v);
      }
      tf.persons.push_back(std::move(p));
    }
    out.push_back(std::move(tf));
  });
  return out;
}

void write_target_records(const std::filesystem::path& path, std::span<const TargetRecord> records) {
  auto out = open_out(path);
  for (const auto& r : records) {
    ojson views = ojson::array();
    for (const auto& v : r.per_view) {
      ojson jv{{"camera", v.camera}};
      jv.update(box_json(v.box));
      jv["buffered"] = v.buffered;
      views.push_back(std::move(jv));
    }
    out << ojson{{"frame", r.frame}, {"track_id", r.track_id}, {"X", arr(r.X)},
                 {"provenance", std::string(to_string(r.provenance))}, {"per_view", views}}
               .dump()
        << '\n';
  }
}

std::vector<TargetRecord> read_target_records(const std::filesystem::path& path) {
  std::vector<TargetRecord> out;
  for_each_line(path, [&](const json& j) {
    TargetRecord r;
    r.frame = integer(j, "frame");
    r.track_id = integer(j, "track_id");
    r.X = vec<3>(j, "X");
    const auto prov = provenance_from_string(j.at("provenance").get<std::string>());
    if (!prov) throw std::invalid_argument("unknown provenance");
    r.provenance = *prov;
    for (const auto& jv : j.value("per_view", json::array())) {
      r.per_view.push_back({integer(jv, "camera"), read_box(jv), jv.at("buffered").get<bool>()});
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_tracks(const std::filesystem::path& path, const std::map<int, Tracklet3D>& tracks) {
  auto out = open_out(path);
  for (const auto& [id, t] : tracks) {
    for (const auto& [frame, p] : t.points) {
      ojson j{{"track_id", id}, {"frame", frame}, {"X", arr(p.position)},
              {"provenance", std::string(to_string(p.provenance))}, {"views", p.views},
              {"observed", p.observed}};
      if (const auto top = t.top.find(frame); top != t.top.end()) j["top"] = arr(top->second);
      if (const auto bot = t.bottom.find(frame); bot != t.bottom.end()) j["bottom"] = arr(bot->second);
      out << j.dump() << '\n';
    }
  }
}

std::string report_to_json(const EvalReport& report, const std::optional<std::string>& config_json) {
  ojson windows = ojson::array();
  for (const auto& w : report.per_window) {
    windows.push_back(ojson{{"start", w.start},
                            {"evaluated", w.evaluated},
                            {"truth_frames", w.truth_frames},
                            {"aed_m", w.aed ? ojson(*w.aed) : ojson(nullptr)},
                            {"failure_rate", w.failure_rate}});
  }
  ojson j{{"id_switches", report.id_switches},
          {"aed_m", report.aed_m},
          {"failure_rate", report.failure_rate},
          {"coverage", report.coverage},
          {"outage_frames", report.outage_frames},
          {"evaluated_frames", report.evaluated_frames},
          {"evaluated_boxes", report.evaluated_boxes},
          {"per_window", windows}};
  j["config"] = config_json ? ojson::parse(*config_json) : ojson(nullptr);
  return j.dump(2);
}

void write_report(const std::filesystem::path& path, const EvalReport& report,
                  const std::optional<std::string>& config_json) {
  open_out(path) << report_to_json(report, config_json) << '\n';
}

}  // namespace gymtrack
