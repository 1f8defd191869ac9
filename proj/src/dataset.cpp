#include "physprop/dataset.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "physprop/camera.hpp"
#include "physprop/errors.hpp"
#include "physprop/rng.hpp"
#include "physprop/sampling.hpp"
#include "physprop/simulate.hpp"

namespace physprop {

using json = nlohmann::ordered_json;

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("PHYSPROP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace {

// FNV-1a; std::hash is not pinned across standard libraries, and split-name
// hashes feed the record seed streams recorded in dataset files.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Index-sharded parallel map; results land at their own index, so output
// order is independent of scheduling.
void parallel_for(int n, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

json pose_to_json(const CameraPose& p) {
  return json{{"radius", p.radius},
              {"height", p.height},
              {"azimuth", p.azimuth},
              {"look_at", {p.look_at.x(), p.look_at.y(), p.look_at.z()}}};
}

CameraPose pose_from_json(const json& j) {
  CameraPose p;
  p.radius = j.at("radius").get<double>();
  p.height = j.at("height").get<double>();
  p.azimuth = j.at("azimuth").get<double>();
  const auto& l = j.at("look_at");
  p.look_at = {l.at(0).get<double>(), l.at(1).get<double>(), l.at(2).get<double>()};
  return p;
}

json scene_to_json(const Scene& scene) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, ElasticityScene>) {
          j["restitution"] = s.restitution;
          j["drop_height"] = s.drop_height;
          j["ball_radius"] = s.ball_radius;
          j["gravity"] = s.gravity;
        } else if constexpr (std::is_same_v<T, ViscosityScene>) {
          j["viscosity"] = s.viscosity;
          j["column_radius"] = s.column_radius;
          j["column_height"] = s.column_height;
          j["drop_height"] = s.drop_height;
          j["spread_constant"] = s.spread_constant;
        } else {
          j["friction_coeff"] = s.friction_coeff;
          j["initial_position"] = {s.initial_position.x(), s.initial_position.y()};
          j["initial_speed"] = s.initial_speed;
          j["motion_axis"] = to_string(s.motion_axis);
          j["cube_size"] = s.cube_size;
          j["gravity"] = s.gravity;
        }
        j["camera"] = pose_to_json(s.camera);
        j["color"] = {s.color.x(), s.color.y(), s.color.z()};
        return j;
      },
      scene);
}

Scene scene_from_json(Property property, const json& j) {
  const auto color = [&](auto& s) {
    const auto& c = j.at("color");
    s.color = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
    s.camera = pose_from_json(j.at("camera"));
  };
  switch (property) {
    case Property::kElasticity: {
      ElasticityScene s;
      s.restitution = j.at("restitution").get<double>();
      s.drop_height = j.at("drop_height").get<double>();
      s.ball_radius = j.at("ball_radius").get<double>();
      s.gravity = j.at("gravity").get<double>();
      color(s);
      return s;
    }
    case Property::kViscosity: {
      ViscosityScene s;
      s.viscosity = j.at("viscosity").get<double>();
      s.column_radius = j.at("column_radius").get<double>();
      s.column_height = j.at("column_height").get<double>();
      s.drop_height = j.at("drop_height").get<double>();
      s.spread_constant = j.at("spread_constant").get<double>();
      color(s);
      return s;
    }
    case Property::kFriction: {
      FrictionScene s;
      s.friction_coeff = j.at("friction_coeff").get<double>();
      const auto& p = j.at("initial_position");
      s.initial_position = {p.at(0).get<double>(), p.at(1).get<double>()};
      s.initial_speed = j.at("initial_speed").get<double>();
      s.motion_axis = motion_axis_from_string(j.at("motion_axis").get<std::string>());
      s.cube_size = j.at("cube_size").get<double>();
      s.gravity = j.at("gravity").get<double>();
      color(s);
      return s;
    }
  }
  throw DataError("bad property in scene");
}

json observations_to_json(const ObservationSequence& obs) {
  json j;
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        j["times"] = o.times;
        j["noise_sigma"] = o.noise_sigma;
        if constexpr (std::is_same_v<T, BallObservation>) {
          json pts = json::array();
          for (const auto& p : o.centroids_px) pts.push_back({p.x(), p.y()});
          j["centroids_px"] = std::move(pts);
        } else if constexpr (std::is_same_v<T, SpreadObservation>) {
          j["areas_px2"] = o.areas_px2;
        } else {
          json frames = json::array();
          for (const auto& c : o.corners_px) {
            json quad = json::array();
            for (const auto& p : c) quad.push_back({p.x(), p.y()});
            frames.push_back(std::move(quad));
          }
          j["corners_px"] = std::move(frames);
        }
      },
      obs);
  return j;
}

ObservationSequence observations_from_json(Property property, const json& j) {
  const std::vector<double> times = j.at("times").get<std::vector<double>>();
  const double sigma = j.at("noise_sigma").get<double>();
  switch (property) {
    case Property::kElasticity: {
      BallObservation o;
      o.times = times;
      o.noise_sigma = sigma;
      for (const auto& p : j.at("centroids_px"))
        o.centroids_px.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      return o;
    }
    case Property::kViscosity: {
      SpreadObservation o;
      o.times = times;
      o.noise_sigma = sigma;
      o.areas_px2 = j.at("areas_px2").get<std::vector<double>>();
      return o;
    }
    case Property::kFriction: {
      SlideObservation o;
      o.times = times;
      o.noise_sigma = sigma;
      for (const auto& quad : j.at("corners_px")) {
        CornerPixels c;
        for (int k = 0; k < 4; ++k)
          c[k] = {quad.at(k).at(0).get<double>(), quad.at(k).at(1).get<double>()};
        o.corners_px.push_back(c);
      }
      return o;
    }
  }
  throw DataError("bad property in observations");
}

json record_to_json(const DatasetRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["id"] = r.id;
  j["property"] = to_string(r.property);
  j["split"] = r.split;
  j["viewpoint_group"] = r.viewpoint_group;
  j["seed"] = r.seed;
  j["ground_truth"] = r.ground_truth;
  j["scene"] = scene_to_json(r.scene);
  j["observations"] = observations_to_json(r.observations);
  return j;
}

DatasetRecord record_from_json(const json& j) {
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw DataError("unsupported record schema version");
  DatasetRecord r;
  r.id = j.at("id").get<std::string>();
  r.property = property_from_string(j.at("property").get<std::string>());
  r.split = j.at("split").get<std::string>();
  r.viewpoint_group = j.at("viewpoint_group").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ground_truth = j.at("ground_truth").get<double>();
  r.scene = scene_from_json(r.property, j.at("scene"));
  r.observations = observations_from_json(r.property, j.at("observations"));
  return r;
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

double duration_for(Property p) {
  switch (p) {
    case Property::kElasticity: return kBounceDuration;
    case Property::kViscosity: return kSpreadDuration;
    case Property::kFriction: return kSlideDuration;
  }
  return kBounceDuration;
}

DatasetRecord make_record(const RunConfig& config, const std::string& split, Domain domain,
                          int index, int group, const CameraPose* shared_camera) {
  const std::uint64_t record_seed =
      mix_seed(config.seed, fnv1a(split) * 1315423911u + index);
  DatasetRecord rec;
  rec.property = config.property;
  rec.split = split;
  rec.viewpoint_group = group;
  rec.seed = record_seed;
  {
    std::ostringstream id;
    id << to_string(config.property) << "-" << split << "-";
    id.width(5);
    id.fill('0');
    id << index;
    rec.id = id.str();
  }
  rec.scene = shared_camera
                  ? sample_scene_with_camera(config.property, domain, record_seed, *shared_camera)
                  : sample_scene(config.property, domain, record_seed);
  rec.ground_truth = ground_truth_of(rec.scene);

  const WorldTrack track = simulate(rec.scene, config.fps);
  PinholeCamera camera;
  camera.pose = camera_of(rec.scene);
  rec.observations =
      render_observations(track, camera, config.noise_sigma, mix_seed(record_seed, 0x0b5));
  if (config.subsample > 0)
    rec.observations = subsample_frames(rec.observations, config.subsample);
  return rec;
}

}  // namespace

Manifest generate_dataset(const RunConfig& config) {
  if (config.train_size < 1 || config.test1_size < 1 || config.test2_size < 1)
    throw std::invalid_argument("split sizes must be >= 1");
  if (config.viewpoint_group_size < 1)
    throw std::invalid_argument("viewpoint group size must be >= 1");
  std::filesystem::create_directories(config.out_dir);

  Manifest manifest;
  manifest.property = config.property;
  manifest.seed = config.seed;
  manifest.noise_sigma = config.noise_sigma;
  manifest.fps = config.fps;
  manifest.duration = duration_for(config.property);
  manifest.viewpoint_group_size = config.viewpoint_group_size;
  manifest.subsample = config.subsample;

  struct SplitPlan {
    std::string name;
    Domain domain;
    int size;
    bool grouped;
  };
  const SplitPlan plans[] = {
      {"train", Domain::kA1, config.train_size, false},
      {"test-1", Domain::kA1, config.test1_size, true},
      {"test-2", Domain::kA2, config.test2_size, true},
  };

  for (const auto& plan : plans) {
    // Viewpoint groups share one camera pose, drawn from a group-level seed.
    const int group_size = plan.grouped ? config.viewpoint_group_size : 1;
    std::vector<CameraPose> group_cameras((plan.size + group_size - 1) / group_size);
    for (std::size_t g = 0; g < group_cameras.size(); ++g) {
      Rng rng(mix_seed(config.seed, fnv1a(plan.name) * 2654435761u + 7919 * (g + 1)));
      group_cameras[g] = sample_camera(config.property, plan.domain, rng);
    }

    std::vector<DatasetRecord> records(plan.size);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    parallel_for(plan.size, [&](int i) {
      try {
        const int group = i / group_size;
        records[i] = make_record(config, plan.name, plan.domain, i, group,
                                 plan.grouped ? &group_cameras[group] : nullptr);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
    if (first_error) std::rethrow_exception(first_error);

    std::string body;
    for (const auto& r : records) {
      body += record_to_json(r).dump();
      body += '\n';
    }
    const std::string file = plan.name + ".jsonl";
    write_atomically(config.out_dir / file, body);
    manifest.splits.push_back({plan.name, file, plan.domain, plan.size});
  }

  json j;
  j["schema_version"] = kSchemaVersion;
  j["property"] = to_string(config.property);
  j["seed"] = config.seed;
  j["noise_sigma"] = config.noise_sigma;
  j["fps"] = config.fps;
  j["duration"] = manifest.duration;
  j["viewpoint_group_size"] = config.viewpoint_group_size;
  j["subsample"] = config.subsample;
  // Desk-scale stand-ins for the reference split sizes 10000/1000/1000.
  j["reference_sizes"] = {{"train", 10000}, {"test-1", 1000}, {"test-2", 1000}};
  json splits = json::array();
  for (const auto& s : manifest.splits)
    splits.push_back({{"name", s.name},
                      {"file", s.file},
                      {"domain", to_string(s.domain)},
                      {"records", s.records}});
  j["splits"] = std::move(splits);
  write_atomically(config.out_dir / "manifest.json", j.dump(1) + "\n");
  return manifest;
}

Manifest load_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("missing manifest.json in " + dir.string());
  json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  if (j.value("schema_version", -1) != kSchemaVersion)
    throw DataError("unsupported manifest schema version");
  Manifest m;
  m.property = property_from_string(j.at("property").get<std::string>());
  m.seed = j.at("seed").get<std::uint64_t>();
  m.noise_sigma = j.at("noise_sigma").get<double>();
  m.fps = j.at("fps").get<double>();
  m.duration = j.at("duration").get<double>();
  m.viewpoint_group_size = j.at("viewpoint_group_size").get<int>();
  m.subsample = j.at("subsample").get<int>();
  for (const auto& s : j.at("splits"))
    m.splits.push_back({s.at("name").get<std::string>(), s.at("file").get<std::string>(),
                        domain_from_string(s.at("domain").get<std::string>()),
                        s.at("records").get<int>()});
  return m;
}

std::vector<DatasetRecord> load_split(const std::filesystem::path& dir,
                                      const std::string& split) {
  const Manifest manifest = load_manifest(dir);
  const SplitInfo* info = nullptr;
  for (const auto& s : manifest.splits)
    if (s.name == split) info = &s;
  if (!info) throw DataError("split not in manifest: " + split);

  std::ifstream in(dir / info->file);
  if (!in) throw DataError("missing split file: " + (dir / info->file).string());
  std::vector<DatasetRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("malformed record: ") + e.what());
    }
  }
  if (static_cast<int>(records.size()) != info->records)
    throw DataError("record count does not match the manifest for split " + split);
  return records;
}

std::optional<double> predict_record(const DatasetRecord& record, Estimator estimator,
                                     const GruParams* gru_model) {
  if (property_of(estimator) != record.property)
    throw DataError("estimator " + to_string(estimator) + " does not apply to " +
                    to_string(record.property) + " records");
  try {
    switch (record.property) {
      case Property::kElasticity: {
        const auto& obs = std::get<BallObservation>(record.observations);
        const int n = static_cast<int>(obs.centroids_px.size());
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) y[i] = obs.centroids_px[i].y();
        const NormalizedTrajectory traj = normalize_trajectory(y, obs.noise_sigma);
        if (estimator == Estimator::kRatioOracle)
          return estimate_elasticity_ratio(traj).value;
        if (estimator == Estimator::kPeakRaw)
          return estimate_elasticity_peak_raw(traj).value;
        if (!gru_model) throw ModelNotTrainedError("no GRU checkpoint loaded");
        return estimate_elasticity_gru(traj, *gru_model).value;
      }
      case Property::kViscosity: {
        const auto& obs = std::get<SpreadObservation>(record.observations);
        return estimate_viscosity(obs.areas_px2, obs.times).value;
      }
      case Property::kFriction: {
        const auto& obs = std::get<SlideObservation>(record.observations);
        const auto& scene = std::get<FrictionScene>(record.scene);
        if (estimator == Estimator::kParabolaNaive)
          return estimate_friction_naive(obs.corners_px, obs.times, scene.cube_size,
                                         scene.gravity)
              .value;
        return estimate_friction(obs.corners_px, obs.times, scene.cube_size, scene.gravity)
            .value;
      }
    }
  } catch (const NoBounceError&) {
    return std::nullopt;
  } catch (const NonPositiveSlopeError&) {
    return std::nullopt;
  } catch (const InsufficientSamplesError&) {
    return std::nullopt;
  } catch (const WrongCurvatureError&) {
    return std::nullopt;
  } catch (const DegenerateConfigurationError&) {
    return std::nullopt;
  }
  return std::nullopt;
}

namespace {

void write_report_files(const EvalReport& report, const std::filesystem::path& out_dir,
                        const std::string& stem) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["property"] = to_string(report.property);
  j["split"] = report.split;
  j["estimator"] = report.estimator;
  j["task"] = report.task;
  j["metric"] = report.metric;
  j["value"] = report.value;
  j["sample_count"] = report.sample_count;
  j["failed_records"] = report.failed_records;
  j["raw_csv"] = stem + ".csv";
  write_atomically(out_dir / (stem + ".json"), j.dump(1) + "\n");

  std::ostringstream csv;
  csv.precision(17);
  if (report.task == "absolute") csv << "prediction,ground_truth\n";
  else csv << "score,label\n";
  for (const auto& [a, b] : report.raw) csv << a << "," << b << "\n";
  write_atomically(out_dir / (stem + ".csv"), csv.str());
}

}  // namespace

std::vector<EvalReport> evaluate_dataset(const std::filesystem::path& dataset_dir,
                                         const EvaluateOptions& options,
                                         const std::filesystem::path& out_dir) {
  const Manifest manifest = load_manifest(dataset_dir);
  if (property_of(options.estimator) != manifest.property)
    throw DataError("estimator " + to_string(options.estimator) +
                    " does not apply to a " + to_string(manifest.property) + " dataset");
  if (options.task != "absolute" && options.task != "relative")
    throw DataError("task must be 'absolute' or 'relative'");

  GruParams gru_model;
  if (options.estimator == Estimator::kGru) {
    if (options.gru_checkpoint.empty())
      throw DataError("the gru estimator needs a checkpoint path");
    gru_model = load_gru(options.gru_checkpoint);
  }

  std::filesystem::create_directories(out_dir);
  std::vector<EvalReport> reports;

  for (const auto& split : manifest.splits) {
    if (split.name == "train") continue;  // evaluation uses the test splits
    const std::vector<DatasetRecord> records = load_split(dataset_dir, split.name);
    const int n = static_cast<int>(records.size());

    std::vector<std::optional<double>> preds(n);
    parallel_for(n, [&](int i) {
      preds[i] = predict_record(records[i], options.estimator,
                                options.estimator == Estimator::kGru ? &gru_model : nullptr);
    });
    int failed = 0;
    for (const auto& p : preds)
      if (!p) ++failed;

    if (options.task == "absolute") {
      std::vector<double> pred, gt;
      for (int i = 0; i < n; ++i) {
        if (!preds[i]) continue;
        pred.push_back(*preds[i]);
        gt.push_back(records[i].ground_truth);
      }
      EvalReport report;
      report.property = manifest.property;
      report.split = split.name;
      report.estimator = to_string(options.estimator);
      report.task = "absolute";
      report.metric = "pearson";
      report.value = pearson(pred, gt);
      report.sample_count = static_cast<int>(pred.size());
      report.failed_records = failed;
      for (std::size_t i = 0; i < pred.size(); ++i) report.raw.emplace_back(pred[i], gt[i]);
      if (!std::isfinite(report.value)) throw NumericError("non-finite pearson");
      write_report_files(report, out_dir,
                         "report_" + to_string(manifest.property) + "_" + split.name + "_" +
                             to_string(options.estimator) + "_absolute");
      reports.push_back(report);

      if (options.log_pearson) {
        EvalReport lg = reports.back();
        lg.metric = "pearson-log";
        std::vector<double> lp, lgt;
        lg.raw.clear();
        for (std::size_t i = 0; i < pred.size(); ++i) {
          if (pred[i] <= 0 || gt[i] <= 0) continue;
          lp.push_back(std::log(pred[i]));
          lgt.push_back(std::log(gt[i]));
          lg.raw.emplace_back(lp.back(), lgt.back());
        }
        lg.sample_count = static_cast<int>(lp.size());
        lg.value = pearson(lp, lgt);
        if (!std::isfinite(lg.value)) throw NumericError("non-finite log pearson");
        write_report_files(lg, out_dir,
                           "report_" + to_string(manifest.property) + "_" + split.name + "_" +
                               to_string(options.estimator) + "_absolute_log");
        reports.push_back(lg);
      }
    } else {
      std::vector<int> groups(n);
      std::vector<double> values(n);
      for (int i = 0; i < n; ++i) {
        groups[i] = records[i].viewpoint_group;
        values[i] = records[i].ground_truth;
      }
      const auto pairs =
          build_relative_pairs(groups, values, options.max_pairs, options.pair_seed);

      std::vector<double> scores;
      std::vector<int> labels;
      EvalReport report;
      int dropped_pairs = 0;
      for (const auto& pair : pairs) {
        if (!preds[pair.first] || !preds[pair.second]) {
          ++dropped_pairs;
          continue;
        }
        const double s = relative_score(*preds[pair.first], *preds[pair.second]);
        scores.push_back(s);
        labels.push_back(pair.label);
        report.raw.emplace_back(s, pair.label);
      }
      report.property = manifest.property;
      report.split = split.name;
      report.estimator = to_string(options.estimator);
      report.task = "relative";
      report.metric = "roc-auc";
      report.value = roc_auc(scores, labels);
      report.sample_count = static_cast<int>(scores.size());
      report.failed_records = failed;
      if (!std::isfinite(report.value)) throw NumericError("non-finite roc auc");
      write_report_files(report, out_dir,
                         "report_" + to_string(manifest.property) + "_" + split.name + "_" +
                             to_string(options.estimator) + "_relative");
      reports.push_back(report);
    }
  }
  return reports;
}

GruParams train_gru_on_dataset(const std::filesystem::path& dataset_dir,
                               const TrainConfig& config,
                               const std::filesystem::path& checkpoint_path) {
  const Manifest manifest = load_manifest(dataset_dir);
  if (manifest.property != Property::kElasticity)
    throw DataError("the GRU readout trains on elasticity datasets only");

  // Only the train split is read here; evaluation splits stay untouched.
  const std::vector<DatasetRecord> records = load_split(dataset_dir, "train");
  std::vector<TrainSample> samples;
  for (const auto& rec : records) {
    const auto& obs = std::get<BallObservation>(rec.observations);
    const int n = static_cast<int>(obs.centroids_px.size());
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = obs.centroids_px[i].y();
    try {
      const NormalizedTrajectory traj = normalize_trajectory(y, obs.noise_sigma);
      samples.push_back({traj.values, rec.ground_truth});
    } catch (const NoBounceError&) {
      // Records without a detectable bounce carry no trainable signal.
    }
  }
  if (samples.empty()) throw DataError("no trainable records in the train split");

  const TrainResult result = train_gru(config, samples);
  save_gru(result.params, checkpoint_path);

  std::ostringstream curve;
  curve.precision(17);
  curve << "epoch,loss\n";
  for (std::size_t e = 0; e < result.epoch_losses.size(); ++e)
    curve << e << "," << result.epoch_losses[e] << "\n";
  std::filesystem::path curve_path = checkpoint_path;
  curve_path.replace_extension(".curve.csv");
  write_atomically(curve_path, curve.str());
  return result.params;
}

}  // namespace physprop
