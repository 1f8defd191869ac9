#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "physprop/gru.hpp"
#include "physprop/metrics.hpp"
#include "physprop/observe.hpp"
#include "physprop/oracle.hpp"
#include "physprop/scene.hpp"

namespace physprop {

inline constexpr int kSchemaVersion = 1;

/// One synthetic video: the full scene parameterization plus the image-space
/// measurements the estimators consume.
struct DatasetRecord {
  std::string id;
  Property property = Property::kElasticity;
  std::string split;
  int viewpoint_group = 0;
  std::uint64_t seed = 0;
  Scene scene;
  ObservationSequence observations;
  double ground_truth = 0.0;
};

/// Generation configuration. Split sizes default to the desk-scale sizes;
/// the manifest records the reference full-scale sizes they stand in for.
struct RunConfig {
  Property property = Property::kElasticity;
  int train_size = 200;
  int test1_size = 100;
  int test2_size = 100;
  double noise_sigma = 1.0;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  int viewpoint_group_size = 4;  // test splits only; train is ungrouped
  int subsample = 0;             // 0 = keep the full frame rate
  double fps = kDefaultFps;
};

struct SplitInfo {
  std::string name;
  std::string file;
  Domain domain = Domain::kA1;
  int records = 0;
};

struct Manifest {
  int schema_version = kSchemaVersion;
  Property property = Property::kElasticity;
  std::uint64_t seed = 0;
  double noise_sigma = 1.0;
  double fps = kDefaultFps;
  double duration = 0.0;
  int viewpoint_group_size = 4;
  int subsample = 0;
  std::vector<SplitInfo> splits;
};

inline const char* const kSplitNames[] = {"train", "test-1", "test-2"};

/// Write train/test-1/test-2 record files plus manifest.json into
/// config.out_dir. Fully reproducible: same config, byte-identical files.
Manifest generate_dataset(const RunConfig& config);

Manifest load_manifest(const std::filesystem::path& dir);
std::vector<DatasetRecord> load_split(const std::filesystem::path& dir,
                                      const std::string& split);

/// Per-record property prediction; nullopt when the estimator raised one of
/// its contract errors (no bounce, degenerate corners, ...).
std::optional<double> predict_record(const DatasetRecord& record, Estimator estimator,
                                     const GruParams* gru_model);

struct EvaluateOptions {
  Estimator estimator = Estimator::kRatioOracle;
  std::string task = "absolute";  // or "relative"
  int max_pairs = 200;
  std::uint64_t pair_seed = 0;
  bool log_pearson = false;  // extra log-domain Pearson (viscosity scales)
  std::filesystem::path gru_checkpoint;
};

/// Evaluate one estimator over every split of a dataset; writes one report
/// JSON plus a raw-pairs CSV per (split, metric) into out_dir and returns
/// the reports. Throws DataError on schema or estimator/property mismatch,
/// NumericError if a metric comes out non-finite.
std::vector<EvalReport> evaluate_dataset(const std::filesystem::path& dataset_dir,
                                         const EvaluateOptions& options,
                                         const std::filesystem::path& out_dir);

/// Train the GRU readout on the train split only (normalized trajectories,
/// targets = ground-truth property values). Writes the checkpoint and a
/// training-curve CSV next to it. Returns the trained parameters.
GruParams train_gru_on_dataset(const std::filesystem::path& dataset_dir,
                               const TrainConfig& config,
                               const std::filesystem::path& checkpoint_path);

/// Worker-pool size: min(hardware, PHYSPROP_THREADS when set).
int worker_count();

}  // namespace physprop
