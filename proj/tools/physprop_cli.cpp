// Command-line workbench: dataset generation, oracle/GRU evaluation,
// table-style report emission, and GRU training.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "physprop/dataset.hpp"
#include "physprop/errors.hpp"

namespace fs = std::filesystem;
using namespace physprop;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.size() != 3) throw CLI::ValidationError("--split-sizes wants train,test1,test2");
  return out;
}

int cmd_generate(const std::string& property, const std::string& sizes, double noise_sigma,
                 std::uint64_t seed, const std::string& out, int frames, int group_size,
                 double fps) {
  RunConfig cfg;
  cfg.property = property_from_string(property);
  const auto s = parse_sizes(sizes);
  cfg.train_size = s[0];
  cfg.test1_size = s[1];
  cfg.test2_size = s[2];
  cfg.noise_sigma = noise_sigma;
  cfg.seed = seed;
  cfg.out_dir = out;
  cfg.subsample = frames;
  cfg.viewpoint_group_size = group_size;
  cfg.fps = fps;
  const Manifest manifest = generate_dataset(cfg);
  int total = 0;
  for (const auto& sp : manifest.splits) total += sp.records;
  std::cout << "wrote " << total << " records across " << manifest.splits.size()
            << " splits to " << out << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& data, const std::string& estimator, const std::string& task,
                 const std::string& out, int pairs, std::uint64_t pair_seed, bool log_pearson,
                 const std::string& gru_checkpoint) {
  EvaluateOptions opt;
  opt.estimator = estimator_from_string(estimator);
  opt.task = task;
  opt.max_pairs = pairs;
  opt.pair_seed = pair_seed;
  opt.log_pearson = log_pearson;
  opt.gru_checkpoint = gru_checkpoint;
  const fs::path out_dir = out.empty() ? fs::path(data) / "eval" : fs::path(out);
  const auto reports = evaluate_dataset(data, opt, out_dir);
  for (const auto& r : reports) {
    std::cout << to_string(r.property) << " " << r.split << " " << r.estimator << " "
              << r.task << " " << r.metric << " = " << std::fixed << std::setprecision(4)
              << r.value << "  (n=" << r.sample_count << ", failed=" << r.failed_records
              << ")\n";
  }
  return kExitOk;
}

int cmd_train_gru(const std::string& data, const std::string& out, int epochs, double lr,
                  double lr_decay, int batch, std::uint64_t seed, int hidden,
                  const std::string& loss) {
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.learning_rate = lr;
  cfg.lr_decay = lr_decay;
  cfg.batch_size = batch;
  cfg.seed = seed;
  cfg.hidden = hidden;
  if (loss == "l1") cfg.loss = LossKind::kL1;
  else if (loss == "log-l1") cfg.loss = LossKind::kLogL1;
  else if (loss == "bce") cfg.loss = LossKind::kBce;
  else throw CLI::ValidationError("--loss must be l1, log-l1 or bce");
  train_gru_on_dataset(data, cfg, out);
  std::cout << "checkpoint written to " << out << "\n";
  return kExitOk;
}

int cmd_report(const std::string& eval_dir, const std::string& format) {
  // Collate report_*.json files into a property x estimator table with one
  // column per (split, metric).
  struct Key {
    std::string property, estimator;
    bool operator<(const Key& o) const {
      return std::tie(property, estimator) < std::tie(o.property, o.estimator);
    }
  };
  std::map<Key, std::map<std::string, double>> table;
  std::vector<std::string> columns;
  for (const auto& entry : fs::directory_iterator(eval_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("report_", 0) != 0 || entry.path().extension() != ".json") continue;
    std::ifstream in(entry.path());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception&) {
      throw DataError("malformed report file: " + name);
    }
    const std::string column =
        j.at("split").get<std::string>() + " " + j.at("metric").get<std::string>();
    table[{j.at("property"), j.at("estimator")}][column] = j.at("value").get<double>();
    if (std::find(columns.begin(), columns.end(), column) == columns.end())
      columns.push_back(column);
  }
  if (table.empty()) throw DataError("no report_*.json files in " + eval_dir);
  std::sort(columns.begin(), columns.end());

  const char sep = format == "csv" ? ',' : '\t';
  std::cout << "property" << sep << "estimator";
  for (const auto& c : columns) std::cout << sep << c;
  std::cout << "\n";
  for (const auto& [key, row] : table) {
    std::cout << key.property << sep << key.estimator;
    for (const auto& c : columns) {
      std::cout << sep;
      const auto it = row.find(c);
      if (it != row.end()) std::cout << std::fixed << std::setprecision(3) << it->second;
      else std::cout << (format == "csv" ? "" : "-");
    }
    std::cout << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synthetic physics benchmark: generate scenes, run estimators, report metrics"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a dataset (train/test-1/test-2)");
  std::string g_property = "elasticity", g_sizes = "200,100,100", g_out;
  double g_noise = 1.0, g_fps = kDefaultFps;
  std::uint64_t g_seed = 0;
  int g_frames = 0, g_group = 4;
  gen->add_option("--property", g_property, "elasticity | viscosity | friction")->required();
  gen->add_option("--out", g_out, "output directory")->required();
  gen->add_option("--split-sizes", g_sizes, "train,test1,test2 record counts");
  gen->add_option("--noise-sigma", g_noise, "pixel noise scale (0 = noiseless)");
  gen->add_option("--seed", g_seed, "master seed");
  gen->add_option("--frames", g_frames, "uniformly subsample to N frames (0 = full rate)");
  gen->add_option("--group-size", g_group, "records per viewpoint group in test splits");
  gen->add_option("--fps", g_fps, "simulation frame rate");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "run an estimator over the test splits");
  std::string e_data, e_estimator, e_task = "absolute", e_out, e_ckpt;
  int e_pairs = 200;
  std::uint64_t e_pair_seed = 0;
  bool e_log = false;
  ev->add_option("--data", e_data, "dataset directory")->required();
  ev->add_option("--estimator", e_estimator,
                 "ratio-oracle | peak-raw | gru | slope-oracle | parabola-oracle | parabola-naive")
      ->required();
  ev->add_option("--task", e_task, "absolute | relative");
  ev->add_option("--out", e_out, "report directory (default: <data>/eval)");
  ev->add_option("--pairs", e_pairs, "relative pairs per split");
  ev->add_option("--pair-seed", e_pair_seed, "seed for pair subsampling");
  ev->add_flag("--log-pearson", e_log, "also report Pearson in log space");
  ev->add_option("--gru-checkpoint", e_ckpt, "checkpoint for the gru estimator");

  // train-gru
  auto* tr = app.add_subcommand("train-gru", "train the GRU readout on the train split");
  std::string t_data, t_out, t_loss = "l1";
  int t_epochs = 50, t_batch = 128, t_hidden = kDefaultHidden;
  double t_lr = 1e-3, t_lr_decay = 1.0;
  std::uint64_t t_seed = 0;
  tr->add_option("--data", t_data, "dataset directory")->required();
  tr->add_option("--out", t_out, "checkpoint path")->required();
  tr->add_option("--epochs", t_epochs, "training epochs");
  tr->add_option("--lr", t_lr, "learning rate");
  tr->add_option("--lr-decay", t_lr_decay, "per-epoch learning-rate factor");
  tr->add_option("--batch", t_batch, "batch size");
  tr->add_option("--seed", t_seed, "training seed");
  tr->add_option("--hidden", t_hidden, "hidden width");
  tr->add_option("--loss", t_loss, "l1 | log-l1 | bce");

  // report
  auto* rp = app.add_subcommand("report", "collate evaluation reports into a table");
  std::string r_dir, r_format = "text";
  rp->add_option("--eval-dir", r_dir, "directory with report_*.json files")->required();
  rp->add_option("--format", r_format, "text | csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(g_property, g_sizes, g_noise, g_seed, g_out, g_frames, g_group, g_fps);
    if (ev->parsed())
      return cmd_evaluate(e_data, e_estimator, e_task, e_out, e_pairs, e_pair_seed, e_log,
                          e_ckpt);
    if (tr->parsed())
      return cmd_train_gru(t_data, t_out, t_epochs, t_lr, t_lr_decay, t_batch, t_seed,
                           t_hidden, t_loss);
    if (rp->parsed()) return cmd_report(r_dir, r_format);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
