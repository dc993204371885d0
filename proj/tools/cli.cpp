#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lmk/cascade.hpp"
#include "lmk/dataset.hpp"
#include "lmk/evaluation.hpp"
#include "lmk/model_io.hpp"

namespace lmk {

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t expected,
                                  const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "cannot parse \"" + item + "\" as a number");
    }
  }
  if (expected != 0 && values.size() != expected) {
    throw CLI::ValidationError(what, "expected " + std::to_string(expected) +
                                         " comma-separated values, got " +
                                         std::to_string(values.size()));
  }
  return values;
}

Region parse_box(const std::string& text) {
  const std::vector<double> v = parse_numbers(text, 3, "--box");
  if (!(v[2] > 0.0)) {
    throw CLI::ValidationError("--box", "size must be positive");
  }
  return Region{v[0], v[1], v[2]};
}

SymmetryTable parse_symmetry(const std::vector<std::string>& specs) {
  SymmetryTable table;
  for (const std::string& spec : specs) {
    std::stringstream ss(spec);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const std::size_t eq = pair.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
        throw CLI::ValidationError("--symmetry", "expected label=label, got \"" + pair + "\"");
      }
      table.add(pair.substr(0, eq), pair.substr(eq + 1));
    }
  }
  return table;
}

double round_sig3(double v) {
  if (v == 0.0 || !std::isfinite(v)) {
    return v;
  }
  const double magnitude = std::pow(10.0, 2.0 - std::floor(std::log10(std::fabs(v))));
  return std::round(v * magnitude) / magnitude;
}

// Shared flag payloads. CLI11 keeps pointers to these, so they live in one
// struct owned by run's scope.
struct Options {
  // common
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;

  // train
  std::string manifest;
  std::string landmark;
  CascadeTrainConfig train;
  int copies = 20;
  double center_jitter = 0.07;
  std::string scale_jitter = "0.9,1.1";
  bool mirror = false;
  std::vector<std::string> symmetry;
  std::string out_path;
  std::string log_path;

  // predict / eval / bench
  std::string model_path;
  std::string image_path;
  std::string box;
  PerturbationPolicy policy;
  std::string scale_range = "0.9,1.1";
  std::string thresholds =
      "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.10,0.12,0.14,0.16,0.18,0.20,"
      "0.25,0.30,0.35,0.40,0.45,0.50";
  std::string curve_out;
  std::string eyes;
  double inter_ocular = 0.0;
  int reps = 100;
};

std::uint64_t effective_seed(const Options& opt) {
  if (opt.seed_given) {
    return opt.seed;
  }
  if (const char* env = std::getenv("LMK_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::runtime_error("LMK_SEED is set but not an unsigned integer");
    }
  }
  return 0;
}

PerturbationPolicy effective_policy(const Options& opt) {
  PerturbationPolicy policy = opt.policy;
  const std::vector<double> range = parse_numbers(opt.scale_range, 2, "--scale-range");
  policy.scale_low = range[0];
  policy.scale_high = range[1];
  policy.seed = effective_seed(opt);
  return policy;
}

void add_policy_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--perturbations", opt.policy.n_perturbations,
                  "Number of jittered regions whose estimates are median-reduced");
  cmd->add_option("--max-offset", opt.policy.max_offset,
                  "Center jitter bound as a fraction of region size");
  cmd->add_option("--scale-range", opt.scale_range, "Region scale jitter range, e.g. 0.9,1.1");
}

int cmd_train(const Options& opt, std::ostream& out) {
  const std::vector<ManifestRecord> records = load_manifest(opt.manifest);
  if (records.empty()) {
    throw std::runtime_error("manifest " + opt.manifest + " has no records");
  }
  const std::vector<GrayImage> images = load_images(records);

  AugmentationConfig aug;
  aug.copies_per_image = opt.copies;
  aug.center_jitter = opt.center_jitter;
  const std::vector<double> jitter = parse_numbers(opt.scale_jitter, 2, "--scale-jitter");
  aug.scale_low = jitter[0];
  aug.scale_high = jitter[1];
  aug.mirror = opt.mirror;
  aug.seed = effective_seed(opt);

  const AugmentedSamples data =
      augment(records, images, opt.landmark, aug, parse_symmetry(opt.symmetry));

  CascadeTrainConfig config = opt.train;
  config.seed = effective_seed(opt);
  config.n_threads = opt.threads;

  TrainReport report;
  const CascadeModel model = train_cascade(opt.landmark, data.samples, config, &report);
  write_model_file(opt.out_path, model);

  const std::string log_path = opt.log_path.empty() ? opt.out_path + ".log" : opt.log_path;
  std::ofstream log(log_path);
  if (!log) {
    throw std::runtime_error("cannot write training log " + log_path);
  }
  log << "stage,tree,mse\n";
  for (std::size_t s = 0; s < report.stage_mse.size(); ++s) {
    for (std::size_t t = 0; t < report.stage_mse[s].size(); ++t) {
      log << s + 1 << ',' << t << ',' << std::setprecision(17) << report.stage_mse[s][t]
          << '\n';
    }
  }

  out << "trained " << opt.landmark << " on " << data.samples.size() << " samples ("
      << records.size() << " images), wrote " << opt.out_path << " ("
      << encoded_size(model) << " bytes) and " << log_path << "\n";
  return 0;
}

int cmd_predict(const Options& opt, std::ostream& out) {
  const CascadeModel model = read_model_file(opt.model_path);
  const GrayImage img = load_pgm(opt.image_path);
  const Region region = parse_box(opt.box);
  const Vec2 p = estimate(model, img, region, effective_policy(opt));
  out << model.landmark << ' ' << std::fixed << std::setprecision(2) << p.x << ' ' << p.y
      << "\n";
  return 0;
}

int cmd_eval(const Options& opt, std::ostream& out) {
  const CascadeModel model = read_model_file(opt.model_path);
  const std::vector<ManifestRecord> records = load_manifest(opt.manifest);
  if (records.empty()) {
    throw std::runtime_error("manifest " + opt.manifest + " has no records");
  }

  std::string eye_left;
  std::string eye_right;
  if (!opt.eyes.empty()) {
    const std::size_t comma = opt.eyes.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("--eyes expects two comma-separated labels");
    }
    eye_left = opt.eyes.substr(0, comma);
    eye_right = opt.eyes.substr(comma + 1);
  } else if (!(opt.inter_ocular > 0.0)) {
    throw std::runtime_error("eval needs --eyes LABEL,LABEL or --inter-ocular DIST");
  }

  const PerturbationPolicy policy = effective_policy(opt);
  std::vector<double> errors;
  errors.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ManifestRecord& rec = records[i];
    double inter_ocular = opt.inter_ocular;
    if (!eye_left.empty()) {
      const auto l = rec.find_landmark(eye_left);
      const auto r = rec.find_landmark(eye_right);
      if (!l || !r) {
        throw std::runtime_error("record " + std::to_string(i) + " lacks eye label \"" +
                                 (l ? eye_right : eye_left) + "\"");
      }
      inter_ocular = distance(*l, *r);
    }
    if (!rec.find_landmark(model.landmark)) {
      throw std::runtime_error("record " + std::to_string(i) + " lacks landmark \"" +
                               model.landmark + "\"");
    }
    const GrayImage img = load_pgm(rec.image_path);
    const Vec2 est = estimate(model, img, rec.face_box, policy);

    std::vector<LabeledPoint> truth;
    truth.reserve(rec.landmarks.size());
    for (const LandmarkPoint& lm : rec.landmarks) {
      truth.push_back({lm.label, lm.position});
    }
    const EvalRecord eval({{model.landmark, est}}, std::move(truth), inter_ocular);
    errors.push_back(normalized_error(eval));
  }

  double mean = 0.0;
  for (const double e : errors) {
    mean += e;
  }
  mean /= static_cast<double>(errors.size());
  out << "mean_normalized_error " << std::fixed << std::setprecision(6) << mean << "\n";

  if (!opt.curve_out.empty()) {
    const std::vector<double> thresholds = parse_numbers(opt.thresholds, 0, "--thresholds");
    const AccuracyCurve curve = accuracy_curve(errors, thresholds);
    std::ofstream csv(opt.curve_out);
    if (!csv) {
      throw std::runtime_error("cannot write curve " + opt.curve_out);
    }
    write_curve_csv(csv, curve);
  }
  return 0;
}

int cmd_bench(const Options& opt, std::ostream& out) {
  const CascadeModel model = read_model_file(opt.model_path);
  const GrayImage img = load_pgm(opt.image_path);
  const Region region = parse_box(opt.box);
  const BenchmarkStats stats = benchmark(model, img, region, effective_policy(opt), opt.reps);

  nlohmann::json j;
  j["mean_ms"] = round_sig3(stats.mean_ms);
  j["p50_ms"] = round_sig3(stats.p50_ms);
  j["p95_ms"] = round_sig3(stats.p95_ms);
  j["repetitions"] = stats.repetitions;
  out << j.dump() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Landmark localization with cascades of pixel-comparison tree ensembles"};
  app.name("lmk");
  app.require_subcommand(1);

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opt.seed, "RNG seed (falls back to LMK_SEED, then 0)")
        ->each([&](const std::string&) { opt.seed_given = true; });
    cmd->add_option("--threads", opt.threads, "Worker threads for training")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* train = app.add_subcommand("train", "Train a cascade for one landmark");
  train->add_option("--manifest", opt.manifest, "Line-delimited JSON annotation manifest")
      ->required();
  train->add_option("--landmark", opt.landmark, "Landmark label to train")->required();
  train->add_option("--out", opt.out_path, "Output model file")->required();
  train->add_option("--stages", opt.train.n_stages, "Cascade stages");
  train->add_option("--trees", opt.train.trees_per_stage, "Trees per stage");
  train->add_option("--depth", opt.train.depth, "Tree depth");
  train->add_option("--shrinkage", opt.train.shrinkage, "Boosting shrinkage in (0,1]");
  train->add_option("--scale-decay", opt.train.scale_decay, "Region shrink factor per stage");
  train->add_option("--candidates", opt.train.n_candidates, "Candidate tests per node");
  train->add_option("--copies", opt.copies, "Jittered samples per image");
  train->add_option("--center-jitter", opt.center_jitter,
                    "Box center jitter as a fraction of box size");
  train->add_option("--scale-jitter", opt.scale_jitter, "Box scale jitter range, e.g. 0.9,1.1");
  train->add_flag("--mirror", opt.mirror, "Also train on mirrored images");
  train->add_option("--symmetry", opt.symmetry,
                    "Label pairs that swap under mirroring, e.g. left_eye=right_eye");
  train->add_option("--log", opt.log_path, "Training log path (default: <out>.log)");
  add_common(train);

  CLI::App* predict = app.add_subcommand("predict", "Locate the landmark in one image");
  predict->add_option("--model", opt.model_path, "Model file")->required();
  predict->add_option("--image", opt.image_path, "Binary PGM image")->required();
  predict->add_option("--box", opt.box, "Face box as cx,cy,size")->required();
  add_policy_flags(predict, opt);
  add_common(predict);

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a model over a manifest");
  eval->add_option("--model", opt.model_path, "Model file")->required();
  eval->add_option("--manifest", opt.manifest, "Line-delimited JSON annotation manifest")
      ->required();
  eval->add_option("--thresholds", opt.thresholds, "Accuracy-curve thresholds (ascending)");
  eval->add_option("--curve-out", opt.curve_out, "Write the accuracy curve CSV here");
  eval->add_option("--eyes", opt.eyes, "Labels measuring inter-ocular distance, e.g. left,right");
  eval->add_option("--inter-ocular", opt.inter_ocular,
                   "Fixed inter-ocular distance in pixels (alternative to --eyes)");
  add_policy_flags(eval, opt);
  add_common(eval);

  CLI::App* bench = app.add_subcommand("bench", "Time estimate() on one image");
  bench->add_option("--model", opt.model_path, "Model file")->required();
  bench->add_option("--image", opt.image_path, "Binary PGM image")->required();
  bench->add_option("--box", opt.box, "Face box as cx,cy,size")->required();
  bench->add_option("--reps", opt.reps, "Timed repetitions")->check(CLI::PositiveNumber);
  add_policy_flags(bench, opt);
  add_common(bench);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("lmk");
  for (const std::string& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (train->parsed()) {
      return cmd_train(opt, out);
    }
    if (predict->parsed()) {
      return cmd_predict(opt, out);
    }
    if (eval->parsed()) {
      return cmd_eval(opt, out);
    }
    return cmd_bench(opt, out);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace lmk
