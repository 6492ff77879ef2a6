// lsar: command-line front end for simulation, reconstruction and evaluation.
//
// Exit status: 0 ok, 2 bad input or configuration, 3 numerical failure,
// 4 file I/O failure, 1 anything else.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lsar/dataio.hpp"
#include "lsar/error.hpp"
#include "lsar/ibp.hpp"
#include "lsar/metrics.hpp"
#include "lsar/operators.hpp"
#include "lsar/parallel.hpp"
#include "lsar/scene.hpp"
#include "lsar/simulator.hpp"
#include "lsar/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kOther = 1, kInput = 2, kNumerical = 3, kIo = 4 };

int exit_code_for(lsar::ErrorCode code) {
  switch (lsar::category(code)) {
    case lsar::ErrorCategory::Validation: return kInput;
    case lsar::ErrorCategory::Numerical: return kNumerical;
    case lsar::ErrorCategory::Io: return kIo;
  }
  return kOther;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lsar::Error(lsar::ErrorCode::IoFailure, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 64-bit FNV-1a over the raw config bytes.
std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct LoadedScene {
  fs::path path;
  std::string hash;
  lsar::ValidatedScene scene;
};

LoadedScene load_scene(const fs::path& path) {
  const std::string text = read_file(path);
  LoadedScene out{path, fnv1a_hex(text), lsar::validate(lsar::parse_scene_config(text))};
  for (const auto& w : out.scene.warnings()) std::cerr << "warning: " << w << "\n";
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Manifest {
  json doc;

  explicit Manifest(const std::string& command) {
    doc["command"] = command;
    doc["tool_version"] = kVersion;
    doc["threads"] = lsar::thread_count();
    doc["inputs"] = json::object();
    doc["outputs"] = json::array();
  }
  void config(const LoadedScene& s) { doc["config"] = {{"path", s.path.string()}, {"hash", s.hash}}; }
  void input(const std::string& key, const fs::path& p) { doc["inputs"][key] = p.string(); }
  void output(const fs::path& p) { doc["outputs"].push_back(p.string()); }
  void write(const fs::path& path) const {
    std::ofstream out(path);
    if (!out) throw lsar::Error(lsar::ErrorCode::IoFailure, "cannot write manifest " + path.string());
    out << doc.dump(2) << "\n";
  }
};

fs::path manifest_path(const fs::path& out) { return fs::path(out.string() + ".manifest.json"); }

lsar::ElementType parse_precision(const std::string& s) {
  if (s == "complex64") return lsar::ElementType::Complex64;
  if (s == "complex128") return lsar::ElementType::Complex128;
  throw lsar::Error(lsar::ErrorCode::UnsupportedElementType, "precision must be complex64 or complex128");
}

lsar::IbpStride parse_stride(const std::vector<std::size_t>& v) {
  if (v.empty()) return {};
  if (v.size() != 4) throw lsar::Error(lsar::ErrorCode::InvalidParameter, "--stride takes tx,rx,scan,freq");
  return {v[0], v[1], v[2], v[3]};
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  fs::path config, targets, out;
  double snr_db = lsar::kNoNoise;
  std::uint64_t seed = 0;
  std::string precision = "complex64";
};

int cmd_simulate(const SimulateArgs& a) {
  const LoadedScene ls = load_scene(a.config);
  const auto targets = lsar::load_targets(a.targets);
  for (const auto& w : lsar::target_warnings(ls.scene, targets)) std::cerr << "warning: " << w << "\n";
  const auto element = parse_precision(a.precision);

  Stopwatch sw;
  lsar::EchoTensor echo = lsar::synthesize_echo(ls.scene, targets);
  echo = lsar::add_noise(echo, a.snr_db, a.seed);
  const double wall = sw.seconds();

  lsar::write_tensor(a.out, echo, element, ls.hash);

  Manifest m("simulate");
  m.config(ls);
  m.input("targets", a.targets);
  m.output(a.out);
  m.doc["parameters"] = {{"n_targets", targets.size()},
                         {"snr_db", std::isinf(a.snr_db) ? json("inf") : json(a.snr_db)},
                         {"seed", a.seed},
                         {"precision", a.precision}};
  const auto& e = echo.extents();
  m.doc["echo_shape"] = {e[0], e[1], e[2], e[3]};
  m.doc["wall_time_s"] = wall;
  m.write(manifest_path(a.out));
  std::cout << "echo " << e[0] << "x" << e[1] << "x" << e[2] << "x" << e[3] << " -> " << a.out.string() << "\n";
  return kOk;
}

// ------------------------------------------------------------- reconstruct

struct AlgoOptions {
  double lambda = 0.0;
  bool lambda_auto = false;
  std::size_t lambda_count = 8;
  double rho = 1.0;
  int max_iters = 50;
  double tol = 1e-4;
  std::vector<std::size_t> stride;
};

struct AlgoRun {
  lsar::ImageVolume image;
  double wall_s = 0.0;
  json params;
};

AlgoRun run_algorithm(const std::string& algo, const lsar::EchoTensor& echo, const lsar::ValidatedScene& scene,
                      const AlgoOptions& o) {
  if (echo.extents() != scene.echo_extents()) {
    throw lsar::Error(lsar::ErrorCode::DimensionMismatch, "echo dimensions do not match the config");
  }
  AlgoRun run;
  run.params["algo"] = algo;
  if (algo == "dtfda") {
    Stopwatch sw;
    run.image = lsar::dtfda_reconstruct(echo, scene);
    run.wall_s = sw.seconds();
  } else if (algo == "ibp") {
    const auto stride = parse_stride(o.stride);
    Stopwatch sw;
    run.image = lsar::ibp_reconstruct(echo, scene, stride);
    run.wall_s = sw.seconds();
    run.params["stride"] = {stride.tx, stride.rx, stride.scan, stride.freq};
  } else if (algo == "enhanced") {
    lsar::AdmmParams p;
    p.rho = o.rho;
    p.lambda = o.lambda;
    p.max_iters = o.max_iters;
    p.tol = o.tol;
    lsar::check_params(p);
    Stopwatch sw;
    lsar::AdmmResult result;
    std::vector<lsar::LambdaScore> scores;
    if (o.lambda_auto) {
      const lsar::ImageVolume back = lsar::dtfda_reconstruct(echo, scene);
      const auto grid = lsar::default_lambda_grid(back, o.lambda_count);
      auto search = lsar::search_lambda(back, p, grid);
      p.lambda = search.lambda;
      result = std::move(search.result);
      scores = std::move(search.scores);
    } else {
      result = lsar::admm_reconstruct(echo, scene, p);
    }
    run.wall_s = sw.seconds();
    run.image = std::move(result.image);
    run.params["rho"] = p.rho;
    run.params["lambda"] = p.lambda;
    run.params["lambda_auto"] = o.lambda_auto;
    run.params["max_iters"] = p.max_iters;
    run.params["tol"] = p.tol;
    run.params["iterations"] = result.state.t;
    run.params["converged"] = result.state.converged;
    if (!scores.empty()) {
      json s = json::array();
      for (const auto& sc : scores) s.push_back({{"lambda", sc.lambda}, {"ie_bits", sc.entropy}});
      run.params["lambda_scores"] = s;
    }
  } else {
    throw lsar::Error(lsar::ErrorCode::InvalidParameter, "unknown algorithm '" + algo + "'");
  }
  return run;
}

json summary_of(const lsar::ImageVolume& image) {
  const auto peak = lsar::peak_location(image);
  const double ie = lsar::image_entropy(image);
  return {{"ie_bits", std::isinf(ie) ? json("inf") : json(ie)},
          {"peak_voxel", {peak.voxel[0], peak.voxel[1], peak.voxel[2]}},
          {"peak_value", peak.magnitude}};
}

struct ReconstructArgs {
  fs::path config, echo, out;
  std::string algo = "dtfda";
  std::string precision = "complex128";
  AlgoOptions opts;
};

int cmd_reconstruct(const ReconstructArgs& a) {
  const LoadedScene ls = load_scene(a.config);
  const lsar::EchoTensor echo = lsar::read_echo(a.echo);
  const auto element = parse_precision(a.precision);
  AlgoRun run = run_algorithm(a.algo, echo, ls.scene, a.opts);
  lsar::write_tensor(a.out, run.image, element, ls.hash);

  Manifest m("reconstruct");
  m.config(ls);
  m.input("echo", a.echo);
  m.output(a.out);
  m.doc["algorithm"] = run.params;
  m.doc["wall_time_s"] = run.wall_s;
  m.doc["metrics"] = summary_of(run.image);
  m.write(manifest_path(a.out));
  std::cout << a.algo << " " << std::setprecision(6) << run.wall_s << " s -> " << a.out.string() << "\n";
  return kOk;
}

// ----------------------------------------------------------------- metrics

struct MetricsArgs {
  fs::path image;
  bool entropy = false;
  std::string entropy_section;  // "axis=index", empty for the whole volume
  std::string projection;       // axis, empty for none
  double range_db = 30.0;
  std::vector<std::string> slices;  // "axis=index" or "axis=last"
  std::string out_prefix;
};

std::pair<lsar::ImageAxis, std::size_t> parse_slice(const std::string& spec, const lsar::ImageVolume& image) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw lsar::Error(lsar::ErrorCode::InvalidParameter, "slice must be axis=index");
  const auto axis = lsar::parse_axis(spec.substr(0, eq));
  const std::string idx = spec.substr(eq + 1);
  const std::size_t n = image.extent(static_cast<std::size_t>(axis));
  if (idx == "last") return {axis, n - 1};
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(idx, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != idx.size() || idx.empty()) throw lsar::Error(lsar::ErrorCode::InvalidParameter, "bad slice index '" + idx + "'");
  if (v >= n) throw lsar::Error(lsar::ErrorCode::IndexOutOfRange, "slice index " + idx + " out of range");
  return {axis, static_cast<std::size_t>(v)};
}

int cmd_metrics(const MetricsArgs& a) {
  const lsar::ImageVolume image = lsar::read_image(a.image);
  lsar::MetricsReport report;
  report.peak = lsar::peak_location(image);
  report.has_entropy = a.entropy || !a.entropy_section.empty();
  if (!a.entropy_section.empty()) {
    const auto [axis, index] = parse_slice(a.entropy_section, image);
    report.image_entropy = lsar::image_entropy(lsar::extract_section(image, axis, index));
    report.entropy_scope = std::string("section ") + lsar::axis_name(axis) + "=" + std::to_string(index);
  } else {
    report.image_entropy = lsar::image_entropy(image);
  }
  if (!a.projection.empty()) {
    report.projection = lsar::max_projection(image, lsar::parse_axis(a.projection), a.range_db);
    report.has_projection = true;
  }
  const std::string text = report.to_text();
  std::cout << text;

  Manifest m("metrics");
  m.input("image", a.image);
  m.doc["parameters"] = {{"entropy_scope", report.entropy_scope},
                         {"projection", a.projection},
                         {"range_db", a.range_db},
                         {"slices", a.slices}};
  json metrics = json::object();
  if (report.has_entropy) {
    metrics["ie_bits"] = std::isinf(report.image_entropy) ? json("inf") : json(report.image_entropy);
  }
  metrics["peak_voxel"] = {report.peak.voxel[0], report.peak.voxel[1], report.peak.voxel[2]};
  metrics["peak_value"] = report.peak.magnitude;
  m.doc["metrics"] = metrics;

  fs::path manifest = fs::path(a.image.string() + ".metrics.manifest.json");
  if (!a.out_prefix.empty()) {
    const std::string prefix = a.out_prefix;
    const fs::path report_path = prefix + ".metrics.txt";
    std::ofstream out(report_path);
    if (!out) throw lsar::Error(lsar::ErrorCode::IoFailure, "cannot write " + report_path.string());
    out << text;
    m.output(report_path);
    if (report.has_projection) {
      const fs::path png = prefix + "_max_" + a.projection + ".png";
      lsar::export_slice_image(image, report.projection.axis, std::nullopt, a.range_db, png);
      m.output(png);
    }
    for (const auto& spec : a.slices) {
      const auto [axis, index] = parse_slice(spec, image);
      const fs::path png = prefix + "_" + lsar::axis_name(axis) + std::to_string(index) + ".png";
      lsar::export_slice_image(image, axis, index, a.range_db, png);
      m.output(png);
    }
    manifest = manifest_path(prefix);
  } else if (!a.slices.empty()) {
    throw lsar::Error(lsar::ErrorCode::InvalidParameter, "--slice needs --out-prefix");
  }
  m.write(manifest);
  return kOk;
}

// ----------------------------------------------------------------- compare

struct CompareArgs {
  fs::path config, echo, out_dir;
  std::vector<std::string> algos{"dtfda", "enhanced"};
  AlgoOptions opts;
};

int cmd_compare(const CompareArgs& a) {
  const LoadedScene ls = load_scene(a.config);
  const lsar::EchoTensor echo = lsar::read_echo(a.echo);
  fs::create_directories(a.out_dir);

  Manifest m("compare");
  m.config(ls);
  m.input("echo", a.echo);
  m.doc["runs"] = json::array();

  std::ostringstream csv;
  csv << "algo,ie_bits,wall_time_s,peak_x,peak_y,peak_z\n";
  int status = kOk;
  for (const auto& algo : a.algos) {
    try {
      AlgoRun run = run_algorithm(algo, echo, ls.scene, a.opts);
      const fs::path img = a.out_dir / (algo + ".vol");
      lsar::write_tensor(img, run.image, lsar::ElementType::Complex128, ls.hash);
      m.output(img);
      const auto peak = lsar::peak_location(run.image);
      const double ie = lsar::image_entropy(run.image);
      csv << algo << "," << std::setprecision(10) << ie << "," << run.wall_s << "," << peak.voxel[0] << ","
          << peak.voxel[1] << "," << peak.voxel[2] << "\n";
      json entry = run.params;
      entry["wall_time_s"] = run.wall_s;
      entry["metrics"] = summary_of(run.image);
      m.doc["runs"].push_back(entry);
    } catch (const lsar::Error& e) {
      std::cerr << "error: " << algo << ": " << e.what() << "\n";
      m.doc["runs"].push_back({{"algo", algo}, {"error", e.what()}});
      if (status == kOk) status = exit_code_for(e.code());
    }
  }

  const fs::path csv_path = a.out_dir / "compare.csv";
  std::ofstream out(csv_path);
  if (!out) throw lsar::Error(lsar::ErrorCode::IoFailure, "cannot write " + csv_path.string());
  out << csv.str();
  out.close();
  m.output(csv_path);
  m.write(a.out_dir / "compare.manifest.json");
  std::cout << csv.str();
  return status;
}

void add_algo_options(CLI::App* cmd, AlgoOptions& o) {
  auto* lambda = cmd->add_option("--lambda", o.lambda, "Regularization weight for --algo enhanced");
  auto* autol = cmd->add_flag("--lambda-auto", o.lambda_auto, "Pick lambda by minimum image entropy");
  lambda->excludes(autol);
  cmd->add_option("--lambda-count", o.lambda_count, "Candidates tried by --lambda-auto")->check(CLI::PositiveNumber);
  cmd->add_option("--rho", o.rho, "ADMM penalty parameter");
  cmd->add_option("--max-iters", o.max_iters, "ADMM iteration cap");
  cmd->add_option("--tol", o.tol, "ADMM relative-change stopping tolerance");
  cmd->add_option("--stride", o.stride, "IBP subsampling tx,rx,scan,freq (approximate)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field MIMO-SAR imaging through a planar dielectric interface"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (default: LSAR_THREADS or all cores)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Synthesize an echo tensor from point targets");
  c_sim->add_option("--config", sim.config, "Scene config (JSON)")->required();
  c_sim->add_option("--targets", sim.targets, "Target list (JSON)")->required();
  c_sim->add_option("--snr", sim.snr_db, "Additive noise SNR in dB (default: noiseless)");
  c_sim->add_option("--seed", sim.seed, "Noise seed");
  c_sim->add_option("--precision", sim.precision, "complex64 or complex128");
  c_sim->add_option("--out", sim.out, "Echo output file")->required();

  ReconstructArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Form an image volume from an echo tensor");
  c_rec->add_option("--config", rec.config, "Scene config (JSON)")->required();
  c_rec->add_option("--echo", rec.echo, "Echo file")->required();
  c_rec->add_option("--algo", rec.algo, "ibp, dtfda or enhanced")
      ->check(CLI::IsMember({"ibp", "dtfda", "enhanced"}));
  c_rec->add_option("--precision", rec.precision, "complex64 or complex128");
  c_rec->add_option("--out", rec.out, "Image output file")->required();
  add_algo_options(c_rec, rec.opts);

  MetricsArgs met;
  auto* c_met = app.add_subcommand("metrics", "Image entropy, peak and projections of an image volume");
  c_met->add_option("--image", met.image, "Image file")->required();
  c_met->add_flag("--entropy", met.entropy, "Report image entropy of the whole volume");
  c_met->add_option("--entropy-section", met.entropy_section, "Report entropy of one section, e.g. y=3");
  c_met->add_option("--projection", met.projection, "Max-projection axis (x, y or z)")
      ->check(CLI::IsMember({"x", "y", "z"}));
  c_met->add_option("--range", met.range_db, "Displayed dynamic range in dB")->check(CLI::PositiveNumber);
  c_met->add_option("--slice", met.slices, "Export a section PNG, e.g. y=0 or y=last (repeatable)");
  c_met->add_option("--out-prefix", met.out_prefix, "Prefix for report, PNGs and manifest");

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "Run several algorithms on one echo and tabulate");
  c_cmp->add_option("--config", cmp.config, "Scene config (JSON)")->required();
  c_cmp->add_option("--echo", cmp.echo, "Echo file")->required();
  c_cmp->add_option("--algos", cmp.algos, "Comma-separated list")
      ->delimiter(',')
      ->check(CLI::IsMember({"ibp", "dtfda", "enhanced"}));
  c_cmp->add_option("--out-dir", cmp.out_dir, "Output directory")->required();
  add_algo_options(c_cmp, cmp.opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (threads > 0) {
      lsar::set_thread_count(threads);
    } else {
      lsar::apply_thread_env();
    }
    if (c_sim->parsed()) return cmd_simulate(sim);
    if (c_rec->parsed()) return cmd_reconstruct(rec);
    if (c_met->parsed()) return cmd_metrics(met);
    if (c_cmp->parsed()) return cmd_compare(cmp);
  } catch (const lsar::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
  return kOther;
}
