#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qis/config.hpp"
#include "qis/denoise.hpp"
#include "qis/error.hpp"
#include "qis/metrics.hpp"
#include "qis/pnm.hpp"
#include "qis/qisf.hpp"
#include "qis/reconstruct.hpp"
#include "qis/scene.hpp"
#include "qis/sensor.hpp"

namespace {

using qis::io::Config;

// Per-bit-depth regularization defaults for the sweep; tuned for the
// gaussian baseline on the bundled scene (lower SNR wants more smoothing).
constexpr double kSweepLambda[4] = {0.09, 0.03, 0.02, 0.02};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("bad ") + what + " list entry '" +
                                  item + "'");
    }
  }
  if (values.empty())
    throw std::invalid_argument(std::string("empty ") + what + " list");
  return values;
}

qis::SensorConfig make_sensor_config(int bits, int q, int frames, double alpha,
                                     double read_noise, double dark_rate,
                                     std::uint64_t seed) {
  qis::SensorConfig cfg;
  if (bits == 1) {
    cfg.mode = qis::SensorMode::single_bit;
    cfg.threshold = q;
  } else {
    cfg.mode = qis::SensorMode::multi_bit;
    cfg.bits = bits;
  }
  cfg.frames = frames;
  cfg.alpha = alpha;
  cfg.read_noise_sigma = read_noise;
  cfg.dark_count_rate = dark_rate;
  cfg.seed = seed;
  return cfg;
}

struct SweepRow {
  int bits;
  double photons;
  int frames;
  double psnr_mean;
  double psnr_std;
};

SweepRow sweep_one(const qis::Image& scene, int bits, double photons,
                   int frames, const std::vector<double>& seeds,
                   const qis::recon::ReconParams& base, double lambda) {
  const qis::CfaMask cfa(scene.width(), scene.height());
  const double alpha = qis::sim::alpha_for_mean_photons(scene, cfa, photons);
  const qis::Image truth = qis::recon::gamma_encode(scene, base.display_gamma);

  std::vector<double> psnrs;
  for (double seed : seeds) {
    const qis::SensorConfig sensor = make_sensor_config(
        bits, 1, frames, alpha, 0.0, 0.0, static_cast<std::uint64_t>(seed));
    const qis::FrameStack stack = qis::sim::simulate_stack(scene, cfa, sensor);
    qis::recon::ReconParams params = base;
    params.lambda = lambda;
    const qis::Image recon = qis::recon::reconstruct_iterative(stack, params);
    psnrs.push_back(qis::metrics::psnr(recon, truth, 1.0));
  }
  const double mean = std::accumulate(psnrs.begin(), psnrs.end(), 0.0) /
                      static_cast<double>(psnrs.size());
  double var = 0.0;
  for (double p : psnrs) var += (p - mean) * (p - mean);
  var /= psnrs.size() > 1 ? static_cast<double>(psnrs.size() - 1) : 1.0;
  return {bits, photons, frames, mean, std::sqrt(var)};
}

int run(int argc, char** argv) {
  // --config is resolved before the regular parse so flags can override it.
  Config cfg;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc) {
      cfg = Config::load(argv[i + 1]);
    } else if (arg.rfind("--config=", 0) == 0) {
      cfg = Config::load(arg.substr(9));
    }
  }

  CLI::App app{"Photon-counting color sensor simulator and reconstructor"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  std::string scene_path = cfg.get_string("scene", "");
  std::string stack_path = cfg.get_string("stack", "");
  std::string out_path = cfg.get_string("out", "");
  std::string ccm_path = cfg.get_string("ccm", "");
  std::string denoiser = cfg.get_string("denoiser", "gaussian");
  int bits = static_cast<int>(cfg.get_int("bits", 5));
  int q = static_cast<int>(cfg.get_int("q", 1));
  int frames = static_cast<int>(cfg.get_int("frames", 20));
  double photons = cfg.get_double("photons", 0.0);
  double alpha = cfg.get_double("alpha", 0.0);
  double read_noise = cfg.get_double("read_noise", 0.0);
  double dark_rate = cfg.get_double("dark_rate", 0.0);
  std::uint64_t seed =
      static_cast<std::uint64_t>(cfg.get_int("seed", 1));
  double sigma = cfg.get_double("sigma", 1.0);
  double rho = cfg.get_double("rho", 1.0);
  double lambda = cfg.get_double("lambda", 0.0);
  int max_iters = static_cast<int>(cfg.get_int("max_iters", 50));
  double primal_tol = cfg.get_double("primal_tol", 1e-4);
  double display_gamma = cfg.get_double("gamma", 2.2);
  bool fast = cfg.get_bool("fast", false);
  bool scene_gamma_decode = cfg.get_bool("scene_gamma_decode", false);
  bool unbiased_inverse = cfg.get_bool("unbiased_inverse", false);
  int patch_radius = static_cast<int>(cfg.get_int("patch_radius", 1));
  int search_radius = static_cast<int>(cfg.get_int("search_radius", 3));
  double smooth_weight = cfg.get_double("smooth_weight", 1.0);
  std::string photon_levels = cfg.get_string("photon_levels",
                                             "0.25,0.75,1.75,3.75");
  std::string seeds_text = cfg.get_string("seeds", "1,2,3");
  double peak = cfg.get_double("peak", 1.0);

  auto* sim = app.add_subcommand("simulate", "Scene -> QISF frame stack");
  sim->add_option("--scene", scene_path, "input scene (P5/P6 pixmap)");
  sim->add_option("--out", out_path, "output stack (.qisf)");
  sim->add_option("--bits", bits, "1 = single-bit, 2..16 = multi-bit L");
  sim->add_option("--q", q, "single-bit threshold (bits = 1 only)");
  sim->add_option("--frames", frames, "frame count T");
  sim->add_option("--photons", photons,
                  "mean photons per jot per frame (sets the gain)");
  sim->add_option("--alpha", alpha, "explicit gain (overrides --photons)");
  sim->add_option("--read-noise", read_noise, "read noise sigma, e- rms");
  sim->add_option("--dark-rate", dark_rate, "dark electrons per jot per frame");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_flag("--scene-gamma-decode", scene_gamma_decode,
                "treat the scene file as gamma-encoded");

  auto* rec = app.add_subcommand("reconstruct", "QISF stack -> color image");
  rec->add_option("--stack", stack_path, "input stack (.qisf)");
  rec->add_option("--out", out_path, "output image (8-bit P6)");
  rec->add_flag("--fast", fast, "non-iterative four-jot path");
  rec->add_option("--denoiser", denoiser, "gaussian | nlm | tv | identity");
  rec->add_option("--sigma", sigma, "denoiser strength scale (fast path)");
  rec->add_option("--rho", rho, "ADMM penalty");
  rec->add_option("--lambda", lambda, "regularization weight");
  rec->add_option("--max-iters", max_iters, "ADMM iteration cap");
  rec->add_option("--primal-tol", primal_tol, "relative primal tolerance");
  rec->add_option("--gamma", display_gamma, "display gamma");
  rec->add_option("--ccm", ccm_path, "patch chart for color correction");
  rec->add_flag("--unbiased-inverse", unbiased_inverse,
                "bias-corrected Poisson inverse transform");
  rec->add_option("--patch-radius", patch_radius, "nlm patch radius");
  rec->add_option("--search-radius", search_radius, "nlm search radius");
  rec->add_option("--smooth-weight", smooth_weight, "denoiser weight scale");

  auto* eval = app.add_subcommand("evaluate", "PSNR between two images");
  std::string eval_a, eval_b;
  eval->add_option("image_a", eval_a, "first image")->required();
  eval->add_option("image_b", eval_b, "second image")->required();
  eval->add_option("--peak", peak, "peak signal value");

  auto* sweep = app.add_subcommand(
      "sweep", "bit-depth experiment: 1..4 bits at configured photon levels");
  sweep->add_option("--scene", scene_path, "input scene (P5/P6 pixmap)");
  sweep->add_option("--out", out_path, "also write the table to this file");
  sweep->add_option("--frames", frames, "frame count T");
  sweep->add_option("--photons", photon_levels,
                    "comma list of photons/frame for bits 1..4");
  sweep->add_option("--seeds", seeds_text, "comma list of seeds");
  sweep->add_option("--denoiser", denoiser, "gaussian | nlm | tv");
  sweep->add_option("--rho", rho, "ADMM penalty");
  sweep->add_option("--lambda", lambda,
                    "regularization weight (0 = per-bit default)");
  sweep->add_option("--max-iters", max_iters, "ADMM iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e); // prints help, exit 0
  }

  qis::recon::ReconParams params;
  params.rho = rho;
  params.lambda = lambda > 0.0 ? lambda : 0.05;
  params.max_iters = max_iters;
  params.primal_tol = primal_tol;
  params.display_gamma = display_gamma;
  params.unbiased_inverse = unbiased_inverse;
  params.denoiser.kind = denoiser;
  params.denoiser.sigma = sigma;
  params.denoiser.patch_radius = patch_radius;
  params.denoiser.search_radius = search_radius;
  params.denoiser.smooth_weight = smooth_weight;

  if (sim->parsed()) {
    if (scene_path.empty() || out_path.empty())
      throw std::invalid_argument("simulate needs --scene and --out");
    const qis::Image scene = qis::io::read_pnm(scene_path, scene_gamma_decode);
    const qis::CfaMask cfa(scene.width(), scene.height());
    double gain = alpha;
    if (gain <= 0.0) {
      if (photons <= 0.0)
        throw std::invalid_argument("simulate needs --photons or --alpha");
      gain = qis::sim::alpha_for_mean_photons(scene, cfa, photons);
    }
    const qis::SensorConfig sensor = make_sensor_config(
        bits, q, frames, gain, read_noise, dark_rate, seed);
    const qis::FrameStack stack = qis::sim::simulate_stack(scene, cfa, sensor);
    qis::io::write_stack(out_path, stack);
    return 0;
  }

  if (rec->parsed()) {
    if (stack_path.empty() || out_path.empty())
      throw std::invalid_argument("reconstruct needs --stack and --out");
    const qis::FrameStack stack = qis::io::read_stack(stack_path);
    if (!ccm_path.empty()) {
      params.ccm = qis::recon::fit_color_correction_from_file(ccm_path);
      params.apply_ccm = true;
    }
    const qis::Image out = fast
                               ? qis::recon::reconstruct_fast(stack, params)
                               : qis::recon::reconstruct_iterative(stack,
                                                                   params);
    qis::io::write_ppm8(out_path, out);
    return 0;
  }

  if (eval->parsed()) {
    const qis::Image a = qis::io::read_pnm(eval_a);
    const qis::Image b = qis::io::read_pnm(eval_b);
    std::printf("%.6f\n", qis::metrics::psnr(a, b, peak));
    return 0;
  }

  if (sweep->parsed()) {
    if (scene_path.empty())
      throw std::invalid_argument("sweep needs --scene");
    const qis::Image scene = qis::io::read_pnm(scene_path, scene_gamma_decode);
    const std::vector<double> levels = parse_list(photon_levels, "photon");
    if (levels.size() != 4)
      throw std::invalid_argument("sweep expects 4 photon levels (bits 1..4)");
    const std::vector<double> seeds = parse_list(seeds_text, "seed");

    std::ostringstream table;
    table << "bits photons_per_frame T PSNR_mean PSNR_std\n";
    for (int b = 1; b <= 4; ++b) {
      const double lam = lambda > 0.0 ? lambda : kSweepLambda[b - 1];
      const SweepRow row =
          sweep_one(scene, b, levels[b - 1], frames, seeds, params, lam);
      char line[128];
      std::snprintf(line, sizeof(line), "%d %.4f %d %.3f %.3f\n", row.bits,
                    row.photons, row.frames, row.psnr_mean, row.psnr_std);
      table << line;
    }
    std::fputs(table.str().c_str(), stdout);
    if (!out_path.empty()) {
      std::ofstream file(out_path);
      if (!file) throw qis::IoError("cannot create table '" + out_path + "'");
      file << table.str();
    }
    return 0;
  }

  return 0;
}

} // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "qis-cli: %s\n", e.what());
    return 1;
  } catch (const qis::DivergenceError& e) {
    std::fprintf(stderr, "qis-cli: %s\n", e.what());
    return 3;
  } catch (const qis::IoError& e) {
    std::fprintf(stderr, "qis-cli: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qis-cli: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qis-cli: %s\n", e.what());
    return 2;
  }
}
