#include "qis/denoise.hpp"

#include <cmath>
#include <map>

namespace qis::denoise {

void gaussian_channel(const double* in, double* out, int width, int height,
                      double sigma, const DenoiserSpec& spec);
void nlm_channel(const double* in, double* out, int width, int height,
                 double sigma, const DenoiserSpec& spec);
void tv_channel(const double* in, double* out, int width, int height,
                double sigma, const DenoiserSpec& spec);

namespace {

std::map<std::string, ChannelDenoiser>& registry() {
  static std::map<std::string, ChannelDenoiser> table = [] {
    std::map<std::string, ChannelDenoiser> t;
    t["gaussian"] = gaussian_channel;
    t["nlm"] = nlm_channel;
    t["tv"] = tv_channel;
    t["identity"] = [](const double* in, double* out, int width, int height,
                       double, const DenoiserSpec&) {
      std::copy(in, in + static_cast<std::size_t>(width) * height, out);
    };
    return t;
  }();
  return table;
}

const ChannelDenoiser& lookup(const std::string& kind) {
  const auto it = registry().find(kind);
  if (it == registry().end())
    throw std::invalid_argument("unknown denoiser kind '" + kind + "'");
  return it->second;
}

void check_finite(const Image& image) {
  for (double v : image.data()) {
    if (!std::isfinite(v))
      throw std::invalid_argument("denoise: non-finite input value");
  }
}

} // namespace

void DenoiserSpec::validate() const {
  if (!(sigma > 0.0))
    throw std::invalid_argument("DenoiserSpec: sigma must be > 0");
  if (channel_sigmas) {
    for (double s : *channel_sigmas)
      if (!(s > 0.0))
        throw std::invalid_argument("DenoiserSpec: channel sigma must be > 0");
  }
  if (patch_radius < 0 || search_radius < 0)
    throw std::invalid_argument("DenoiserSpec: radii must be >= 0");
  if (!(smooth_weight > 0.0))
    throw std::invalid_argument("DenoiserSpec: smooth_weight must be > 0");
}

void register_denoiser(const std::string& kind, ChannelDenoiser fn) {
  registry()[kind] = std::move(fn);
}

bool is_registered(const std::string& kind) {
  return registry().count(kind) != 0;
}

std::vector<std::string> registered_kinds() {
  std::vector<std::string> kinds;
  for (const auto& [k, v] : registry()) kinds.push_back(k);
  return kinds;
}

Image denoise(const Image& image, const DenoiserSpec& spec) {
  spec.validate();
  check_finite(image);
  if (image.channels() != 1 && image.channels() != 3)
    throw std::invalid_argument("denoise: image must have 1 or 3 planes");
  const ChannelDenoiser& fn = lookup(spec.kind);
  Image out(image.width(), image.height(), image.channels());
  out.colorspace = image.colorspace;
  for (int c = 0; c < image.channels(); ++c) {
    const double sigma =
        spec.channel_sigmas && image.channels() == 3 ? (*spec.channel_sigmas)[c]
                                                     : spec.sigma;
    fn(image.plane(c), out.plane(c), image.width(), image.height(), sigma,
       spec);
  }
  return out;
}

Image denoise_per_channel(const Image& image,
                          const std::array<double, 3>& sigmas,
                          const DenoiserSpec& spec) {
  if (image.channels() != 3)
    throw std::invalid_argument("denoise_per_channel: image must have 3 planes");
  DenoiserSpec per = spec;
  per.channel_sigmas = sigmas;
  return denoise(image, per);
}

} // namespace qis::denoise
