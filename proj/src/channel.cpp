#include "dirnet/channel.hpp"

#include <string>

#include "dirnet/error.hpp"

namespace dirnet {

ChannelModel ChannelModel::rayleigh(double eta, GainModel gain, double beta) {
  if (!(eta >= 2.0) || !std::isfinite(eta)) {
    throw DomainError("path-loss exponent eta must be >= 2, got " +
                      std::to_string(eta));
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("path-loss constant beta must be > 0, got " +
                      std::to_string(beta));
  }
  ChannelModel m;
  m.kind_ = ChannelKind::kRayleighDirectional;
  m.eta_ = eta;
  m.beta_ = beta;
  m.gain_ = gain;
  return m;
}

ChannelModel ChannelModel::hard_disk(double r0) {
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw DomainError("hard-disk radius must be > 0, got " + std::to_string(r0));
  }
  ChannelModel m;
  m.kind_ = ChannelKind::kHardDisk;
  m.r0_ = r0;
  return m;
}

double connection_probability(const ChannelModel& model, const OrientedNode& a,
                              const OrientedNode& b) {
  return model.link_probability(b.x - a.x, b.y - a.y, std::cos(a.orientation),
                                std::sin(a.orientation), std::cos(b.orientation),
                                std::sin(b.orientation));
}

double effective_range(const ChannelModel& model, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw DomainError("probability cutoff must lie in (0, 1), got " +
                      std::to_string(tau));
  }
  if (!model.is_rayleigh()) return model.r0();
  const double g = model.gain().max_gain();
  return std::pow(std::log(1.0 / tau) * g * g / model.beta(), 1.0 / model.eta());
}

}  // namespace dirnet
