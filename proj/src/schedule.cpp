#include "qmem/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "qmem/errors.hpp"
#include "qmem/junction.hpp"

namespace qmem {

std::string to_string(RampShape shape) {
  return shape == RampShape::linear ? "linear" : "smoothstep";
}

RampShape ramp_shape_from_string(const std::string& name) {
  if (name == "linear") return RampShape::linear;
  if (name == "smoothstep") return RampShape::smoothstep;
  throw ConfigError("unknown ramp shape '" + name + "' (expected linear or smoothstep)");
}

Segment Segment::hold(double s, double duration) {
  return Segment{Kind::hold, duration, s, s, RampShape::linear};
}

Segment Segment::ramp(double from, double to, double duration, RampShape shape) {
  return Segment{Kind::ramp, duration, from, to, shape};
}

BiasSchedule::BiasSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
  validate();
  double t = 0.0;
  starts_.reserve(segments_.size());
  for (const auto& seg : segments_) {
    starts_.push_back(t);
    t += seg.duration;
  }
}

double BiasSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& seg : segments_) t += seg.duration;
  return t;
}

std::vector<double> BiasSchedule::boundaries() const {
  std::vector<double> out = starts_;
  out.push_back(total_duration());
  return out;
}

BiasSample BiasSchedule::sample_in(std::size_t index, double t) const {
  const Segment& seg = segments_.at(index);
  if (seg.kind == Segment::Kind::hold || seg.duration <= 0.0) {
    return {seg.kind == Segment::Kind::hold ? seg.s_start : seg.s_end, 0.0};
  }
  const double u = std::clamp((t - starts_[index]) / seg.duration, 0.0, 1.0);
  const double delta = seg.s_end - seg.s_start;
  if (seg.shape == RampShape::linear) return {seg.s_start + delta * u, delta / seg.duration};
  const double shape = u * u * (3.0 - 2.0 * u);
  const double rate = 6.0 * u * (1.0 - u);
  return {seg.s_start + delta * shape, delta * rate / seg.duration};
}

BiasSample BiasSchedule::sample(double t) const {
  if (segments_.empty()) return {0.0, 0.0};
  std::size_t idx = 0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].duration <= 0.0) continue;
    idx = i;
    if (t < starts_[i] + segments_[i].duration) break;
  }
  return sample_in(idx, t);
}

double BiasSchedule::start_bias() const {
  return segments_.empty() ? 0.0 : segments_.front().s_start;
}

double BiasSchedule::end_bias() const { return segments_.empty() ? 0.0 : segments_.back().s_end; }

void BiasSchedule::validate() const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (!(seg.duration >= 0.0) || !std::isfinite(seg.duration))
      throw ConfigError("segment " + std::to_string(i) + " has invalid duration");
    if (!bias_in_domain(seg.s_start) || !bias_in_domain(seg.s_end))
      throw ConfigError("segment " + std::to_string(i) + " bias outside [0, 0.99)");
    if (seg.kind == Segment::Kind::hold && seg.s_start != seg.s_end)
      throw ConfigError("hold segment " + std::to_string(i) + " changes bias");
    if (i > 0 && std::abs(segments_[i - 1].s_end - seg.s_start) > 1e-12)
      throw ConfigError("schedule discontinuous at segment " + std::to_string(i));
  }
}

}  // namespace qmem
