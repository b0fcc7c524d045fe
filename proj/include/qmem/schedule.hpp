#pragma once

// Piecewise bias program s(t): holds and ramps.

#include <string>
#include <vector>

namespace qmem {

enum class RampShape { linear, smoothstep };

std::string to_string(RampShape shape);
RampShape ramp_shape_from_string(const std::string& name);

struct Segment {
  enum class Kind { hold, ramp };

  Kind kind = Kind::hold;
  double duration = 0.0;  ///< ns
  double s_start = 0.0;
  double s_end = 0.0;
  RampShape shape = RampShape::smoothstep;

  static Segment hold(double s, double duration);
  static Segment ramp(double from, double to, double duration, RampShape shape);
};

struct BiasSample {
  double s;
  double sdot;  ///< ds/dt in 1/ns
};

class BiasSchedule {
 public:
  BiasSchedule() = default;
  explicit BiasSchedule(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  double total_duration() const;

  /// Segment start times followed by the end time.
  std::vector<double> boundaries() const;

  /// Bias and its rate inside segment `index` at absolute time t.
  BiasSample sample_in(std::size_t index, double t) const;
  /// Bias at absolute time t; at a boundary the later segment wins.
  BiasSample sample(double t) const;

  double start_bias() const;
  double end_bias() const;

  /// Throws ConfigError on discontinuity, negative duration, or out-of-domain s.
  void validate() const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> starts_;
};

}  // namespace qmem
