#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sgb/model.hpp"

namespace sgb {

// One step of an interferometer timeline: either a field segment of given
// duration with a magnetic-field gradient [T/m] felt through each arm's
// moment, or an instantaneous pair of per-arm momentum kicks.
struct TimelineElement {
  enum class Kind { field_segment, kick };

  Kind kind;
  double duration;  // [s], 0 for kicks
  double gradient;  // [T/m], 0 for kicks
  double dp_arm1;   // [kg m/s]
  double dp_arm2;   // [kg m/s]

  static TimelineElement make_field_segment(double duration, double gradient);
  static TimelineElement make_kick(double dp_arm1, double dp_arm2);

  double dp(ArmId arm) const { return arm == ArmId::arm1 ? dp_arm1 : dp_arm2; }
};

// A complete two-arm timeline with its stage bookkeeping. For every built-in
// geometry total_time == 2*t_dis + t_free holds exactly.
struct InterferometerSequence {
  std::vector<TimelineElement> elements;
  double t_dis;       // displacement stage duration [s]
  double t_free;      // free-evolution stage duration [s]
  double total_time;  // [s]
};

struct TrajectoryCheckpoint {
  double time;
  PhaseSpacePoint state;
};

// States of one arm at every element boundary, starting with the initial
// state at t = 0.
struct ArmTrajectory {
  std::vector<TrajectoryCheckpoint> checkpoints;

  const PhaseSpacePoint& final_state() const { return checkpoints.back().state; }
  double end_time() const { return checkpoints.back().time; }
};

// Free-evolution time that recloses the arms after the opening half of a
// butterfly, evaluated at k_grad = 0: reads dz = z2 - z1 and the relative
// momentum |p2 - p1| at the end of the half and returns 2 m dz / |p2 - p1|.
// Throws if the relative momentum vanishes or the result is negative.
double close_free_time(const AtomSpecies& species, const Environment& env,
                       std::span<const TimelineElement> opening_half);

// Stern-Gerlach butterfly: laser kick +hbar_k on arm2, gradient ramp(s)
// bringing the relative momentum to delta_p, free flight, and the mirrored
// closing half. t1 is the gradient-segment duration; t1 = 0 selects the
// pulse regime (differential kicks mu_i * J). The gradient override replaces
// the computed ramp gradient and reinterprets the momentum transfer
// accordingly (requires t1 > 0).
InterferometerSequence build_sg_butterfly(
    const AtomSpecies& species, const Environment& env, double delta_p,
    double total_time, double t1,
    std::optional<double> gradient_override = std::nullopt);

// Laser-only butterfly: +hbar_k on arm2 at 0, counter-kicks +-hbar_k on both
// arms at T/4 and 3T/4, -hbar_k on arm2 at T.
InterferometerSequence build_conventional_butterfly(const AtomSpecies& species,
                                                    const Environment& env,
                                                    double total_time);

// Mach-Zehnder: +delta_p on arm2 at 0, swap kick (+delta_p, -2 delta_p
// relative) at T/2, +delta_p on arm2 at T.
InterferometerSequence build_mach_zehnder(const AtomSpecies& species,
                                          const Environment& env,
                                          double delta_p, double total_time);

// Execute a timeline for both arms from a common initial state, accumulating
// the action phase: closed-form segment phases plus z*dp/(2 hbar) at every
// kick (the impulse limit of a segment's action integral).
std::pair<ArmTrajectory, ArmTrajectory> run(const InterferometerSequence& seq,
                                            const AtomSpecies& species,
                                            const Environment& env,
                                            const PhaseSpacePoint& initial);

} // namespace sgb
