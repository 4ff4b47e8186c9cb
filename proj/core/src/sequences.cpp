#include "sgb/sequences.hpp"

#include <cmath>

#include "sgb/propagator.hpp"

namespace sgb {

TimelineElement TimelineElement::make_field_segment(double duration,
                                                    double gradient) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw PhysicsError("field segment: duration must be finite and >= 0");
  if (!std::isfinite(gradient))
    throw PhysicsError("field segment: gradient must be finite");
  return TimelineElement{Kind::field_segment, duration, gradient, 0.0, 0.0};
}

TimelineElement TimelineElement::make_kick(double dp_arm1, double dp_arm2) {
  if (!std::isfinite(dp_arm1) || !std::isfinite(dp_arm2))
    throw PhysicsError("kick: impulses must be finite");
  return TimelineElement{Kind::kick, 0.0, 0.0, dp_arm1, dp_arm2};
}

namespace {

// Advance one arm through one element (state update only; phase handled by
// the caller so run() owns the action bookkeeping in one place).
void advance_arm(PhaseSpacePoint& s, const TimelineElement& el,
                 const AtomSpecies& species, const Environment& env,
                 ArmId arm) {
  if (el.kind == TimelineElement::Kind::field_segment) {
    const double force = arm_force(species, env, arm, el.gradient);
    const double dphase = segment_phase(s, force, env.k_grad, species.mass,
                                        el.duration, env.hbar);
    s = propagate_segment(s, force, env.k_grad, species.mass, el.duration).end;
    s.phase += dphase;
  } else {
    const double dp = el.dp(arm);
    s.phase += s.z * dp / (2.0 * env.hbar);
    s = apply_kick(s, dp);
  }
}

void push_if_kick_nonzero(std::vector<TimelineElement>& elements, double dp1,
                          double dp2) {
  if (dp1 != 0.0 || dp2 != 0.0)
    elements.push_back(TimelineElement::make_kick(dp1, dp2));
}

} // namespace

double close_free_time(const AtomSpecies& species, const Environment& env,
                       std::span<const TimelineElement> opening_half) {
  const Environment env0 = env.with_k_grad(0.0);
  PhaseSpacePoint s1, s2;
  for (const TimelineElement& el : opening_half) {
    advance_arm(s1, el, species, env0, ArmId::arm1);
    advance_arm(s2, el, species, env0, ArmId::arm2);
  }
  const double dz = s2.z - s1.z;
  const double dp_rel = std::fabs(s2.p - s1.p);
  if (dp_rel == 0.0)
    throw PhysicsError(
        "close_free_time: zero relative momentum at the end of the opening half");
  const double t_free = 2.0 * species.mass * dz / dp_rel;
  if (!(t_free >= 0.0) || !std::isfinite(t_free))
    throw PhysicsError("close_free_time: negative or non-finite free time");
  return t_free;
}

InterferometerSequence build_sg_butterfly(
    const AtomSpecies& species, const Environment& env, double delta_p,
    double total_time, double t1, std::optional<double> gradient_override) {
  if (species.mu1 == species.mu2)
    throw PhysicsError("build_sg_butterfly: degenerate magnetic moments");
  if (!(delta_p > 0.0) || !std::isfinite(delta_p))
    throw PhysicsError("build_sg_butterfly: delta_p must be finite and > 0");
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw PhysicsError("build_sg_butterfly: total_time must be finite and > 0");
  if (!(t1 >= 0.0) || !std::isfinite(t1))
    throw PhysicsError("build_sg_butterfly: t1 must be finite and >= 0");

  const double dmu = species.mu2 - species.mu1;
  const double hk = species.hbar_k;

  std::vector<TimelineElement> opening;
  double t2 = 0.0;
  double t3 = 0.0;
  double gradient = 0.0;
  double impulse1 = 0.0;  // pulse-regime differential impulses [T m / ... ]
  double impulse3 = 0.0;

  if (t1 == 0.0) {
    if (gradient_override)
      throw PhysicsError(
          "build_sg_butterfly: gradient override requires t1 > 0");
    if (delta_p < hk)
      throw PhysicsError("build_sg_butterfly: delta_p must be >= hbar_k");
    // Pulse regime: differential kicks J with per-arm impulse mu_i * J.
    impulse1 = (delta_p - hk) / dmu;
    impulse3 = -2.0 * delta_p / dmu;
    t2 = total_time / 4.0;
    if (!(t2 > 0.0))
      throw PhysicsError("build_sg_butterfly: total_time too short");

    push_if_kick_nonzero(opening, 0.0, hk);
    push_if_kick_nonzero(opening, species.mu1 * impulse1,
                         species.mu2 * impulse1);
    opening.push_back(TimelineElement::make_field_segment(t2, 0.0));
    push_if_kick_nonzero(opening, species.mu1 * impulse3,
                         species.mu2 * impulse3);
  } else {
    double dp_eff = delta_p;
    if (gradient_override) {
      gradient = *gradient_override;
      dp_eff = dmu * gradient * t1 + hk;
      if (!(dp_eff > hk))
        throw PhysicsError(
            "build_sg_butterfly: gradient override must add momentum along "
            "the splitting direction");
    } else {
      if (!(delta_p > hk))
        throw PhysicsError(
            "build_sg_butterfly: delta_p must exceed hbar_k when t1 > 0");
      gradient = (delta_p - hk) / (dmu * t1);
    }
    t3 = 2.0 * dp_eff * t1 / (dp_eff - hk);
    t2 = (total_time - t1 * (3.0 + hk / dp_eff) - 2.0 * t3) / 4.0;
    if (t2 < 0.0)
      throw PhysicsError(
          "build_sg_butterfly: t1 + t3 exceed the displacement-time budget "
          "for the requested total_time");

    push_if_kick_nonzero(opening, 0.0, hk);
    opening.push_back(TimelineElement::make_field_segment(t1, gradient));
    opening.push_back(TimelineElement::make_field_segment(t2, 0.0));
    opening.push_back(TimelineElement::make_field_segment(t3, -gradient));
  }

  const double t_free = close_free_time(species, env, opening);

  InterferometerSequence seq;
  seq.elements = opening;
  seq.elements.push_back(TimelineElement::make_field_segment(t_free, 0.0));
  if (t1 == 0.0) {
    push_if_kick_nonzero(seq.elements, -species.mu1 * impulse3,
                         -species.mu2 * impulse3);
    seq.elements.push_back(TimelineElement::make_field_segment(t2, 0.0));
    push_if_kick_nonzero(seq.elements, -species.mu1 * impulse1,
                         -species.mu2 * impulse1);
  } else {
    seq.elements.push_back(TimelineElement::make_field_segment(t3, gradient));
    seq.elements.push_back(TimelineElement::make_field_segment(t2, 0.0));
    seq.elements.push_back(TimelineElement::make_field_segment(t1, -gradient));
  }
  push_if_kick_nonzero(seq.elements, 0.0, -hk);

  seq.t_dis = t1 + t2 + t3;
  seq.t_free = t_free;
  seq.total_time = 2.0 * seq.t_dis + seq.t_free;
  return seq;
}

InterferometerSequence build_conventional_butterfly(const AtomSpecies& species,
                                                    const Environment& env,
                                                    double total_time) {
  (void)env;
  const double hk = species.hbar_k;
  if (!(hk > 0.0))
    throw PhysicsError("build_conventional_butterfly: hbar_k must be > 0");
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw PhysicsError(
        "build_conventional_butterfly: total_time must be finite and > 0");

  const double quarter = total_time / 4.0;
  InterferometerSequence seq;
  seq.elements = {
      TimelineElement::make_kick(0.0, hk),
      TimelineElement::make_field_segment(quarter, 0.0),
      TimelineElement::make_kick(hk, -hk),
      TimelineElement::make_field_segment(2.0 * quarter, 0.0),
      TimelineElement::make_kick(-hk, hk),
      TimelineElement::make_field_segment(quarter, 0.0),
      TimelineElement::make_kick(0.0, -hk),
  };
  seq.t_dis = quarter;
  seq.t_free = 2.0 * quarter;
  seq.total_time = 2.0 * seq.t_dis + seq.t_free;
  return seq;
}

InterferometerSequence build_mach_zehnder(const AtomSpecies& species,
                                          const Environment& env,
                                          double delta_p, double total_time) {
  (void)species;
  (void)env;
  if (!(delta_p > 0.0) || !std::isfinite(delta_p))
    throw PhysicsError("build_mach_zehnder: delta_p must be finite and > 0");
  if (!(total_time > 0.0) || !std::isfinite(total_time))
    throw PhysicsError(
        "build_mach_zehnder: total_time must be finite and > 0");

  const double half = total_time / 2.0;
  InterferometerSequence seq;
  seq.elements = {
      TimelineElement::make_kick(0.0, delta_p),
      TimelineElement::make_field_segment(half, 0.0),
      TimelineElement::make_kick(delta_p, -delta_p),
      TimelineElement::make_field_segment(half, 0.0),
      TimelineElement::make_kick(0.0, delta_p),
  };
  seq.t_dis = half;
  seq.t_free = 0.0;
  seq.total_time = 2.0 * seq.t_dis + seq.t_free;
  return seq;
}

std::pair<ArmTrajectory, ArmTrajectory> run(const InterferometerSequence& seq,
                                            const AtomSpecies& species,
                                            const Environment& env,
                                            const PhaseSpacePoint& initial) {
  ArmTrajectory traj1, traj2;
  traj1.checkpoints.reserve(seq.elements.size() + 1);
  traj2.checkpoints.reserve(seq.elements.size() + 1);
  traj1.checkpoints.push_back({0.0, initial});
  traj2.checkpoints.push_back({0.0, initial});

  PhaseSpacePoint s1 = initial;
  PhaseSpacePoint s2 = initial;
  double t = 0.0;
  for (const TimelineElement& el : seq.elements) {
    advance_arm(s1, el, species, env, ArmId::arm1);
    advance_arm(s2, el, species, env, ArmId::arm2);
    t += el.duration;
    traj1.checkpoints.push_back({t, s1});
    traj2.checkpoints.push_back({t, s2});
  }
  return {traj1, traj2};
}

} // namespace sgb
