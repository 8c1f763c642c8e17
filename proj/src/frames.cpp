#include "collective/frames.hpp"

namespace collective {

namespace {

void check_size(const RationalVector& v, std::size_t expected, const char* what) {
  if (v.size() != expected) {
    throw std::invalid_argument(std::string(what) + " has " + std::to_string(v.size()) +
                                " components, expected " + std::to_string(expected));
  }
}

}  // namespace

ActualBasis ActualBasis::build(const DirectionSet& directions, BasisConvention convention) {
  const auto report = check_actual_direction_count(directions);
  if (!report.ok()) throw std::invalid_argument("invalid direction set: " + report.summary());
  const std::size_t n = directions.dimension();
  const Rational time_component =
      convention == BasisConvention::Normative ? Rational(1, static_cast<unsigned long>(n + 1)) : Rational(1);
  std::vector<RationalVector> columns;
  for (DirIndex i = 0; i <= n; ++i) {
    RationalVector e;
    for (auto x : directions.vector(i)) e.emplace_back(static_cast<long>(x));
    e.push_back(time_component);
    columns.push_back(std::move(e));
  }
  RationalMatrix m = RationalMatrix::from_columns(columns);
  RationalMatrix m_inv = m.inverse();
  return ActualBasis(n, convention, std::move(m), std::move(m_inv));
}

RationalVector q_coordinates(const ActualBasis& basis, const RationalVector& event) {
  check_size(event, basis.size(), "event");
  return basis.inverse() * event;
}

DiagonalBoost lambda_from_motion(const ActualBasis& basis, const MotionParams& motion) {
  check_size(motion.v, basis.dimension(), "velocity");
  if (motion.w <= 0) throw FrameError("degenerate frame (zero proper-time velocity)");
  RationalVector image = (1 / motion.w) * motion.v;
  image.push_back(1 / motion.w);
  DiagonalBoost boost{basis.inverse() * image};
  for (const auto& l : boost.lambda) {
    if (l <= 0) throw FrameError("velocity " + format_vector(motion.v) + " outside admissible cone");
  }
  return boost;
}

MotionParams motion_from_lambda(const ActualBasis& basis, const DiagonalBoost& boost) {
  check_size(boost.lambda, basis.size(), "boost");
  RationalVector image = basis.matrix() * boost.lambda;
  const Rational b = image.back();
  if (b <= 0) throw FrameError("boost has non-positive time component");
  image.pop_back();
  return {(1 / b) * image, 1 / b};
}

FrameMap frame_map(const ActualBasis& basis, const DiagonalBoost& boost) {
  check_size(boost.lambda, basis.size(), "boost");
  for (const auto& l : boost.lambda) {
    if (l <= 0) throw FrameError("boost entries must be positive");
  }
  return {basis.matrix() * RationalMatrix::diagonal(boost.lambda) * basis.inverse(), boost};
}

DiagonalBoost compose(const DiagonalBoost& outer, const DiagonalBoost& inner) {
  check_size(inner.lambda, outer.lambda.size(), "boost");
  DiagonalBoost out{outer.lambda};
  for (std::size_t i = 0; i < out.lambda.size(); ++i) out.lambda[i] *= inner.lambda[i];
  return out;
}

DiagonalBoost invert(const DiagonalBoost& boost) {
  DiagonalBoost out{boost.lambda};
  for (auto& l : out.lambda) {
    if (l == 0) throw FrameError("cannot invert a boost with a zero entry");
    l = 1 / l;
  }
  return out;
}

MotionParams velocity_addition(const ActualBasis& basis, const MotionParams& first,
                               const MotionParams& second) {
  return motion_from_lambda(
      basis, compose(lambda_from_motion(basis, first), lambda_from_motion(basis, second)));
}

Rational reciprocity_check(const ActualBasis& basis, const MotionParams& motion) {
  const MotionParams back = motion_from_lambda(basis, invert(lambda_from_motion(basis, motion)));
  return motion.w * back.w;
}

RationalVector transform_event(const FrameMap& frame, const RationalVector& event) {
  return frame.matrix * event;
}

RationalVector rod_separation(const FrameMap& frame, const RationalVector& first,
                              const RationalVector& second, const Rational& slice_time) {
  const std::size_t n = frame.matrix.rows() - 1;
  check_size(first, n, "rod endpoint");
  check_size(second, n, "rod endpoint");
  RationalVector unit_time(n + 1, Rational(0));
  unit_time[n] = 1;
  const RationalVector drift = frame.matrix * unit_time;
  if (drift[n] == 0) throw FrameError("worldline parallel to the slice");

  const auto on_slice = [&](const RationalVector& p) {
    RationalVector event = p;
    event.push_back(Rational(0));
    const RationalVector base = frame.matrix * event;
    const Rational s = (slice_time - base[n]) / drift[n];
    RationalVector point = base + s * drift;
    point.pop_back();
    return point;
  };
  return on_slice(second) - on_slice(first);
}

Rational measure_length(const FrameMap& frame, const Rational& first, const Rational& second,
                        const Rational& slice_time) {
  if (frame.matrix.rows() != 2) throw std::invalid_argument("measure_length needs a one-dimensional frame");
  const RationalVector sep = rod_separation(frame, {first}, {second}, slice_time);
  return abs(sep[0]);
}

}  // namespace collective
