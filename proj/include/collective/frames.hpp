#ifndef COLLECTIVE_FRAMES_HPP
#define COLLECTIVE_FRAMES_HPP

#include <stdexcept>

#include "collective/environment.hpp"
#include "collective/matrix.hpp"
#include "collective/rational.hpp"

namespace collective {

/// Raised for frames that cannot exist: zero proper-time velocity, boosts
/// leaving the admissible cone, worldlines parallel to a time slice.
class FrameError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class BasisConvention {
  Normative,  // e_i = (vector(i), 1/(n+1))
  StepBasis,  // e_i = (vector(i), 1); experiments only, breaks w = 1 for the identity boost
};

/// Actual space-time directions as the columns of M, event = M * q.
class ActualBasis {
 public:
  /// Throws std::invalid_argument when the direction set fails
  /// check_actual_direction_count, SingularMatrixError if M is singular.
  static ActualBasis build(const DirectionSet& directions,
                           BasisConvention convention = BasisConvention::Normative);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return dimension_ + 1; }
  BasisConvention convention() const { return convention_; }
  const RationalMatrix& matrix() const { return m_; }
  const RationalMatrix& inverse() const { return m_inv_; }
  RationalVector direction(std::size_t i) const { return m_.column(i); }

 private:
  ActualBasis(std::size_t n, BasisConvention convention, RationalMatrix m, RationalMatrix m_inv)
      : dimension_(n), convention_(convention), m_(std::move(m)), m_inv_(std::move(m_inv)) {}

  std::size_t dimension_;
  BasisConvention convention_;
  RationalMatrix m_;
  RationalMatrix m_inv_;
};

/// Spatial velocity v and proper-time velocity w of one frame seen from another.
struct MotionParams {
  RationalVector v;
  Rational w;

  bool operator==(const MotionParams&) const = default;
};

struct DiagonalBoost {
  RationalVector lambda;

  static DiagonalBoost identity(std::size_t size) { return {RationalVector(size, Rational(1))}; }
  bool operator==(const DiagonalBoost&) const = default;
};

struct FrameMap {
  RationalMatrix matrix;  // L = M * diag(lambda) * M^-1
  DiagonalBoost boost;
};

/// M^-1 * event.
RationalVector q_coordinates(const ActualBasis& basis, const RationalVector& event);

/// Q-coordinates of the image (v/w, 1/w) of one unit of proper time.
DiagonalBoost lambda_from_motion(const ActualBasis& basis, const MotionParams& motion);

/// Inverse of lambda_from_motion: (a, b) = M * lambda, w = 1/b, v = a/b.
MotionParams motion_from_lambda(const ActualBasis& basis, const DiagonalBoost& boost);

FrameMap frame_map(const ActualBasis& basis, const DiagonalBoost& boost);

/// Entrywise product; diagonal boosts commute.
DiagonalBoost compose(const DiagonalBoost& outer, const DiagonalBoost& inner);
DiagonalBoost invert(const DiagonalBoost& boost);

MotionParams velocity_addition(const ActualBasis& basis, const MotionParams& first,
                               const MotionParams& second);

/// w_AB * w_BA for the frame pair given by (v, w).
Rational reciprocity_check(const ActualBasis& basis, const MotionParams& motion);

RationalVector transform_event(const FrameMap& frame, const RationalVector& event);

/// Spatial separation, on the target slice t = slice_time, of the images of
/// two points at rest in the source frame.
RationalVector rod_separation(const FrameMap& frame, const RationalVector& first,
                              const RationalVector& second, const Rational& slice_time);

/// |rod_separation| for one-dimensional frames.
Rational measure_length(const FrameMap& frame, const Rational& first, const Rational& second,
                        const Rational& slice_time);

}  // namespace collective

#endif  // COLLECTIVE_FRAMES_HPP
