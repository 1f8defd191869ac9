#pragma once

#include <stdexcept>
#include <string>

namespace physprop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point to be projected lies at or behind the camera plane.
class BehindCameraError : public Error {
 public:
  using Error::Error;
};

/// Three of the four correspondences are (near-)collinear; the DLT system is rank-deficient.
class DegenerateConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Homogeneous coordinate vanished under a projective map.
class PointAtInfinityError : public Error {
 public:
  using Error::Error;
};

/// A bounce trajectory shows no ascent above the noise floor after ground contact.
class NoBounceError : public Error {
 public:
  using Error::Error;
};

/// Area series never grows, so the spread slope is not positive.
class NonPositiveSlopeError : public Error {
 public:
  using Error::Error;
};

/// Not enough usable samples for the requested fit or pairing.
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

/// Fitted parabola curves the wrong way (acceleration along the motion direction).
class WrongCurvatureError : public Error {
 public:
  using Error::Error;
};

/// Relative score requires strictly positive estimates.
class NonPositiveEstimateError : public Error {
 public:
  using Error::Error;
};

/// ROC AUC needs at least one positive and one negative label.
class SingleClassError : public Error {
 public:
  using Error::Error;
};

/// Pearson correlation is undefined for a constant series.
class ZeroVarianceError : public Error {
 public:
  using Error::Error;
};

/// GRU model has no parameters (not initialized / not trained).
class ModelNotTrainedError : public Error {
 public:
  using Error::Error;
};

/// Dataset files are missing, malformed, or have an unsupported schema version.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A computed metric came out non-finite.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace physprop
