#pragma once

#include <stdexcept>
#include <string>

namespace hybridbid {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file (JSON / CSV / LP syntax).
class ParseError : public Error {
  public:
    using Error::Error;
};

/// A domain invariant was violated; the message names the offending field.
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// A per-hour series does not match the instance horizon.
class LengthMismatch : public Error {
  public:
    using Error::Error;
};

/// No usable MILP solver executable could be located.
class BackendUnavailable : public Error {
  public:
    using Error::Error;
};

/// The solver process failed or returned an unusable result.
class NumericFailure : public Error {
  public:
    using Error::Error;
};

/// A point passed to evaluate_constraints does not cover every variable.
class MissingVariable : public Error {
  public:
    using Error::Error;
};

/// A battery SOE segment exceeds its piecewise-linear width.
class SegmentOverflow : public Error {
  public:
    using Error::Error;
};

/// Electrolyzer power incompatible with its on/off state.
class PowerOutOfRange : public Error {
  public:
    using Error::Error;
};

/// The robust contribution of a solved objective disagrees with the
/// analytic worst case.
class DualityGap : public Error {
  public:
    DualityGap(int scenario, double magnitude, const std::string& what)
        : Error(what), scenario(scenario), magnitude(magnitude) {}
    int scenario;
    double magnitude;
};

/// A solution object lacks values required by an oracle.
class IncompleteSolution : public Error {
  public:
    using Error::Error;
};

/// Exhaustive enumeration would exceed the node cap.
class TooLarge : public Error {
  public:
    using Error::Error;
};

/// Filesystem failure while writing report artifacts.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace hybridbid
