// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace meibo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ImageTooSmall : public Error {
 public:
  explicit ImageTooSmall(const std::string& msg) : Error(msg) {}
};

class InvalidKernelSize : public Error {
 public:
  explicit InvalidKernelSize(const std::string& msg) : Error(msg) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class EmptyMask : public Error {
 public:
  explicit EmptyMask(const std::string& msg) : Error(msg) {}
};

class TooFewPoints : public Error {
 public:
  explicit TooFewPoints(const std::string& msg) : Error(msg) {}
};

class NoEyelidDetected : public Error {
 public:
  explicit NoEyelidDetected(const std::string& msg) : Error(msg) {}
};

class EmptyRoi : public Error {
 public:
  explicit EmptyRoi(const std::string& msg) : Error(msg) {}
};

class DegenerateGland : public Error {
 public:
  explicit DegenerateGland(const std::string& msg) : Error(msg) {}
};

class NoValidSamples : public Error {
 public:
  explicit NoValidSamples(const std::string& msg) : Error(msg) {}
};

class DegenerateChord : public Error {
 public:
  explicit DegenerateChord(const std::string& msg) : Error(msg) {}
};

class ZeroBackground : public Error {
 public:
  explicit ZeroBackground(const std::string& msg) : Error(msg) {}
};

class EmptyReference : public Error {
 public:
  explicit EmptyReference(const std::string& msg) : Error(msg) {}
};

class SpecInfeasible : public Error {
 public:
  explicit SpecInfeasible(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace meibo
