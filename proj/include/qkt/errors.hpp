#pragma once

#include <stdexcept>
#include <string>

namespace qkt {

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QKT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// series-core
QKT_DEFINE_ERROR(IncompatibleSeries);
QKT_DEFINE_ERROR(UnknownVariable);
QKT_DEFINE_ERROR(NotInvertible);
QKT_DEFINE_ERROR(SingularMetric);

// kring
QKT_DEFINE_ERROR(InvalidPresentation);
QKT_DEFINE_ERROR(RingMismatch);

// descendents
QKT_DEFINE_ERROR(InvalidIndex);
QKT_DEFINE_ERROR(NotReducible);

// correlators
QKT_DEFINE_ERROR(ModuliNonexistent);
QKT_DEFINE_ERROR(SchemaError);
QKT_DEFINE_ERROR(DuplicateEntry);
QKT_DEFINE_ERROR(IneffectiveDegree);
QKT_DEFINE_ERROR(IncompleteTable);

// qde
QKT_DEFINE_ERROR(TruncationMismatch);

#undef QKT_DEFINE_ERROR

}  // namespace qkt
