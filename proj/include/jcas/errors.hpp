#ifndef JCAS_ERRORS_HPP_
#define JCAS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace jcas {

/// Root of every error raised by the library. The CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define JCAS_DEFINE_ERROR(Name)                                                \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {}       \
  }

JCAS_DEFINE_ERROR(SchemaError);
JCAS_DEFINE_ERROR(StochasticityError);
JCAS_DEFINE_ERROR(NegativeProbability);
JCAS_DEFINE_ERROR(DomainError);
JCAS_DEFINE_ERROR(DimensionMismatch);
JCAS_DEFINE_ERROR(UnknownVariable);
JCAS_DEFINE_ERROR(OverlapError);
JCAS_DEFINE_ERROR(DegenerateInput);
JCAS_DEFINE_ERROR(CardinalityExceeded);
JCAS_DEFINE_ERROR(NotDegraded);
JCAS_DEFINE_ERROR(EmptyGrid);
JCAS_DEFINE_ERROR(MixedArity);
JCAS_DEFINE_ERROR(JointTooLarge);

#undef JCAS_DEFINE_ERROR

} // namespace jcas

#endif // JCAS_ERRORS_HPP_
