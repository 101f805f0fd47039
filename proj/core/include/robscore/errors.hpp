#pragma once

#include <stdexcept>
#include <string>

namespace robscore {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ROBSCORE_DEFINE_ERROR(Name) \
  class Name : public Error {       \
   public:                          \
    using Error::Error;             \
  }

ROBSCORE_DEFINE_ERROR(IngestError);
ROBSCORE_DEFINE_ERROR(SplitError);
ROBSCORE_DEFINE_ERROR(SerdeError);
ROBSCORE_DEFINE_ERROR(SearchError);
ROBSCORE_DEFINE_ERROR(GenError);
ROBSCORE_DEFINE_ERROR(DomainError);
ROBSCORE_DEFINE_ERROR(InternalError);
ROBSCORE_DEFINE_ERROR(TrainError);
ROBSCORE_DEFINE_ERROR(ConstructionError);
ROBSCORE_DEFINE_ERROR(SolverError);
ROBSCORE_DEFINE_ERROR(ContractError);
ROBSCORE_DEFINE_ERROR(EvalError);

#undef ROBSCORE_DEFINE_ERROR

}  // namespace robscore
