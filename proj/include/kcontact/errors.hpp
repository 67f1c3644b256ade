#pragma once

#include <stdexcept>
#include <string>

namespace kcontact {

// Every library failure derives from Error. The exit code is the CLI contract:
// 2 config, 3 contract, 4 divergence, 5 integrability.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg), msg_(msg), full_(msg) {}

  const char* what() const noexcept override { return full_.c_str(); }
  const std::string& stage() const { return stage_; }
  const std::string& message() const { return msg_; }

  // Pipelines tag an error with the stage that raised it before rethrowing.
  void set_stage(const std::string& stage) {
    stage_ = stage;
    full_ = "[" + stage + "] " + msg_;
  }

  virtual int exit_code() const { return 3; }
  virtual const char* kind() const { return "error"; }

 private:
  std::string msg_;
  std::string full_;
  std::string stage_;
};

#define KCONTACT_ERROR(Name, Base, code, label)                      \
  class Name : public Base {                                         \
   public:                                                           \
    using Base::Base;                                                \
    int exit_code() const override { return code; }                 \
    const char* kind() const override { return label; }              \
  };

KCONTACT_ERROR(ShapeError, Error, 3, "shape")
KCONTACT_ERROR(DomainError, Error, 3, "domain")
KCONTACT_ERROR(PreconditionError, Error, 3, "precondition")
KCONTACT_ERROR(ContractError, Error, 3, "contract")
KCONTACT_ERROR(SolverError, Error, 3, "solver")
KCONTACT_ERROR(RegularityError, SolverError, 3, "regularity")
KCONTACT_ERROR(NoSolutionError, Error, 3, "no-solution")
KCONTACT_ERROR(ConfigError, Error, 2, "config")
KCONTACT_ERROR(DivergenceError, Error, 4, "divergence")
KCONTACT_ERROR(IntegrabilityError, Error, 5, "integrability")

#undef KCONTACT_ERROR

}  // namespace kcontact
