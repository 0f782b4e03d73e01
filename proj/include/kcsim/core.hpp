#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kcsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Atomic units: hbar = 1, electron mass = 1. The proton mass in these units.
inline constexpr double kProtonMass = 1836.0;

/// Chemical accuracy, 1.5 mE_h.
inline constexpr double kChemicalAccuracy = 1.5e-3;

enum class ErrorCode {
  InvalidDimension,
  InvalidArgument,
  InfeasibleParameters,
  NotADoubleWell,
  SolverFailure,
  NotFound,
  DegenerateFilter,
  NumericalFailure,
  UndefinedTimescale,
  FitFailure,
  Config,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid dimension";
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::InfeasibleParameters: return "infeasible parameters";
    case ErrorCode::NotADoubleWell: return "not a double well";
    case ErrorCode::SolverFailure: return "solver failure";
    case ErrorCode::NotFound: return "not found";
    case ErrorCode::DegenerateFilter: return "degenerate filter";
    case ErrorCode::NumericalFailure: return "numerical failure";
    case ErrorCode::UndefinedTimescale: return "undefined timescale";
    case ErrorCode::FitFailure: return "fit failure";
    case ErrorCode::Config: return "config error";
  }
  return "error";
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const CMatrix& m) {
  return max_abs(m - m.adjoint());
}

}  // namespace kcsim
