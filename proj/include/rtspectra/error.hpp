// Copyright the rt-spectra authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rtspectra
{

enum class ErrorKind
{
  // equilibrium
  NoRoot,
  VacuumReached,
  InvalidLaw,
  OutOfDomain,
  // mode reduction / assembly
  GridMismatch,
  InvalidGrading,
  DefinitenessFailure,
  AssemblyError,
  // spectral
  IndefiniteDenominatorUnresolved,
  EigenSolverFailure,
  BracketFailure,
  IndefinitePencil,
  // criteria
  DegenerateMode,
  WrongFieldOrientation,
  NoConcentrationWorks,
  BadDirection,
  // evolution
  StepFailure,
  BlowupOverflow,
  DegenerateFit,
  // configuration
  ConfigParse,
  Validation,
};

constexpr std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::VacuumReached: return "VacuumReached";
    case ErrorKind::InvalidLaw: return "InvalidLaw";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::InvalidGrading: return "InvalidGrading";
    case ErrorKind::DefinitenessFailure: return "DefinitenessFailure";
    case ErrorKind::AssemblyError: return "AssemblyError";
    case ErrorKind::IndefiniteDenominatorUnresolved: return "IndefiniteDenominatorUnresolved";
    case ErrorKind::EigenSolverFailure: return "EigenSolverFailure";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::IndefinitePencil: return "IndefinitePencil";
    case ErrorKind::DegenerateMode: return "DegenerateMode";
    case ErrorKind::WrongFieldOrientation: return "WrongFieldOrientation";
    case ErrorKind::NoConcentrationWorks: return "NoConcentrationWorks";
    case ErrorKind::BadDirection: return "BadDirection";
    case ErrorKind::StepFailure: return "StepFailure";
    case ErrorKind::BlowupOverflow: return "BlowupOverflow";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::Validation: return "Validation";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable kind next to the message.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message)
{
  throw Error(kind, message);
}

}  // namespace rtspectra
