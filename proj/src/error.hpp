#pragma once

#include <stdexcept>
#include <string>

namespace krf {

// Status values shared with the C API and the CLI exit codes.
enum class Status : int {
  Ok = 0,
  Config = 1,
  Kaehler = 2,
  Verdict = 3,
  Invalid = 4,
  Io = 5,
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(Status s, const std::string& what) : std::runtime_error(what), status_(s) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

// Configuration problem; `path` is the dotted field path ("model.a").
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& what)
      : Error(Status::Config, path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(Status::Invalid, what) {}
};

// The evolving potential stopped being a metric: F' or F'' dropped below the
// configured floor.  Records where and when.
class KaehlerViolation : public Error {
 public:
  KaehlerViolation(double t, int index, double rho, const std::string& which)
      : Error(Status::Kaehler, "Kaehler condition violated at t=" + std::to_string(t) +
                                   ", rho=" + std::to_string(rho) + " (" + which + ")"),
        t_(t),
        index_(index),
        rho_(rho),
        which_(which) {}
  double t() const { return t_; }
  int index() const { return index_; }
  double rho() const { return rho_; }
  const std::string& which() const { return which_; }

 private:
  double t_;
  int index_;
  double rho_;
  std::string which_;
};

class SolverFailure : public Error {
 public:
  SolverFailure(double t, const std::string& what)
      : Error(Status::Internal, "solver failure at t=" + std::to_string(t) + ": " + what), t_(t) {}
  double t() const { return t_; }

 private:
  double t_;
};

}  // namespace krf
