#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "loewner/types.hpp"

namespace loewner {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition (bad sizes, ranges, tolerances).
class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public PreconditionViolated {
 public:
  using PreconditionViolated::PreconditionViolated;
};

class ParameterOutOfRange : public PreconditionViolated {
 public:
  using PreconditionViolated::PreconditionViolated;
};

/// m(A) <= 0: the numerical range of A touches the closed left half-plane.
class NotAccretive : public Error {
 public:
  NotAccretive(double m, const std::string& what) : Error(what), m_(m) {}
  double m() const { return m_; }

 private:
  double m_;
};

class NotDiagonalizable : public Error {
 public:
  NotDiagonalizable(double condition, const std::string& what)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// An eigenvalue sits inside the band where the sign of its real part cannot
/// be decided numerically and no exact classification was supplied.
class ZeroBoundaryAmbiguous : public Error {
 public:
  ZeroBoundaryAmbiguous(cplx eigenvalue, const std::string& what)
      : Error(what), eigenvalue_(eigenvalue) {}
  cplx eigenvalue() const { return eigenvalue_; }

 private:
  cplx eigenvalue_;
};

class GeneratorInvalid : public Error {
 public:
  GeneratorInvalid(CVector witness, double t, double value, const std::string& what)
      : Error(what), witness_(std::move(witness)), t_(t), value_(value) {}
  const CVector& witness() const { return witness_; }
  double time() const { return t_; }
  double value() const { return value_; }

 private:
  CVector witness_;
  double t_;
  double value_;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

/// The numerical trajectory left the unit ball.
class BallExit : public Error {
 public:
  BallExit(double t, double norm, const std::string& what) : Error(what), t_(t), norm_(norm) {}
  double time() const { return t_; }
  double norm() const { return norm_; }

 private:
  double t_;
  double norm_;
};

class StepFloor : public Error {
 public:
  StepFloor(double t, double h, const std::string& what) : Error(what), t_(t), h_(h) {}
  double time() const { return t_; }
  double step() const { return h_; }

 private:
  double t_;
  double h_;
};

class InsufficientTail : public PreconditionViolated {
 public:
  using PreconditionViolated::PreconditionViolated;
};

class MissingLowerOrder : public Error {
 public:
  MissingLowerOrder(int degree, const std::string& what) : Error(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(double t_max, double last_increment, const std::string& what)
      : Error(what), t_max_(t_max), last_increment_(last_increment) {}
  double t_max() const { return t_max_; }
  double last_increment() const { return last_increment_; }

 private:
  double t_max_;
  double last_increment_;
};

/// (multi-index exponents, output component) pair, components are 0-based.
struct ResonanceWitness {
  std::vector<int> m;
  int s = 0;
  cplx eigenvalue;
};

/// 0 is an eigenvalue of B_k and the requested computation needs B_k invertible.
class Resonant : public Error {
 public:
  Resonant(int k, std::vector<ResonanceWitness> witnesses, const std::string& what)
      : Error(what), k_(k), witnesses_(std::move(witnesses)) {}
  int degree() const { return k_; }
  const std::vector<ResonanceWitness>& witnesses() const { return witnesses_; }

 private:
  int k_;
  std::vector<ResonanceWitness> witnesses_;
};

/// Resonant and B_k F_k + N_k = 0 has no solution.
class NoHolomorphicSolution : public Resonant {
 public:
  using Resonant::Resonant;
};

class NotResonant : public Error {
 public:
  using Error::Error;
};

class BranchFailure : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace loewner
