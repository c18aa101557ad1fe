#pragma once

#include "padmm/dnnsdp.hpp"

namespace padmm::dnnsdp::detail {

/// Layout x = (Z, y_E), y = S, z = X.
class Alg1Formulation final : public Formulation {
 public:
  Alg1Formulation(const DnnsdpProblem& p, double epsilon, Variant v);

  Variant variant() const override { return variant_; }
  admm::IterateState pack(const DualIterate& it) const override;
  DualIterate unpack(const admm::IterateState& s) const override;
  BlockOutcome block_x(const DualIterate& it, double sigma,
                       const admm::BlockTarget& target) const override;
  BlockOutcome block_y(const DualIterate& it, double sigma,
                       const admm::BlockTarget& target) const override;

  Vector residual(const Vector& x, const Vector& y) const override;
  Vector apply_y_map(const Vector& y) const override { return y; }
  double x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double y_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double x_metric_floor(double sigma) const override;
  double y_metric_floor(double sigma) const override { return sigma; }

 protected:
  Vector pack_x(const DualIterate& it) const override;
  Vector pack_y(const DualIterate& it) const override;

 private:
  Variant variant_;
};

/// Shared y-block of the inequality formulations: layout y = (y_E, S).
class InequalityFormulation : public Formulation {
 public:
  InequalityFormulation(const DnnsdpProblem& p, double epsilon);

  BlockOutcome block_y(const DualIterate& it, double sigma,
                       const admm::BlockTarget& target) const override;
  double y_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double y_metric_floor(double sigma) const override;

 protected:
  Vector pack_y(const DualIterate& it) const override;
  void unpack_y(const Vector& y, DualIterate& it) const;
  /// A_E^* y_E + S as a flat vector.
  Vector y_image(const Vector& y) const;

  Matrix ai_gram_;
  Vector ai_spectrum_;  ///< eigenvalues of A_I A_I^*, ascending
};

/// Layout x = (y_I, Z), y = (y_E, S), z = X.
class Alg2Formulation final : public InequalityFormulation {
 public:
  /// rho_scale multiplies the power-method estimate of lambda_max(A_I A_I^*).
  Alg2Formulation(const DnnsdpProblem& p, double epsilon, double rho_scale, Variant v);

  Variant variant() const override { return variant_; }
  admm::IterateState pack(const DualIterate& it) const override;
  DualIterate unpack(const admm::IterateState& s) const override;
  BlockOutcome block_x(const DualIterate& it, double sigma,
                       const admm::BlockTarget& target) const override;

  Vector residual(const Vector& x, const Vector& y) const override;
  Vector apply_y_map(const Vector& y) const override { return y_image(y); }
  double x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double x_metric_floor(double sigma) const override;

  double rho() const { return rho_; }

 protected:
  Vector pack_x(const DualIterate& it) const override;

 private:
  Variant variant_;
  double rho_;
  double x_floor_unit_;  ///< smallest eigenvalue of T_f / sigma
};

/// Layout x = (y_I, z, Z), y = (y_E, S), z = (X, x).
class Alg3Formulation final : public InequalityFormulation {
 public:
  Alg3Formulation(const DnnsdpProblem& p, double epsilon, Variant v);

  Variant variant() const override { return variant_; }
  admm::IterateState pack(const DualIterate& it) const override;
  DualIterate unpack(const admm::IterateState& s) const override;
  BlockOutcome block_x(const DualIterate& it, double sigma,
                       const admm::BlockTarget& target) const override;

  Vector residual(const Vector& x, const Vector& y) const override;
  Vector apply_y_map(const Vector& y) const override;
  double x_quadratic(const Vector& v, double sigma, admm::QuadWeights w) const override;
  double x_metric_floor(double sigma) const override;

 protected:
  Vector pack_x(const DualIterate& it) const override;

 private:
  Variant variant_;
  double x_floor_unit_;
};

}  // namespace padmm::dnnsdp::detail
