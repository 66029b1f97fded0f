#include "cssl/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace cssl {
namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("prox: sigma must be positive and finite");
}

void require_inputs(const Vector& u, const GroupPartition& groups, const PenaltyParams& params) {
  if (u.size() != groups.dimension()) throw DimensionError("prox_p: size does not match groups");
  params.validate();
}

Vector soft_threshold(const Vector& u, double t) {
  return u.array().sign() * (u.array().abs() - t).max(0.0);
}

double group_norm(const Vector& v, const std::vector<Index>& g) {
  double sq = 0.0;
  for (Index i : g) sq += v[i] * v[i];
  return std::sqrt(sq);
}

BallCase classify(double norm, double radius) {
  if (norm > radius) return BallCase::Outside;
  if (norm == radius) return BallCase::Boundary;
  return BallCase::Inside;
}

}  // namespace

Vector prox_h(const Vector& u, double sigma) {
  require_sigma(sigma);
  const double nrm = u.norm();
  if (nrm <= sigma) return Vector::Zero(u.size());
  return (1.0 - sigma / nrm) * u;
}

ProxPResult prox_p(const Vector& u, double sigma, const GroupPartition& groups,
                   const PenaltyParams& params) {
  require_sigma(sigma);
  require_inputs(u, groups, params);
  ProxPResult out;
  out.v = soft_threshold(u, sigma * params.lambda2);
  out.result = Vector::Zero(u.size());
  for (Index j = 0; j < groups.size(); ++j) {
    const auto& g = groups.group(j);
    const double radius = sigma * group_threshold(params, groups, j);
    const double nrm = group_norm(out.v, g);
    if (nrm <= radius) continue;
    const double keep = 1.0 - radius / nrm;
    for (Index i : g) out.result[i] = keep * out.v[i];
  }
  return out;
}

Vector prox_h_conjugate(const Vector& u, double sigma) {
  require_sigma(sigma);
  const double nrm = u.norm();
  if (nrm <= 1.0) return u;
  return u / nrm;
}

Vector prox_p_conjugate(const Vector& u, double sigma, const GroupPartition& groups,
                        const PenaltyParams& params) {
  require_sigma(sigma);
  const Vector scaled = sigma * u;
  return u - prox_p(scaled, sigma, groups, params).result / sigma;
}

Vector project_orthant(const Vector& u) { return u.cwiseMax(0.0); }

void ProxHJacobian::apply_to(const Vector& d, Vector& out) const {
  if (d.size() != dim) throw DimensionError("ProxHJacobian: size");
  if (!outside()) {
    out.setZero(d.size());
    return;
  }
  out = (1.0 - scale) * d + (scale * direction.dot(d)) * direction;
}

Vector ProxHJacobian::apply(const Vector& d) const {
  Vector out;
  apply_to(d, out);
  return out;
}

ProxHJacobian jacobian_prox_h(const Vector& u, double sigma) {
  require_sigma(sigma);
  ProxHJacobian jac;
  jac.dim = u.size();
  const double nrm = u.norm();
  jac.ball_case = classify(nrm, sigma);
  if (jac.outside()) {
    jac.scale = sigma / nrm;
    jac.direction = u / nrm;
  }
  return jac;
}

void ProxPJacobian::apply_to(const Vector& d, Vector& out) const {
  if (groups == nullptr) throw std::logic_error("ProxPJacobian: no group partition attached");
  if (d.size() != theta.size()) throw DimensionError("ProxPJacobian: size");
  out.setZero(d.size());
  for (Index j = 0; j < groups->size(); ++j) {
    if (group_case[static_cast<std::size_t>(j)] != BallCase::Outside) continue;
    const auto& g = groups->group(j);
    const double a = group_scale[j];
    const double inv = 1.0 / group_norm[j];
    // v is supported where theta = 1, so vhat^T Theta d = vhat^T d.
    double proj = 0.0;
    for (Index i : g) proj += v[i] * d[i];
    proj *= inv * inv;
    for (Index i : g) out[i] = (1.0 - a) * theta[i] * d[i] + a * proj * v[i];
  }
}

Vector ProxPJacobian::apply(const Vector& d) const {
  Vector out;
  apply_to(d, out);
  return out;
}

ProxPJacobian jacobian_prox_p(const Vector& u, double sigma, const GroupPartition& groups,
                              const PenaltyParams& params) {
  require_sigma(sigma);
  require_inputs(u, groups, params);
  ProxPJacobian jac;
  const double t = sigma * params.lambda2;
  jac.theta = (u.array().abs() > t).cast<double>();
  jac.v = soft_threshold(u, t);
  jac.groups = &groups;
  const auto J = static_cast<std::size_t>(groups.size());
  jac.group_case.resize(J);
  jac.group_scale = Vector::Zero(groups.size());
  jac.group_norm = Vector::Zero(groups.size());
  for (Index j = 0; j < groups.size(); ++j) {
    const double radius = sigma * group_threshold(params, groups, j);
    const double nrm = group_norm(jac.v, groups.group(j));
    jac.group_norm[j] = nrm;
    jac.group_case[static_cast<std::size_t>(j)] = classify(nrm, radius);
    if (nrm > radius) jac.group_scale[j] = radius / nrm;
  }
  return jac;
}

Vector jacobian_orthant(const Vector& u) { return (u.array() > 0.0).cast<double>(); }

}  // namespace cssl
