#pragma once

// Domain geometry, two-layer ReLU^s networks and Barron-cost accounting.
//
// Everything here is templated on the scalar type and built on Eigen dense
// types; `Domain` and `Network` are the double-precision aliases used by the
// numerical modules.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace barron {

/// Power s of the activation max(0, z)^s. s = 0 is the (right-continuous)
/// Heaviside step.
class ActivationPower {
 public:
  constexpr explicit ActivationPower(int s) : s_(s) {
    if (s < 0) throw std::invalid_argument("activation power must be >= 0");
  }
  constexpr int value() const noexcept { return s_; }
  constexpr operator int() const noexcept { return s_; }

  /// Operations built on the Barron/spectral lower bound need s >= 1.
  void require_positive(const char* what) const {
    if (s_ < 1)
      throw std::invalid_argument(std::string(what) + " requires s >= 1");
  }

 private:
  int s_;
};

/// max(z, 0)^s with the convention 0^0 = 1 (Heaviside is 1 at the kink).
template <typename Scalar>
Scalar relu_pow(Scalar z, int s) {
  if (s == 0) return z >= Scalar(0) ? Scalar(1) : Scalar(0);
  if (z <= Scalar(0)) return Scalar(0);
  Scalar r = z;
  for (int k = 1; k < s; ++k) r *= z;
  return r;
}

template <typename Scalar>
Scalar int_pow(Scalar x, int s) {
  Scalar r(1);
  for (int k = 0; k < s; ++k) r *= x;
  return r;
}

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Domains
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Box {
  VectorX<Scalar> halfwidths;
};

template <typename Scalar>
struct Ball {
  Scalar radius;
  Eigen::Index dim;
};

/// Convex hull of `vertices` (one vertex per column); the set must be closed
/// under negation.
template <typename Scalar>
struct SymmetricPolytope {
  MatrixX<Scalar> vertices;
};

/// A compact, origin-symmetric domain with nonempty interior. Its support
/// function v -> sup_{x in Omega} |v.x| is then a norm.
template <typename Scalar>
class DomainSpec {
 public:
  using Variant = std::variant<Box<Scalar>, Ball<Scalar>, SymmetricPolytope<Scalar>>;

  static DomainSpec box(VectorX<Scalar> halfwidths) {
    if (halfwidths.size() == 0) throw std::invalid_argument("box: empty halfwidths");
    for (Eigen::Index i = 0; i < halfwidths.size(); ++i)
      if (!(halfwidths[i] > Scalar(0)) || !std::isfinite(double(halfwidths[i])))
        throw std::invalid_argument("box: halfwidths must be positive and finite");
    return DomainSpec(Box<Scalar>{std::move(halfwidths)});
  }

  static DomainSpec unit_box(Eigen::Index dim) {
    return box(VectorX<Scalar>::Ones(dim));
  }

  static DomainSpec ball(Scalar radius, Eigen::Index dim) {
    if (!(radius > Scalar(0)) || !std::isfinite(double(radius)))
      throw std::invalid_argument("ball: radius must be positive and finite");
    if (dim < 1) throw std::invalid_argument("ball: dimension must be >= 1");
    return DomainSpec(Ball<Scalar>{radius, dim});
  }

  static DomainSpec polytope(MatrixX<Scalar> vertices) {
    const Eigen::Index d = vertices.rows();
    const Eigen::Index n = vertices.cols();
    if (d < 1 || n < 2) throw std::invalid_argument("polytope: need d >= 1 and >= 2 vertices");
    if (!vertices.allFinite()) throw std::invalid_argument("polytope: non-finite vertex");
    const Scalar scale = vertices.cwiseAbs().maxCoeff();
    const Scalar tol = Scalar(1e-12) * (Scalar(1) + scale);
    for (Eigen::Index j = 0; j < n; ++j) {
      bool mirrored = false;
      for (Eigen::Index k = 0; k < n && !mirrored; ++k)
        mirrored = (vertices.col(j) + vertices.col(k)).cwiseAbs().maxCoeff() <= tol;
      if (!mirrored) throw std::invalid_argument("polytope: vertex set is not closed under negation");
    }
    Eigen::FullPivLU<MatrixX<Scalar>> lu(vertices);
    lu.setThreshold(1e-12);
    if (lu.rank() != d) throw std::invalid_argument("polytope: vertex hull has empty interior");
    return DomainSpec(SymmetricPolytope<Scalar>{std::move(vertices)});
  }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& v) -> Eigen::Index {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Box<Scalar>>) return v.halfwidths.size();
          else if constexpr (std::is_same_v<T, Ball<Scalar>>) return v.dim;
          else return v.vertices.rows();
        },
        variant_);
  }

  const Variant& variant() const noexcept { return variant_; }

 private:
  explicit DomainSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// sup_{x in Omega} |v.x|.
template <typename Scalar, typename Derived>
Scalar support_norm(const DomainSpec<Scalar>& domain, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != domain.dim())
    throw std::invalid_argument("support_norm: dimension mismatch (got " + std::to_string(v.size()) +
                                ", domain has " + std::to_string(domain.dim()) + ")");
  return std::visit(
      [&](const auto& dom) -> Scalar {
        using T = std::decay_t<decltype(dom)>;
        if constexpr (std::is_same_v<T, Box<Scalar>>)
          return dom.halfwidths.cwiseProduct(v.cwiseAbs()).sum();
        else if constexpr (std::is_same_v<T, Ball<Scalar>>)
          return dom.radius * v.norm();
        else
          return (dom.vertices.transpose() * v).cwiseAbs().maxCoeff();
      },
      domain.variant());
}

// ---------------------------------------------------------------------------
// Networks
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Atom {
  Scalar a;
  VectorX<Scalar> w;
  Scalar b;
};

/// f(x) = (1/m) sum_j a_j max(w_j.x + b_j, 0)^s. Also read as the atomic
/// measure (1/m) sum_j delta_{(a_j, w_j, b_j)}.
template <typename Scalar>
class TwoLayerNetwork {
 public:
  TwoLayerNetwork(ActivationPower s, VectorX<Scalar> a, MatrixX<Scalar> w, VectorX<Scalar> b)
      : s_(s), a_(std::move(a)), w_(std::move(w)), b_(std::move(b)) {
    if (a_.size() < 1) throw std::invalid_argument("network needs at least one atom");
    if (w_.rows() != a_.size() || b_.size() != a_.size())
      throw std::invalid_argument("network: inconsistent atom counts");
    if (w_.cols() < 1) throw std::invalid_argument("network: input dimension must be >= 1");
    if (!a_.allFinite() || !w_.allFinite() || !b_.allFinite())
      throw std::invalid_argument("network: non-finite parameter");
  }

  TwoLayerNetwork(ActivationPower s, const std::vector<Atom<Scalar>>& atoms)
      : TwoLayerNetwork(s, pack(atoms)) {}

  ActivationPower power() const noexcept { return s_; }
  Eigen::Index width() const noexcept { return a_.size(); }
  Eigen::Index dim() const noexcept { return w_.cols(); }

  const VectorX<Scalar>& outer() const noexcept { return a_; }
  const MatrixX<Scalar>& inner() const noexcept { return w_; }
  const VectorX<Scalar>& bias() const noexcept { return b_; }

  Atom<Scalar> atom(Eigen::Index j) const { return {a_[j], w_.row(j).transpose(), b_[j]}; }

  template <typename Derived>
  Scalar operator()(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dim()) throw std::invalid_argument("network: input dimension mismatch");
    const VectorX<Scalar> pre = w_ * x + b_;
    Scalar acc(0);
    for (Eigen::Index j = 0; j < width(); ++j) acc += a_[j] * relu_pow(pre[j], s_.value());
    return acc / Scalar(width());
  }

  /// Evaluates at every row of `x` (n x d).
  VectorX<Scalar> evaluate(const MatrixX<Scalar>& x) const {
    if (x.cols() != dim()) throw std::invalid_argument("network: input dimension mismatch");
    MatrixX<Scalar> pre = x * w_.transpose();
    pre.rowwise() += b_.transpose();
    const int s = s_.value();
    pre = pre.unaryExpr([s](Scalar z) { return relu_pow(z, s); });
    return pre * a_ / Scalar(width());
  }

  TwoLayerNetwork scaled_outer(Scalar factor) const {
    return TwoLayerNetwork(s_, a_ * factor, w_, b_);
  }

 private:
  struct Packed {
    VectorX<Scalar> a;
    MatrixX<Scalar> w;
    VectorX<Scalar> b;
  };
  TwoLayerNetwork(ActivationPower s, Packed p)
      : TwoLayerNetwork(s, std::move(p.a), std::move(p.w), std::move(p.b)) {}

  static Packed pack(const std::vector<Atom<Scalar>>& atoms) {
    if (atoms.empty()) throw std::invalid_argument("network needs at least one atom");
    const Eigen::Index m = static_cast<Eigen::Index>(atoms.size());
    const Eigen::Index d = atoms.front().w.size();
    Packed p{VectorX<Scalar>(m), MatrixX<Scalar>(m, d), VectorX<Scalar>(m)};
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& at = atoms[static_cast<std::size_t>(j)];
      if (at.w.size() != d) throw std::invalid_argument("network: atoms have mixed dimensions");
      p.a[j] = at.a;
      p.w.row(j) = at.w.transpose();
      p.b[j] = at.b;
    }
    return p;
  }

  ActivationPower s_;
  VectorX<Scalar> a_;
  MatrixX<Scalar> w_;
  VectorX<Scalar> b_;
};

// ---------------------------------------------------------------------------
// Normalization onto the unit sphere of the support norm
// ---------------------------------------------------------------------------

template <typename Scalar>
struct NormalizedNeuron {
  Scalar a;
  VectorX<Scalar> w;  // support_norm(domain, w) == 1
  Scalar b;
};

/// A neuron with w = 0; its value on the whole space is a * max(b, 0)^s.
template <typename Scalar>
struct ConstantNeuron {
  Scalar value;
};

template <typename Scalar>
using NeuronForm = std::variant<NormalizedNeuron<Scalar>, ConstantNeuron<Scalar>>;

/// Uses positive homogeneity: a max(w.x + b, 0)^s = a c^s max((w/c).x + b/c, 0)^s
/// with c = ||w||_Omega.
template <typename Scalar, typename Derived>
NeuronForm<Scalar> normalize_neuron(ActivationPower s, const DomainSpec<Scalar>& domain, Scalar a,
                                    const Eigen::MatrixBase<Derived>& w, Scalar b) {
  const Scalar c = support_norm(domain, w);
  if (c == Scalar(0)) return ConstantNeuron<Scalar>{a * relu_pow(b, s.value())};
  return NormalizedNeuron<Scalar>{a * int_pow(c, s.value()), VectorX<Scalar>(w / c), b / c};
}

/// (1/m) sum_j |a_j| (||w_j||_Omega + |b_j|)^s: the cost of this atomic
/// representation, hence an upper bound on the Barron norm of the function.
template <typename Scalar>
Scalar barron_cost_upper(const TwoLayerNetwork<Scalar>& net, const DomainSpec<Scalar>& domain) {
  if (net.dim() != domain.dim()) throw std::invalid_argument("barron_cost_upper: dimension mismatch");
  Scalar acc(0);
  for (Eigen::Index j = 0; j < net.width(); ++j) {
    const Scalar scale = support_norm(domain, net.inner().row(j).transpose()) + std::abs(net.bias()[j]);
    acc += std::abs(net.outer()[j]) * int_pow(scale, net.power().value());
  }
  return acc / Scalar(net.width());
}

using Domain = DomainSpec<double>;
using Network = TwoLayerNetwork<double>;
using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

}  // namespace barron
