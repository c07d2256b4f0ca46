#include "anisoflow/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace anisoflow {

namespace {

double support(const Anisotropy& a, const Eigen::Vector2d& w) {
  switch (a.kind) {
    case AnisoKind::L1:
      return std::abs(w.x()) + std::abs(w.y());
    case AnisoKind::Euclidean:
      return w.norm();
    case AnisoKind::Kgon: {
      double best = 0.0;
      for (const auto& v : a.vertices) best = std::max(best, v.dot(w));
      return best;
    }
  }
  return 0.0;
}

Eigen::Vector2d project_polygon(const std::vector<Eigen::Vector2d>& vs, const Eigen::Vector2d& q) {
  const int m = static_cast<int>(vs.size());
  bool inside = true;
  for (int j = 0; j < m; ++j) {
    const Eigen::Vector2d& va = vs[j];
    const Eigen::Vector2d& vb = vs[(j + 1) % m];
    const Eigen::Vector2d n = (va + vb).normalized();  // outward edge normal, polygon centered at 0
    if (q.dot(n) > va.dot(n)) {
      inside = false;
      break;
    }
  }
  if (inside) return q;
  Eigen::Vector2d best = vs[0];
  double best_d2 = (q - best).squaredNorm();
  for (int j = 0; j < m; ++j) {
    const Eigen::Vector2d& va = vs[j];
    const Eigen::Vector2d e = vs[(j + 1) % m] - va;
    const double t = std::clamp((q - va).dot(e) / e.squaredNorm(), 0.0, 1.0);
    const Eigen::Vector2d c = va + t * e;
    const double d2 = (q - c).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

}  // namespace

Anisotropy make_anisotropy(AnisoKind kind, double eps, int k) {
  if (eps < 0.0) throw std::invalid_argument("anisotropy: eps must be >= 0");
  Anisotropy a;
  a.kind = kind;
  a.eps = eps;
  a.hess_bound = eps > 0.0 ? 1.0 / eps : std::numeric_limits<double>::infinity();
  switch (kind) {
    case AnisoKind::L1:
      a.lip = std::numbers::sqrt2;
      break;
    case AnisoKind::Euclidean:
      a.lip = 1.0;
      break;
    case AnisoKind::Kgon: {
      if (k < 3) throw std::invalid_argument("anisotropy: kgon requires k >= 3");
      a.k = k;
      a.lip = 1.0;
      const int m = (k % 2 == 0) ? k : 2 * k;
      a.vertices.resize(m);
      // build the first half and negate, so the vertex set is exactly symmetric
      for (int j = 0; j < m / 2; ++j) {
        const double t = 2.0 * std::numbers::pi * j / m;
        a.vertices[j] = Eigen::Vector2d(std::cos(t), std::sin(t));
        a.vertices[j + m / 2] = -a.vertices[j];
      }
      break;
    }
  }
  return a;
}

Anisotropy make_anisotropy(const std::string& name, double eps) {
  if (name == "l1") return make_anisotropy(AnisoKind::L1, eps);
  if (name == "euclidean") return make_anisotropy(AnisoKind::Euclidean, eps);
  if (name.rfind("kgon:", 0) == 0) {
    const int k = std::stoi(name.substr(5));
    return make_anisotropy(AnisoKind::Kgon, eps, k);
  }
  throw std::invalid_argument("anisotropy: unknown kind '" + name + "'");
}

std::string kind_name(const Anisotropy& a) {
  switch (a.kind) {
    case AnisoKind::L1:
      return "l1";
    case AnisoKind::Euclidean:
      return "euclidean";
    case AnisoKind::Kgon:
      return "kgon:" + std::to_string(a.k);
  }
  return "?";
}

Eigen::Vector2d dual_body_project(const Anisotropy& a, const Eigen::Vector2d& q) {
  switch (a.kind) {
    case AnisoKind::L1:
      return {std::clamp(q.x(), -1.0, 1.0), std::clamp(q.y(), -1.0, 1.0)};
    case AnisoKind::Euclidean: {
      const double n = q.norm();
      return n <= 1.0 ? q : Eigen::Vector2d(q / n);
    }
    case AnisoKind::Kgon:
      return project_polygon(a.vertices, q);
  }
  return q;
}

double eval(const Anisotropy& a, const Eigen::Vector2d& w) {
  if (a.eps == 0.0) return support(a, w);
  const Eigen::Vector2d p = dual_body_project(a, w / a.eps);
  const Eigen::Vector2d prox = w - a.eps * p;  // point where the envelope touches gamma
  return support(a, prox) + 0.5 * a.eps * p.squaredNorm();
}

Eigen::Vector2d grad(const Anisotropy& a, const Eigen::Vector2d& w) {
  if (a.eps == 0.0) {
    throw std::invalid_argument("anisotropy: grad requires eps > 0 (nonsmooth original)");
  }
  return dual_body_project(a, w / a.eps);
}

double alpha_coupling(const Anisotropy& a, double alpha, const Eigen::Vector2d& w) {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  const Eigen::Vector2d rw(c * w.x() - s * w.y(), s * w.x() + c * w.y());
  const Eigen::Vector2d rpw(-s * w.x() - c * w.y(), c * w.x() - s * w.y());  // R(alpha+pi/2) w
  return grad(a, rw).dot(rpw);
}

double second_alpha_bound_formula(double grad_w1inf, double w_norm2) {
  const double c = 1.0 + grad_w1inf;
  return 2.0 * c * c * (1.0 + w_norm2);
}

double second_alpha_bound(const Anisotropy& a, const Eigen::Vector2d& w) {
  return second_alpha_bound_formula(a.lip + a.hess_bound, w.squaredNorm());
}

}  // namespace anisoflow
