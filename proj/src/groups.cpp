#include "apdiff/groups.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "apdiff/errors.hpp"

namespace apdiff {

std::string to_string(const Factor& f) {
  switch (f.kind) {
    case FactorKind::Euclidean:
      return "Euclidean(" + std::to_string(f.size) + ")";
    case FactorKind::Torus:
      return "Torus(" + std::to_string(f.size) + ")";
    case FactorKind::Cyclic:
      return "Cyclic(" + std::to_string(f.size) + ")";
  }
  return "?";
}

InternalSpace::InternalSpace(std::vector<Factor> factors) {
  if (factors.empty()) throw StructuralError("internal space needs at least one factor");
  for (const Factor& f : factors) {
    if (f.size < 1) throw StructuralError("invalid factor " + to_string(f));
    offsets_.push_back(coord_count_);
    for (int i = 0; i < f.coordinate_count(); ++i) {
      coord_kind_.push_back(f.kind);
      coord_order_.push_back(f.kind == FactorKind::Cyclic ? f.size : 0);
    }
    coord_count_ += f.coordinate_count();
    switch (f.kind) {
      case FactorKind::Euclidean: euclidean_dim_ += f.size; break;
      case FactorKind::Torus: torus_dim_ += f.size; break;
      case FactorKind::Cyclic: ++cyclic_count_; break;
    }
  }
  factors_ = std::make_shared<const std::vector<Factor>>(std::move(factors));
}

InternalPoint InternalSpace::identity() const {
  return InternalPoint(*this, Vec(coord_count_, 0.0));
}

InternalPoint InternalSpace::point(Vec coords) const {
  if (static_cast<int>(coords.size()) != coord_count_) {
    throw StructuralError("point has " + std::to_string(coords.size()) +
                          " coordinates, space " + describe() + " needs " +
                          std::to_string(coord_count_));
  }
  for (int c = 0; c < coord_count_; ++c) reduce_coordinate(*this, c, coords[c]);
  return InternalPoint(*this, std::move(coords));
}

InternalCharacter InternalSpace::character(Vec labels) const {
  return InternalCharacter(*this, std::move(labels));
}

InternalSpace InternalSpace::product(const InternalSpace& other) const {
  std::vector<Factor> all = factors();
  all.insert(all.end(), other.factors().begin(), other.factors().end());
  return InternalSpace(std::move(all));
}

InternalSpace InternalSpace::without_trivial_factors() const {
  std::vector<Factor> kept;
  for (const Factor& f : factors()) {
    if (!(f.kind == FactorKind::Cyclic && f.size == 1)) kept.push_back(f);
  }
  if (kept.empty()) kept.push_back(Factor::cyclic(1));
  return InternalSpace(std::move(kept));
}

std::string InternalSpace::describe() const {
  std::string out;
  for (std::size_t i = 0; i < factors().size(); ++i) {
    if (i) out += " x ";
    out += to_string(factors()[i]);
  }
  return out;
}

bool InternalSpace::operator==(const InternalSpace& other) const {
  return factors_ == other.factors_ || *factors_ == *other.factors_;
}

void reduce_coordinate(const InternalSpace& space, int c, double& value) {
  switch (space.kind_of_coordinate(c)) {
    case FactorKind::Euclidean:
      break;
    case FactorKind::Torus: {
      value -= std::floor(value);
      // floor can leave exactly 1.0 for tiny negative inputs
      if (value >= 1.0) value = 0.0;
      break;
    }
    case FactorKind::Cyclic: {
      const double q = space.order_of_coordinate(c);
      double r = std::fmod(std::round(value), q);
      if (r < 0) r += q;
      value = r;
      break;
    }
  }
}

InternalPoint::InternalPoint(InternalSpace space, Vec coords)
    : space_(std::move(space)), coords_(std::move(coords)) {
  if (static_cast<int>(coords_.size()) != space_.coordinate_count()) {
    throw StructuralError("coordinate count does not match internal space");
  }
}

Vec InternalPoint::euclidean_part() const {
  Vec out;
  for (int c = 0; c < space_.coordinate_count(); ++c) {
    if (space_.kind_of_coordinate(c) == FactorKind::Euclidean) out.push_back(coords_[c]);
  }
  return out;
}

Vec InternalPoint::torus_part() const {
  Vec out;
  for (int c = 0; c < space_.coordinate_count(); ++c) {
    if (space_.kind_of_coordinate(c) == FactorKind::Torus) out.push_back(coords_[c]);
  }
  return out;
}

std::vector<long long> InternalPoint::cyclic_part() const {
  std::vector<long long> out;
  for (int c = 0; c < space_.coordinate_count(); ++c) {
    if (space_.kind_of_coordinate(c) == FactorKind::Cyclic) {
      out.push_back(static_cast<long long>(coords_[c]));
    }
  }
  return out;
}

InternalCharacter::InternalCharacter(InternalSpace space, Vec labels)
    : space_(std::move(space)), labels_(std::move(labels)) {
  if (static_cast<int>(labels_.size()) != space_.coordinate_count()) {
    throw StructuralError("character label count does not match internal space");
  }
  for (int c = 0; c < space_.coordinate_count(); ++c) {
    switch (space_.kind_of_coordinate(c)) {
      case FactorKind::Euclidean:
        break;
      case FactorKind::Torus:
        if (labels_[c] != std::round(labels_[c])) {
          throw StructuralError("torus character labels must be integers");
        }
        break;
      case FactorKind::Cyclic:
        reduce_coordinate(space_, c, labels_[c]);
        break;
    }
  }
}

namespace {

void require_same_space(const InternalSpace& a, const InternalSpace& b) {
  if (!(a == b)) {
    throw StructuralError("mismatched internal spaces: " + a.describe() + " vs " + b.describe());
  }
}

}  // namespace

InternalPoint add(const InternalPoint& a, const InternalPoint& b) {
  require_same_space(a.space(), b.space());
  Vec sum(a.coords().size());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = a[i] + b[i];
  return a.space().point(std::move(sum));
}

InternalPoint negate(const InternalPoint& a) {
  Vec neg(a.coords().size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -a[i];
  return a.space().point(std::move(neg));
}

double character_phase(const InternalCharacter& chi, const InternalPoint& y) {
  require_same_space(chi.space(), y.space());
  const InternalSpace& space = y.space();
  double phase = 0.0;
  for (int c = 0; c < space.coordinate_count(); ++c) {
    if (space.kind_of_coordinate(c) == FactorKind::Cyclic) {
      // integer product first keeps the cyclic phase exact
      const long long q = space.order_of_coordinate(c);
      const long long r = (static_cast<long long>(chi.labels()[c]) *
                           static_cast<long long>(y[c])) % q;
      phase += static_cast<double>(r) / static_cast<double>(q);
    } else {
      phase += chi.labels()[c] * y[c];
    }
  }
  return phase;
}

Complex evaluate_character(const InternalCharacter& chi, const InternalPoint& y) {
  const double turns = character_phase(chi, y);
  const double frac = turns - std::round(turns);
  return std::polar(1.0, kTwoPi * frac);
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = kTwoPi / 2;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

Complex quadrature(const InternalSpace& space, const Integrand& integrand,
                   const QuadratureOptions& options) {
  const int ncoord = space.coordinate_count();
  if (!options.resolution.empty() && options.resolution.size() != space.factors().size()) {
    throw PreconditionError("quadrature resolution needs one entry per factor");
  }
  if (static_cast<int>(options.euclidean_bounds.size()) != space.euclidean_dim()) {
    throw PreconditionError("quadrature over " + space.describe() + " needs " +
                            std::to_string(space.euclidean_dim()) +
                            " Euclidean bounds, got " +
                            std::to_string(options.euclidean_bounds.size()));
  }

  // per-coordinate one-dimensional rules
  std::vector<Vec> nodes(ncoord), weights(ncoord);
  long long total = 1;
  int euclid_index = 0;
  for (std::size_t fi = 0; fi < space.factors().size(); ++fi) {
    const Factor& factor = space.factors()[fi];
    int requested = 0;
    if (!options.resolution.empty()) {
      requested = options.resolution[fi];
      if (requested < 1) throw PreconditionError("quadrature resolution must be >= 1");
    }
    for (int j = 0; j < factor.coordinate_count(); ++j) {
      const int c = space.offset(fi) + j;
      switch (factor.kind) {
        case FactorKind::Torus: {
          const int n = requested ? requested : options.default_torus_nodes;
          for (int i = 0; i < n; ++i) {
            nodes[c].push_back(static_cast<double>(i) / n);
            weights[c].push_back(1.0 / n);
          }
          break;
        }
        case FactorKind::Euclidean: {
          const int n = requested ? requested : options.default_gauss_nodes;
          const Interval& box = options.euclidean_bounds[euclid_index++];
          if (!(box.hi > box.lo) || !std::isfinite(box.lo) || !std::isfinite(box.hi)) {
            throw PreconditionError("Euclidean quadrature bounds must be finite with lo < hi");
          }
          const GaussRule& rule = gauss_legendre(n);
          const double half = 0.5 * box.length();
          const double mid = 0.5 * (box.lo + box.hi);
          for (int i = 0; i < n; ++i) {
            nodes[c].push_back(mid + half * rule.nodes[i]);
            weights[c].push_back(half * rule.weights[i]);
          }
          break;
        }
        case FactorKind::Cyclic: {
          const int q = factor.size;
          for (int i = 0; i < q; ++i) {
            nodes[c].push_back(i);
            weights[c].push_back(1.0 / q);
          }
          break;
        }
      }
      total *= static_cast<long long>(nodes[c].size());
      if (total > options.max_nodes) {
        throw PreconditionError("quadrature tensor grid exceeds " +
                                std::to_string(options.max_nodes) + " nodes");
      }
    }
  }

  std::vector<std::size_t> index(ncoord, 0);
  Vec coords(ncoord);
  Complex sum = 0.0;
  for (long long step = 0; step < total; ++step) {
    double w = 1.0;
    for (int c = 0; c < ncoord; ++c) {
      coords[c] = nodes[c][index[c]];
      w *= weights[c][index[c]];
    }
    sum += w * integrand(InternalPoint(space, coords));
    for (int c = ncoord - 1; c >= 0; --c) {
      if (++index[c] < nodes[c].size()) break;
      index[c] = 0;
    }
  }
  return sum;
}

}  // namespace apdiff
