// Copyright 2026 The olp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "olp/distributions.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "olp/errors.h"
#include "olp/quadrature.h"

namespace olp {

double Dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

std::string KindName(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kMultisecretaryBeta: return "multisecretary_beta";
    case DistributionKind::kHyperCube: return "hyper_cube";
    case DistributionKind::kGeneralizedLinear: return "generalized_linear";
    case DistributionKind::kGapMultisecretary: return "gap_multisecretary";
    case DistributionKind::kTwoPointConsumption: return "two_point_consumption";
    case DistributionKind::kUnitSquareShifted: return "unit_square_shifted";
    case DistributionKind::kDiscrete: return "discrete";
  }
  return "unknown";
}

double LinkTable::operator()(double t) const {
  if (x.empty()) return 0.0;
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), t);
  const size_t k = static_cast<size_t>(it - x.begin()) - 1;
  const double w = (t - x[k]) / (x[k + 1] - x[k]);
  return y[k] + w * (y[k + 1] - y[k]);
}

namespace {

constexpr int kTensorNodesPerDim = 64;
constexpr int kMaxTensorDim = 3;
constexpr size_t kMonteCarloNodes = size_t{1} << 17;
constexpr uint64_t kMonteCarloSeed = 0x6f6c702d6d63ULL;
constexpr int kPieceRule = 8;

}  // namespace

struct RequestDistribution::Impl {
  struct AAtom {
    Vec a;
    double p;
    RewardLaw law;
  };

  DistributionKind kind{};
  int m = 1;
  SupportBounds bounds;
  std::optional<HolderParams> holder;
  std::vector<Atom> atoms;
  Vec dual_upper;

  // Consumption law: either finitely many atoms or a uniform box.
  bool box = false;
  std::vector<AAtom> a_atoms;
  Vec cumulative;  // sampling table for a_atoms
  Vec lo;
  Vec hi;
  std::optional<RewardLaw> base_law;  // box kinds
  bool shifted = false;               // generalized linear
  GeneralizedLinearParams glm;
  double beta = 0.0;  // multisecretary_beta only

  // Fixed rule over the box for m >= 2.
  Vec nodes;  // flattened, m per node
  Vec node_weights;

  RewardLaw LawAt(std::span<const double> a) const {
    if (!shifted) return *base_law;
    return base_law->Shifted(glm.link(Dot(a, glm.weights)));
  }

  // Breakpoints in the scalar a (box, m = 1) where a * lambda crosses a kink
  // of the conditional reward CDF or where the link has a knot.
  void ScalarCuts(double lambda, Vec& cuts) const {
    const Vec base = base_law->Breakpoints();
    if (!shifted) {
      if (lambda > 0.0) {
        for (double e : base) cuts.push_back(e / lambda);
      }
      return;
    }
    const double w = glm.weights[0];
    const LinkTable& g = glm.link;
    // Segments of g(a w) as affine functions alpha + slope * a.
    struct Seg {
      double a0, a1, alpha, slope;
    };
    std::vector<Seg> segs;
    if (w <= 0.0) {
      segs.push_back({lo[0], hi[0], g(0.0), 0.0});
    } else {
      Vec knots;
      for (double xk : g.x) knots.push_back(xk / w);
      cuts.insert(cuts.end(), knots.begin(), knots.end());
      double prev = -1e300;
      for (size_t k = 0; k <= knots.size(); ++k) {
        const double next = k < knots.size() ? knots[k] : 1e300;
        double alpha, slope;
        if (k == 0) {
          alpha = g.y.front();
          slope = 0.0;
        } else if (k == knots.size()) {
          alpha = g.y.back();
          slope = 0.0;
        } else {
          const double s = (g.y[k] - g.y[k - 1]) / (g.x[k] - g.x[k - 1]);
          alpha = g.y[k - 1] - s * g.x[k - 1];
          slope = s * w;
        }
        segs.push_back({prev, next, alpha, slope});
        prev = next;
      }
    }
    for (const Seg& s : segs) {
      const double denom = lambda - s.slope;
      if (std::abs(denom) < 1e-300) continue;
      for (double e : base) {
        const double a = (s.alpha + e) / denom;
        if (a >= s.a0 && a <= s.a1) cuts.push_back(a);
      }
    }
  }

  template <typename Visitor>
  void Visit(std::span<const Vec> kinks, Visitor&& visit) const {
    if (!box) {
      for (const AAtom& at : a_atoms) visit(std::span<const double>(at.a), at.law, at.p);
      return;
    }
    if (m == 1) {
      Vec cuts;
      for (const Vec& k : kinks) ScalarCuts(k[0], cuts);
      cuts.push_back(lo[0]);
      cuts.push_back(hi[0]);
      std::sort(cuts.begin(), cuts.end());
      const GaussRule& rule = GaussLegendre(kPieceRule);
      const double width = hi[0] - lo[0];
      double prev = lo[0];
      for (double c : cuts) {
        const double b = std::clamp(c, lo[0], hi[0]);
        if (!(b > prev)) continue;
        const double half = 0.5 * (b - prev);
        const double mid = 0.5 * (b + prev);
        for (int i = 0; i < kPieceRule; ++i) {
          const double a = mid + half * rule.nodes[i];
          const std::span<const double> as(&a, 1);
          const double w = half * rule.weights[i] / width;
          if (shifted) {
            visit(as, LawAt(as), w);
          } else {
            visit(as, *base_law, w);
          }
        }
        prev = b;
      }
      return;
    }
    const size_t count = node_weights.size();
    for (size_t k = 0; k < count; ++k) {
      std::span<const double> a(nodes.data() + k * m, m);
      if (shifted) {
        visit(a, LawAt(a), node_weights[k]);
      } else {
        visit(a, *base_law, node_weights[k]);
      }
    }
  }

  void BuildBoxRule() {
    if (m == 1) return;
    if (m <= kMaxTensorDim) {
      const GaussRule& rule = GaussLegendre(kTensorNodesPerDim);
      size_t count = 1;
      for (int i = 0; i < m; ++i) count *= kTensorNodesPerDim;
      nodes.resize(count * m);
      node_weights.resize(count);
      for (size_t k = 0; k < count; ++k) {
        size_t rest = k;
        double w = 1.0;
        for (int i = 0; i < m; ++i) {
          const size_t idx = rest % kTensorNodesPerDim;
          rest /= kTensorNodesPerDim;
          const double half = 0.5 * (hi[i] - lo[i]);
          nodes[k * m + i] = 0.5 * (hi[i] + lo[i]) + half * rule.nodes[idx];
          w *= 0.5 * rule.weights[idx];
        }
        node_weights[k] = w;
      }
      return;
    }
    Rng rng(kMonteCarloSeed);
    nodes.resize(kMonteCarloNodes * m);
    node_weights.assign(kMonteCarloNodes, 1.0 / kMonteCarloNodes);
    for (size_t k = 0; k < kMonteCarloNodes; ++k) {
      for (int i = 0; i < m; ++i) nodes[k * m + i] = rng.Uniform(lo[i], hi[i]);
    }
  }

  void FinishAtoms() {
    cumulative.clear();
    double acc = 0.0;
    for (const AAtom& at : a_atoms) {
      acc += at.p;
      cumulative.push_back(acc);
    }
    FinishBounds();
  }

  void FinishBounds() {
    dual_upper.assign(m, 0.0);
    Vec min_pos(m, std::numeric_limits<double>::infinity());
    double a_max = 0.0;
    double r_max = -std::numeric_limits<double>::infinity();
    if (box) {
      for (int i = 0; i < m; ++i) {
        min_pos[i] = lo[i];
        a_max = std::max(a_max, hi[i]);
      }
      if (shifted) {
        double gmax = 0.0;
        for (double y : glm.link.y) gmax = std::max(gmax, y);
        r_max = gmax + glm.noise_half_width;
      } else {
        r_max = base_law->SupportHi();
      }
    } else {
      for (const AAtom& at : a_atoms) {
        for (int i = 0; i < m; ++i) {
          if (at.a[i] > 0.0) min_pos[i] = std::min(min_pos[i], at.a[i]);
          a_max = std::max(a_max, at.a[i]);
        }
        r_max = std::max(r_max, at.law.SupportHi());
      }
    }
    double a_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (std::isfinite(min_pos[i])) {
        a_min = std::min(a_min, min_pos[i]);
        dual_upper[i] = std::max(r_max, 0.0) / min_pos[i];
      }
    }
    bounds.a_lower = std::isfinite(a_min) ? a_min : 0.0;
    bounds.a_upper = a_max;
    bounds.r_upper = r_max;
  }
};

namespace {

using Impl = RequestDistribution::Impl;

void Require(bool ok, const std::string& message) {
  if (!ok) Fail(ErrorCode::kInvalidArgument, message);
}

}  // namespace

RequestDistribution RequestDistribution::MultisecretaryBeta(double beta) {
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kMultisecretaryBeta;
  impl->m = 1;
  impl->beta = beta;
  impl->a_atoms.push_back({{1.0}, 1.0, RewardLaw::SymmetricPower(beta)});
  impl->holder = HolderParams{beta, 1.0, 1.0, 1.0 + beta};
  impl->FinishAtoms();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::GapMultisecretary() {
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kGapMultisecretary;
  impl->m = 1;
  impl->a_atoms.push_back(
      {{1.0}, 1.0, RewardLaw::UniformMixture({{0.0, 1.0, 0.5}, {2.0, 3.0, 0.5}})});
  impl->FinishAtoms();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::TwoPointConsumption() {
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kTwoPointConsumption;
  impl->m = 1;
  impl->a_atoms.push_back({{1.0}, 0.5, RewardLaw::Uniform(1.0, 2.0)});
  impl->a_atoms.push_back({{4.0}, 0.5, RewardLaw::Uniform(1.0, 2.0)});
  impl->holder = HolderParams{0.0, 1.0, 1.0, 1.0};
  impl->FinishAtoms();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::UnitSquareShifted() {
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kUnitSquareShifted;
  impl->m = 1;
  impl->box = true;
  impl->lo = {1.0};
  impl->hi = {2.0};
  impl->base_law = RewardLaw::Uniform(1.0, 2.0);
  impl->holder = HolderParams{0.0, 1.0, 1.0, 1.0};
  impl->FinishBounds();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::HyperCube(int m) {
  Require(m >= 1, "hyper_cube needs m >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kHyperCube;
  impl->m = m;
  impl->box = true;
  impl->lo.assign(m, 1.0);
  impl->hi.assign(m, 2.0);
  impl->base_law = RewardLaw::Uniform(0.0, 1.0);
  impl->holder = HolderParams{0.0, 1.0, 1.0, 1.0};
  impl->BuildBoxRule();
  impl->FinishBounds();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::GeneralizedLinear(
    GeneralizedLinearParams params) {
  const size_t m = params.weights.size();
  Require(m >= 1, "generalized_linear needs a nonempty weight vector");
  Require(params.a_lower.size() == m && params.a_upper.size() == m,
          "generalized_linear box dimension must match weights");
  for (size_t i = 0; i < m; ++i) {
    Require(params.weights[i] >= 0.0, "generalized_linear weights must be >= 0");
    Require(params.a_lower[i] > 0.0 && params.a_upper[i] > params.a_lower[i],
            "generalized_linear box needs 0 < a_lower < a_upper");
  }
  Require(params.noise_half_width > 0.0, "noise_half_width must be > 0");
  const LinkTable& g = params.link;
  Require(!g.x.empty() && g.x.size() == g.y.size(),
          "link table needs matching, nonempty x and y");
  for (size_t k = 0; k < g.x.size(); ++k) {
    Require(g.y[k] >= 0.0, "link values must be >= 0");
    if (k > 0) Require(g.x[k] > g.x[k - 1], "link knots must increase");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kGeneralizedLinear;
  impl->m = static_cast<int>(m);
  impl->box = true;
  impl->lo = params.a_lower;
  impl->hi = params.a_upper;
  const double L = params.noise_half_width;
  impl->base_law = RewardLaw::Uniform(-L, L);
  impl->shifted = true;
  impl->holder = HolderParams{0.0, 1.0, 1.0 / (2.0 * L), 1.0 / (2.0 * L)};
  impl->glm = std::move(params);
  impl->BuildBoxRule();
  impl->FinishBounds();
  return RequestDistribution(std::move(impl));
}

RequestDistribution RequestDistribution::Discrete(std::vector<Atom> atoms) {
  Require(!atoms.empty(), "discrete distribution needs at least one atom");
  const size_t m = atoms.front().a.size();
  Require(m >= 1, "discrete atoms need a nonempty consumption vector");
  double total = 0.0;
  for (const Atom& at : atoms) {
    Require(at.a.size() == m, "discrete atoms must share one dimension");
    Require(at.p > 0.0, "discrete probabilities must be positive");
    for (double ai : at.a) Require(ai >= 0.0 && std::isfinite(ai), "consumption must be finite and >= 0");
    Require(std::isfinite(at.r), "reward must be finite");
    total += at.p;
  }
  Require(std::abs(total - 1.0) <= 1e-12, "discrete probabilities must sum to 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = DistributionKind::kDiscrete;
  impl->m = static_cast<int>(m);
  for (const Atom& at : atoms) {
    impl->a_atoms.push_back({at.a, at.p, RewardLaw::PointMass(at.r)});
  }
  impl->atoms = std::move(atoms);
  impl->FinishAtoms();
  return RequestDistribution(std::move(impl));
}

DistributionKind RequestDistribution::kind() const { return impl_->kind; }
int RequestDistribution::dim() const { return impl_->m; }
const SupportBounds& RequestDistribution::bounds() const { return impl_->bounds; }
const std::optional<HolderParams>& RequestDistribution::holder() const {
  return impl_->holder;
}
const std::vector<Atom>& RequestDistribution::atoms() const { return impl_->atoms; }
Vec RequestDistribution::DualUpper() const { return impl_->dual_upper; }

bool RequestDistribution::IsPiecewiseLinear() const {
  return impl_->kind == DistributionKind::kDiscrete;
}

bool RequestDistribution::HasExactExpectations() const {
  return !impl_->box || impl_->m == 1;
}

bool RequestDistribution::IsMultisecretary() const {
  return impl_->kind == DistributionKind::kMultisecretaryBeta ||
         impl_->kind == DistributionKind::kGapMultisecretary;
}

const RewardLaw& RequestDistribution::MultisecretaryRewardLaw() const {
  if (!IsMultisecretary()) {
    Fail(ErrorCode::kInvalidArgument, "not a multisecretary distribution");
  }
  return impl_->a_atoms.front().law;
}

size_t RequestDistribution::IntegrationNodeCount() const {
  return impl_->node_weights.size();
}

Request RequestDistribution::Sample(Rng& rng) const {
  const Impl& d = *impl_;
  Request req;
  if (!d.box) {
    const double u = rng.Uniform() * d.cumulative.back();
    auto it = std::upper_bound(d.cumulative.begin(), d.cumulative.end(), u);
    size_t k = static_cast<size_t>(it - d.cumulative.begin());
    if (k >= d.a_atoms.size()) k = d.a_atoms.size() - 1;
    req.a = d.a_atoms[k].a;
    req.r = d.a_atoms[k].law.Sample(rng.Uniform());
    return req;
  }
  req.a.resize(d.m);
  for (int i = 0; i < d.m; ++i) req.a[i] = rng.Uniform(d.lo[i], d.hi[i]);
  req.r = d.LawAt(req.a).Sample(rng.Uniform());
  return req;
}

double RequestDistribution::ConditionalRewardCdf(std::span<const double> a,
                                                 double z) const {
  const Impl& d = *impl_;
  if (static_cast<int>(a.size()) != d.m) {
    Fail(ErrorCode::kDimensionMismatch, "consumption vector has wrong size");
  }
  auto unsupported = [&]() {
    std::ostringstream os;
    os << "a = (";
    for (size_t i = 0; i < a.size(); ++i) os << (i ? ", " : "") << a[i];
    os << ") is outside the support of the consumption law of "
       << KindName(d.kind);
    Fail(ErrorCode::kUnsupportedConsumption, os.str());
  };
  if (d.box) {
    for (int i = 0; i < d.m; ++i) {
      if (a[i] < d.lo[i] - 1e-12 || a[i] > d.hi[i] + 1e-12) unsupported();
    }
    return d.LawAt(a).Cdf(z);
  }
  double mass = 0.0;
  double below = 0.0;
  for (const Impl::AAtom& at : d.a_atoms) {
    bool same = true;
    for (int i = 0; i < d.m; ++i) same = same && std::abs(at.a[i] - a[i]) <= 1e-12;
    if (!same) continue;
    mass += at.p;
    below += at.p * at.law.Cdf(z);
  }
  if (mass <= 0.0) unsupported();
  return std::clamp(below / mass, 0.0, 1.0);
}

double RequestDistribution::ExpectOverConsumption(
    std::span<const Vec> kinks,
    const std::function<double(std::span<const double>, const RewardLaw&)>& f)
    const {
  double total = 0.0;
  impl_->Visit(kinks, [&](std::span<const double> a, const RewardLaw& law,
                          double w) { total += w * f(a, law); });
  return total;
}

namespace {

void CheckLambda(const Impl& d, std::span<const double> lambda) {
  if (static_cast<int>(lambda.size()) != d.m) {
    Fail(ErrorCode::kDimensionMismatch, "dual vector has wrong size");
  }
}

}  // namespace

double RequestDistribution::HingeExpectation(std::span<const double> lambda) const {
  CheckLambda(*impl_, lambda);
  const Vec kink(lambda.begin(), lambda.end());
  double total = 0.0;
  impl_->Visit(std::span<const Vec>(&kink, 1),
               [&](std::span<const double> a, const RewardLaw& law, double w) {
                 total += w * law.Hinge(Dot(a, lambda));
               });
  return total;
}

Vec RequestDistribution::ConsumptionExpectation(std::span<const double> lambda) const {
  CheckLambda(*impl_, lambda);
  const Vec kink(lambda.begin(), lambda.end());
  const int m = impl_->m;
  Vec out(m, 0.0);
  impl_->Visit(std::span<const Vec>(&kink, 1),
               [&](std::span<const double> a, const RewardLaw& law, double w) {
                 const double tail = law.Tail(Dot(a, lambda));
                 if (tail <= 0.0) return;
                 for (int i = 0; i < m; ++i) out[i] += w * tail * a[i];
               });
  return out;
}

double RequestDistribution::HingeByCdfIntegral(std::span<const double> lambda) const {
  CheckLambda(*impl_, lambda);
  const Vec kink(lambda.begin(), lambda.end());
  double total = 0.0;
  impl_->Visit(std::span<const Vec>(&kink, 1),
               [&](std::span<const double> a, const RewardLaw& law, double w) {
                 const double c = Dot(a, lambda);
                 const double base = std::min(0.0, law.SupportLo());
                 total += w * (law.Mean() - c + law.CdfIntegral(base, c));
               });
  return total;
}

Vec RequestDistribution::MeanConsumption() const {
  const int m = impl_->m;
  Vec out(m, 0.0);
  impl_->Visit({}, [&](std::span<const double> a, const RewardLaw&, double w) {
    for (int i = 0; i < m; ++i) out[i] += w * a[i];
  });
  return out;
}

double RequestDistribution::MeanReward() const {
  double total = 0.0;
  impl_->Visit({}, [&](std::span<const double>, const RewardLaw& law, double w) {
    total += w * law.Mean();
  });
  return total;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string NormalizeKind(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

[[noreturn]] void ConfigFail(const std::string& message) {
  Fail(ErrorCode::kConfigError, message);
}

const nlohmann::json& Field(const nlohmann::json& j, const std::string& name,
                            const std::string& path) {
  if (!j.is_object() || !j.contains(name)) {
    ConfigFail("missing field '" + path + name + "'");
  }
  return j.at(name);
}

double Number(const nlohmann::json& j, const std::string& name,
              const std::string& path) {
  const nlohmann::json& v = Field(j, name, path);
  if (!v.is_number()) ConfigFail("field '" + path + name + "' must be a number");
  return v.get<double>();
}

Vec NumberArray(const nlohmann::json& j, const std::string& name,
                const std::string& path) {
  const nlohmann::json& v = Field(j, name, path);
  if (!v.is_array()) ConfigFail("field '" + path + name + "' must be an array");
  Vec out;
  for (const auto& e : v) {
    if (!e.is_number()) ConfigFail("field '" + path + name + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace

RequestDistribution RequestDistribution::FromJson(const nlohmann::json& j) {
  const nlohmann::json& kind_json = Field(j, "kind", "");
  if (!kind_json.is_string()) ConfigFail("field 'kind' must be a string");
  const std::string kind = NormalizeKind(kind_json.get<std::string>());
  static const nlohmann::json kEmpty = nlohmann::json::object();
  const nlohmann::json& params = j.contains("params") ? j.at("params") : kEmpty;
  std::optional<int> m;
  if (j.contains("m")) {
    if (!j.at("m").is_number_integer() || j.at("m").get<int>() < 1) {
      ConfigFail("field 'm' must be a positive integer");
    }
    m = j.at("m").get<int>();
  }
  auto require_scalar = [&]() {
    if (m && *m != 1) ConfigFail("kind '" + kind_json.get<std::string>() + "' has m = 1");
  };
  try {
    if (kind == "multisecretarybeta") {
      require_scalar();
      return MultisecretaryBeta(Number(params, "beta", "params."));
    }
    if (kind == "gapmultisecretary") {
      require_scalar();
      return GapMultisecretary();
    }
    if (kind == "twopointconsumption") {
      require_scalar();
      return TwoPointConsumption();
    }
    if (kind == "unitsquareshifted") {
      require_scalar();
      return UnitSquareShifted();
    }
    if (kind == "hypercube") {
      if (!m) ConfigFail("missing field 'm'");
      return HyperCube(*m);
    }
    if (kind == "generalizedlinear") {
      GeneralizedLinearParams p;
      p.weights = NumberArray(params, "z", "params.");
      const nlohmann::json& link = Field(params, "link", "params.");
      p.link.x = NumberArray(link, "x", "params.link.");
      p.link.y = NumberArray(link, "y", "params.link.");
      p.noise_half_width = Number(params, "noise_half_width", "params.");
      p.a_lower = NumberArray(params, "a_lower", "params.");
      p.a_upper = NumberArray(params, "a_upper", "params.");
      if (m && static_cast<size_t>(*m) != p.weights.size()) {
        ConfigFail("field 'm' disagrees with params.z");
      }
      return GeneralizedLinear(std::move(p));
    }
    if (kind == "discrete") {
      const nlohmann::json& list = Field(params, "atoms", "params.");
      if (!list.is_array()) ConfigFail("field 'params.atoms' must be an array");
      std::vector<Atom> atoms;
      for (size_t k = 0; k < list.size(); ++k) {
        const std::string path = "params.atoms[" + std::to_string(k) + "].";
        Atom at;
        at.a = NumberArray(list[k], "a", path);
        at.r = Number(list[k], "r", path);
        at.p = Number(list[k], "p", path);
        atoms.push_back(std::move(at));
      }
      if (m && !atoms.empty() && static_cast<size_t>(*m) != atoms.front().a.size()) {
        ConfigFail("field 'm' disagrees with the atom dimension");
      }
      return Discrete(std::move(atoms));
    }
  } catch (const OlpError& e) {
    if (e.code() != ErrorCode::kInvalidArgument) throw;
    ConfigFail(e.detail());
  }
  ConfigFail("unknown distribution kind '" + kind_json.get<std::string>() + "'");
}

nlohmann::json RequestDistribution::ToJson() const {
  const Impl& d = *impl_;
  nlohmann::json j;
  j["kind"] = KindName(d.kind);
  j["m"] = d.m;
  nlohmann::json params = nlohmann::json::object();
  switch (d.kind) {
    case DistributionKind::kMultisecretaryBeta:
      params["beta"] = d.beta;
      break;
    case DistributionKind::kGeneralizedLinear:
      params["z"] = d.glm.weights;
      params["link"] = {{"x", d.glm.link.x}, {"y", d.glm.link.y}};
      params["noise_half_width"] = d.glm.noise_half_width;
      params["a_lower"] = d.glm.a_lower;
      params["a_upper"] = d.glm.a_upper;
      break;
    case DistributionKind::kDiscrete: {
      nlohmann::json list = nlohmann::json::array();
      for (const Atom& at : d.atoms) list.push_back({{"a", at.a}, {"r", at.r}, {"p", at.p}});
      params["atoms"] = list;
      break;
    }
    default:
      break;
  }
  j["params"] = params;
  return j;
}

}  // namespace olp
