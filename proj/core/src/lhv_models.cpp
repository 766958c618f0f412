#include "routed/lhv_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace routed {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr int kStreamShift = 40;
constexpr std::uint64_t kMaxCount = 1ULL << kStreamShift;
// Settings are drawn from streams far away from any sampling stream.
constexpr std::uint64_t kSettingStreamBase = 1ULL << 63;

void check_unit(const Vec3& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > tol::kUnitVector) {
    throw DomainError(std::string(what) + " is not a unit vector (norm " + std::to_string(v.norm()) + ")");
  }
}

Vec3 random_unit(CounterRng& rng) {
  const double c = 1.0 - 2.0 * rng.uniform();
  const double phi = 2.0 * kPi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return {s * std::cos(phi), s * std::sin(phi), c};
}

Vec3 normalized(const Vec3& v) { return v * (1.0 / v.norm()); }

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

// Weights w > 0 with sum 2 and sum w_i v_i = 0, or empty if the origin is not
// strictly inside the hull (each weight at least min_weight).
std::vector<double> hull_weights(const std::vector<Vec3>& v, const Vec3& normal, double min_weight) {
  std::vector<double> w;
  if (v.size() == 3) {
    w = {v[1].cross(v[2]).dot(normal), v[2].cross(v[0]).dot(normal), v[0].cross(v[1]).dot(normal)};
  } else if (v.size() == 4) {
    w = {det3(v[1], v[2], v[3]), -det3(v[0], v[2], v[3]), det3(v[0], v[1], v[3]), -det3(v[0], v[1], v[2])};
  } else {
    return {};
  }
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (sum == 0.0) return {};
  for (double& x : w) {
    x = 2.0 * x / sum;
    if (x < min_weight) return {};
  }
  return w;
}

BobMeasurement random_povm(CounterRng& rng, int outcomes, bool planar) {
  if (outcomes == 2) return BobMeasurement::projective(planar ? plane_direction(2.0 * kPi * rng.uniform()) : random_unit(rng));
  Vec3 e1{1.0, 0.0, 0.0};
  Vec3 e2{0.0, 0.0, 1.0};
  if (!planar) {
    const Vec3 a = random_unit(rng);
    Vec3 b = random_unit(rng);
    e1 = a;
    e2 = normalized(b - a * a.dot(b));
  }
  const Vec3 normal = e1.cross(e2);
  auto in_plane = [&](double t) { return e1 * std::sin(t) + e2 * std::cos(t); };

  BobMeasurement m;
  if (outcomes == 4 && planar) {
    const double t1 = 2.0 * kPi * rng.uniform();
    const double t2 = 2.0 * kPi * rng.uniform();
    const double w = 0.2 + 0.6 * rng.uniform();
    m.alphas = {w, w, 1.0 - w, 1.0 - w};
    m.directions = {in_plane(t1), -in_plane(t1), in_plane(t2), -in_plane(t2)};
    return m;
  }
  for (;;) {
    std::vector<Vec3> dirs;
    for (int b = 0; b < outcomes; ++b) {
      dirs.push_back(outcomes == 3 ? in_plane(2.0 * kPi * rng.uniform()) : random_unit(rng));
    }
    auto w = hull_weights(dirs, normal, 0.1);
    if (!w.empty()) {
      m.alphas = std::move(w);
      m.directions = std::move(dirs);
      return m;
    }
  }
}

// One hidden-variable round. Returns the cell index.
struct SampleContext {
  LhvModelKind kind;
  const LhvSetting* setting;
  double extra_keep;
  std::vector<double> cumulative;  // cumulative alpha_b / 2 for the POVM kinds
};

int sample_once(const SampleContext& ctx, CounterRng& rng) {
  const LhvSetting& s = *ctx.setting;
  const int m = s.bob.outcomes();
  const bool planar = is_planar(ctx.kind);
  const bool mixture = ctx.kind == LhvModelKind::PovmExtension || ctx.kind == LhvModelKind::PlanarPovm;

  Vec3 lambda;
  if (planar) {
    const double zeta = 2.0 * kPi * rng.uniform();
    lambda = plane_direction(zeta);
  } else {
    lambda = random_unit(rng);
  }
  const int a = s.alice.dot(lambda) >= 0.0 ? 0 : 1;
  // Bob holds the anti-parallel vector on the sphere and the same one on the circle.
  const Vec3 bob_lambda = planar ? lambda : -lambda;

  int target = 0;
  if (mixture) {
    const double u = rng.uniform();
    target = static_cast<int>(std::upper_bound(ctx.cumulative.begin(), ctx.cumulative.end(), u) -
                              ctx.cumulative.begin());
    target = std::min(target, m - 1);
  }
  const double d = s.bob.directions[static_cast<std::size_t>(target)].dot(bob_lambda);
  int b = m;
  if (rng.uniform() < std::abs(d)) {
    if (mixture) {
      if (d >= 0.0) b = target;
    } else {
      b = d >= 0.0 ? 0 : 1;
    }
  }
  if (b != m && ctx.extra_keep < 1.0 && rng.uniform() >= ctx.extra_keep) b = m;
  return a * (m + 1) + b;
}

}  // namespace

double critical_eta(LhvModelKind kind) {
  switch (kind) {
    case LhvModelKind::GisinGisin: return 0.5;
    case LhvModelKind::PovmExtension: return 0.25;
    case LhvModelKind::Planar: return 2.0 / kPi;
    case LhvModelKind::PlanarPovm: return 1.0 / kPi;
  }
  throw std::logic_error("unknown LHV model kind");
}

std::string_view model_name(LhvModelKind kind) {
  switch (kind) {
    case LhvModelKind::GisinGisin: return "gisin-gisin";
    case LhvModelKind::PovmExtension: return "povm-extension";
    case LhvModelKind::Planar: return "planar";
    case LhvModelKind::PlanarPovm: return "planar-povm";
  }
  throw std::logic_error("unknown LHV model kind");
}

std::optional<LhvModelKind> parse_model(std::string_view name) {
  for (auto k : {LhvModelKind::GisinGisin, LhvModelKind::PovmExtension, LhvModelKind::Planar,
                 LhvModelKind::PlanarPovm}) {
    if (model_name(k) == name) return k;
  }
  return std::nullopt;
}

bool is_planar(LhvModelKind kind) { return kind == LhvModelKind::Planar || kind == LhvModelKind::PlanarPovm; }

BobMeasurement BobMeasurement::projective(const Vec3& y) { return {{1.0, 1.0}, {y, -y}}; }

void BobMeasurement::validate() const {
  if (alphas.size() != directions.size()) throw DomainError("POVM weights and directions differ in count");
  if (alphas.size() < 2 || alphas.size() > 4) throw DomainError("extremal qubit POVMs have 2 to 4 outcomes");
  double total = 0.0;
  Vec3 balance;
  for (std::size_t b = 0; b < alphas.size(); ++b) {
    if (!(alphas[b] > 0.0)) throw DomainError("POVM weights must be positive");
    check_unit(directions[b], "POVM direction");
    total += alphas[b];
    balance = balance + directions[b] * alphas[b];
  }
  if (std::abs(total - 2.0) > tol::kUnitVector) throw DomainError("POVM weights must sum to 2");
  if (balance.norm() > tol::kUnitVector) throw DomainError("weighted POVM directions must sum to zero");
}

bool BobMeasurement::is_projective() const {
  return alphas.size() == 2 && std::abs(alphas[0] - 1.0) <= tol::kUnitVector &&
         (directions[0] + directions[1]).norm() <= tol::kUnitVector;
}

void LhvSetting::validate(LhvModelKind kind) const {
  check_unit(alice, "Alice direction");
  bob.validate();
  if (is_planar(kind)) {
    if (std::abs(alice.y) > tol::kUnitVector) throw DomainError("planar models need Alice's direction in the x-z plane");
    for (const auto& d : bob.directions) {
      if (std::abs(d.y) > tol::kUnitVector) throw DomainError("planar models need Bob's directions in the x-z plane");
    }
  }
  if ((kind == LhvModelKind::GisinGisin || kind == LhvModelKind::Planar) && !bob.is_projective()) {
    throw DomainError(std::string(model_name(kind)) + " needs a projective Bob measurement");
  }
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream))) {}

std::uint64_t CounterRng::mix(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() { return mix(key_ + (counter_++) * kGolden); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

SampleBatch lhv_sample(LhvModelKind kind, const std::vector<LhvSetting>& settings, std::uint64_t count,
                       std::uint64_t seed, const SampleOptions& opts) {
  if (count < 1) throw DomainError("sample count must be >= 1");
  if (count > kMaxCount) throw DomainError("sample count must not exceed 2^40");
  if (settings.empty()) throw DomainError("at least one setting is required");
  if (!(opts.extra_keep > 0.0 && opts.extra_keep <= 1.0)) throw DomainError("extra_keep must lie in (0,1]");
  for (const auto& s : settings) s.validate(kind);

  SampleBatch batch;
  batch.seed = seed;
  batch.count = count;
  batch.settings = settings;

  int workers = opts.threads > 0 ? opts.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), count));

  for (std::size_t si = 0; si < settings.size(); ++si) {
    SampleContext ctx{kind, &settings[si], opts.extra_keep, {}};
    double acc = 0.0;
    for (double alpha : settings[si].bob.alphas) {
      acc += alpha / 2.0;
      ctx.cumulative.push_back(acc);
    }
    const auto cells = static_cast<std::size_t>(settings[si].cells());
    std::vector<std::vector<std::uint64_t>> partial(static_cast<std::size_t>(workers),
                                                    std::vector<std::uint64_t>(cells, 0));
    const std::uint64_t chunk = (count + workers - 1) / workers;
    auto run = [&](int w) {
      const std::uint64_t begin = std::min(count, chunk * static_cast<std::uint64_t>(w));
      const std::uint64_t end = std::min(count, begin + chunk);
      auto& tally = partial[static_cast<std::size_t>(w)];
      for (std::uint64_t i = begin; i < end; ++i) {
        CounterRng rng(seed, (static_cast<std::uint64_t>(si) << kStreamShift) + i);
        ++tally[static_cast<std::size_t>(sample_once(ctx, rng))];
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
      for (auto& t : pool) t.join();
    }
    std::vector<std::uint64_t> merged(cells, 0);
    for (const auto& part : partial)
      for (std::size_t c = 0; c < cells; ++c) merged[c] += part[c];
    batch.tallies.push_back(std::move(merged));
  }
  return batch;
}

std::vector<CMatrix> lossy_povm(const BobMeasurement& m, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0,1]");
  m.validate();
  std::vector<CMatrix> out;
  for (std::size_t b = 0; b < m.alphas.size(); ++b) {
    out.push_back((eta * m.alphas[b]) * bloch_projector(m.directions[b]));
  }
  out.push_back((1.0 - eta) * identity2());
  return out;
}

std::vector<double> lhv_analytic_target(LhvModelKind kind, const LhvSetting& setting, double extra_keep) {
  setting.validate(kind);
  if (!(extra_keep > 0.0 && extra_keep <= 1.0)) throw DomainError("extra_keep must lie in (0,1]");
  const DensityMatrix state = is_planar(kind) ? DensityMatrix::phi_plus() : DensityMatrix::psi_minus();
  const Povm alice = Povm::from_observable(bloch_observable(setting.alice));
  const std::vector<CMatrix> bob = lossy_povm(setting.bob, critical_eta(kind) * extra_keep);
  std::vector<double> p;
  for (int a = 0; a < 2; ++a)
    for (const auto& e : bob) p.push_back(born_expectation(state, kron(alice.element(static_cast<std::size_t>(a)), e)));
  return p;
}

std::vector<CMatrix> PovmMixture::average() const {
  std::vector<CMatrix> out(components.front().size(), CMatrix::zero(2));
  for (std::size_t c = 0; c < components.size(); ++c)
    for (std::size_t b = 0; b < out.size(); ++b) out[b] = out[b] + weights[c] * components[c][b];
  return out;
}

PovmMixture povm_mixture(const std::vector<double>& alphas, const std::vector<Vec3>& directions) {
  const BobMeasurement m{alphas, directions};
  m.validate();
  const int outcomes = m.outcomes();
  const CMatrix id = identity2();
  PovmMixture mix;
  for (int bp = 0; bp < outcomes; ++bp) {
    mix.weights.push_back(alphas[static_cast<std::size_t>(bp)] / 2.0);
    std::vector<CMatrix> comp(static_cast<std::size_t>(outcomes) + 1, CMatrix::zero(2));
    const CMatrix half = 0.5 * bloch_projector(directions[static_cast<std::size_t>(bp)]);
    comp[static_cast<std::size_t>(bp)] = half;
    comp.back() = id - half;
    mix.components.push_back(std::move(comp));
  }
  return mix;
}

VerifyReport lhv_verify(LhvModelKind kind, const std::vector<LhvSetting>& settings, std::uint64_t count,
                        std::uint64_t seed, const VerifyOptions& opts) {
  const SampleBatch batch = lhv_sample(kind, settings, count, seed, {opts.extra_keep, opts.threads});
  VerifyReport r;
  r.model = std::string(model_name(kind));
  r.eta_target = critical_eta(kind) * opts.extra_keep;
  r.insufficient_samples = static_cast<double>(count) * r.eta_target < 1000.0;

  const double n = static_cast<double>(count);
  bool ok = true;
  double clicks = 0.0;
  for (std::size_t si = 0; si < settings.size(); ++si) {
    const auto target = lhv_analytic_target(kind, settings[si], opts.extra_keep);
    const int m = settings[si].bob.outcomes();
    for (std::size_t c = 0; c < target.size(); ++c) {
      const double freq = static_cast<double>(batch.tallies[si][c]) / n;
      if (static_cast<int>(c % static_cast<std::size_t>(m + 1)) != m) clicks += freq;
      const double p = std::clamp(target[c], 0.0, 1.0);
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      const double dev = std::abs(freq - target[c]);
      const bool cell_ok = opts.abs_tolerance ? dev <= *opts.abs_tolerance : dev <= opts.k_sigma * sigma + 1.0 / n;
      ok = ok && cell_ok;
      const double z = sigma > 0.0 ? dev / sigma : (dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (dev > r.max_dev) {
        r.max_dev = dev;
        r.sigma = sigma;
      }
      r.max_z = std::max(r.max_z, z);
    }
  }
  r.eta_empirical = clicks / static_cast<double>(settings.size());
  r.pass = ok && !r.insufficient_samples;
  return r;
}

std::vector<LhvSetting> default_settings(LhvModelKind kind, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("setting count must be >= 1");
  std::vector<LhvSetting> out;
  const bool planar = is_planar(kind);
  const bool povm = kind == LhvModelKind::PovmExtension || kind == LhvModelKind::PlanarPovm;
  for (int i = 0; i < count; ++i) {
    CounterRng rng(seed, kSettingStreamBase + static_cast<std::uint64_t>(i));
    LhvSetting s;
    s.alice = planar ? plane_direction(2.0 * kPi * rng.uniform()) : random_unit(rng);
    s.bob = random_povm(rng, povm ? 2 + i % 3 : 2, planar);
    s.validate(kind);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace routed
