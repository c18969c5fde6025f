#include "obstruct/mme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "obstruct/errors.hpp"
#include "obstruct/parallel.hpp"

namespace obstruct {

namespace mp = boost::multiprecision;

std::string to_string(MeasureProvenance p) {
  switch (p) {
    case MeasureProvenance::empirical:
      return "empirical";
    case MeasureProvenance::parry_exact:
      return "parry-exact";
    case MeasureProvenance::parry_truncated:
      return "parry-truncated";
  }
  return "unknown";
}

MeasureProvenance parse_provenance(const std::string& text) {
  if (text == "empirical") return MeasureProvenance::empirical;
  if (text == "parry-exact") return MeasureProvenance::parry_exact;
  if (text == "parry-truncated") return MeasureProvenance::parry_truncated;
  throw InputError("unknown measure provenance '" + text + "'");
}

CylinderMeasure::CylinderMeasure(std::size_t alphabet_size, std::size_t depth,
                                 MeasureProvenance provenance)
    : alphabet_size_(alphabet_size), depth_(depth), provenance_(provenance) {}

void CylinderMeasure::set(Word u, Mass m) {
  if (u.size() > depth_) throw InputError("cylinder longer than the measure depth");
  for (Symbol s : u) {
    if (s >= alphabet_size_) throw InputError("cylinder symbol outside the alphabet");
  }
  auto [it, inserted] = table_.try_emplace(std::move(u));
  if (!inserted && !it->second.exact) --inexact_;
  if (!m.exact) ++inexact_;
  it->second = std::move(m);
}

bool CylinderMeasure::is_exact() const { return inexact_ == 0; }

void CylinderMeasure::require_depth(std::size_t length) const {
  if (length > depth_) {
    throw InputError("cylinder of length " + std::to_string(length) +
                     " exceeds the measure depth " + std::to_string(depth_));
  }
}

double CylinderMeasure::mass(WordView u) const {
  require_depth(u.size());
  auto it = table_.find(Word(u.begin(), u.end()));
  return it == table_.end() ? 0.0 : it->second.value;
}

std::optional<QuadraticNumber> CylinderMeasure::exact_mass(WordView u) const {
  require_depth(u.size());
  if (!is_exact()) return std::nullopt;
  auto it = table_.find(Word(u.begin(), u.end()));
  if (it == table_.end()) return QuadraticNumber(0);
  return it->second.exact;
}

std::vector<std::pair<Word, Mass>> CylinderMeasure::level(std::size_t n) const {
  std::vector<std::pair<Word, Mass>> out;
  for (const auto& [w, m] : table_) {
    if (w.size() == n) out.emplace_back(w, m);
  }
  return out;
}

MeasureValidation validate_measure(const CylinderMeasure& m, double tolerance) {
  MeasureValidation v;
  const bool exact = m.is_exact();
  auto note = [&](const std::string& what, double err) {
    v.max_error = std::max(v.max_error, err);
    if (v.detail.empty()) v.detail = what;
  };
  for (std::size_t n = 0; n <= m.depth(); ++n) {
    double total = 0;
    QuadraticNumber exact_total(0);
    for (const auto& [w, mass] : m.level(n)) {
      total += mass.value;
      if (exact) exact_total += *mass.exact;
    }
    bool ok = exact ? exact_total == QuadraticNumber(1) : std::abs(total - 1) <= tolerance;
    if (!ok) {
      v.normalized = false;
      note("level " + std::to_string(n) + " sums to " + std::to_string(total), std::abs(total - 1));
    }
  }
  for (const auto& [u, mass] : m.entries()) {
    if (u.size() >= m.depth()) continue;
    double right = 0;
    double left = 0;
    QuadraticNumber exact_right(0);
    QuadraticNumber exact_left(0);
    Word ext(u.size() + 1);
    for (Symbol a = 0; a < m.alphabet_size(); ++a) {
      std::copy(u.begin(), u.end(), ext.begin());
      ext.back() = a;
      right += m.mass(ext);
      if (exact) exact_right += *m.exact_mass(ext);
      ext.front() = a;
      std::copy(u.begin(), u.end(), ext.begin() + 1);
      left += m.mass(ext);
      if (exact) exact_left += *m.exact_mass(ext);
    }
    bool right_ok = exact ? exact_right == *mass.exact : std::abs(right - mass.value) <= tolerance;
    if (!right_ok) {
      v.consistent = false;
      note("extension sum mismatch at " + format_word(u, m.alphabet_size()),
           std::abs(right - mass.value));
    }
    bool left_ok = exact ? exact_left == *mass.exact : std::abs(left - mass.value) <= tolerance;
    if (!left_ok) {
      v.shift_invariant = false;
      note("left extension sum mismatch at " + format_word(u, m.alphabet_size()),
           std::abs(left - mass.value));
    }
  }
  return v;
}

bool zero_tail_admissible(const Presentation& pres) {
  for (Presentation::State s : pres.reachable_from_start()) {
    std::set<Presentation::State> seen;
    Presentation::State t = s;
    while (seen.insert(t).second) {
      t = pres.next(t, 0);
      if (t == Presentation::npos) return false;
    }
  }
  return true;
}

CylinderMeasure empirical_mme(const Language& lang, std::size_t n, std::size_t depth) {
  if (n == 0) throw InputError("empirical_mme needs n >= 1");
  if (depth > n) throw InputError("empirical_mme needs depth <= n");
  lang.require_within_horizon(n + depth, "empirical measure");
  const Presentation& pres = lang.presentation();
  if (!zero_tail_admissible(pres)) {
    throw InputError("empirical_mme: the 0-tail is not admissible from every state");
  }
  const std::size_t states = pres.num_states();
  const std::size_t b = pres.alphabet_size();

  // forward[k][s]: words of length k from the start ending in s.
  // backward[m][t]: words of length m readable from t.
  std::vector<std::vector<BigInt>> forward(n + 1, std::vector<BigInt>(states, BigInt(0)));
  std::vector<std::vector<BigInt>> backward(n + 1, std::vector<BigInt>(states, BigInt(0)));
  forward[0][pres.start()] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t s = 0; s < states; ++s) {
      if (forward[k][s] == 0) continue;
      for (Symbol a = 0; a < b; ++a) {
        auto t = pres.next(s, a);
        if (t != Presentation::npos) forward[k + 1][t] += forward[k][s];
      }
    }
  }
  for (std::size_t t = 0; t < states; ++t) backward[0][t] = 1;
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t t = 0; t < states; ++t) {
      BigInt total = 0;
      for (Symbol a = 0; a < b; ++a) {
        auto next = pres.next(t, a);
        if (next != Presentation::npos) total += backward[m][next];
      }
      backward[m + 1][t] = total;
    }
  }
  BigInt words = 0;
  for (std::size_t s = 0; s < states; ++s) words += forward[n][s];
  const BigInt denominator = words * static_cast<long long>(n);

  std::vector<Word> cylinders;
  for (std::size_t l = 0; l <= depth; ++l) {
    for (Word& u : lang.enumerate(l)) cylinders.push_back(std::move(u));
  }
  std::vector<BigInt> numerators(cylinders.size());
  parallel_for(cylinders.size(), [&](std::size_t i) {
    const Word& u = cylinders[i];
    const std::size_t l = u.size();
    BigInt total = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k + l <= n) {
        for (std::size_t s = 0; s < states; ++s) {
          if (forward[k][s] == 0) continue;
          auto t = pres.run(u, s);
          if (t != Presentation::npos) total += forward[k][s] * backward[n - k - l][t];
        }
      } else {
        // u overlaps the 0-tail: its last k + l - n symbols must be 0.
        std::size_t inside = n - k;
        bool zeros = std::all_of(u.begin() + static_cast<std::ptrdiff_t>(inside), u.end(),
                                 [](Symbol a) { return a == 0; });
        if (!zeros) continue;
        WordView head = WordView(u).first(inside);
        for (std::size_t s = 0; s < states; ++s) {
          if (forward[k][s] == 0) continue;
          if (pres.run(head, s) != Presentation::npos) total += forward[k][s];
        }
      }
    }
    numerators[i] = std::move(total);
  });

  CylinderMeasure m(lang.alphabet_size(), depth, MeasureProvenance::empirical);
  m.set_sample_length(n);
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    Rational q(numerators[i], denominator);
    m.set(std::move(cylinders[i]), Mass{QuadraticNumber(q), to_double(q)});
  }
  return m;
}

namespace {

using QMatrix = std::vector<std::vector<QuadraticNumber>>;

// A nonzero vector spanning the kernel of a, or nullopt if the kernel is not
// one-dimensional.
std::optional<std::vector<QuadraticNumber>> kernel_vector(QMatrix a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c].sign() == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    QuadraticNumber inv = a[r][c].inverse();
    for (std::size_t k = c; k < cols; ++k) a[r][k] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c].sign() == 0) continue;
      QuadraticNumber f = a[i][c];
      for (std::size_t k = c; k < cols; ++k) {
        if (a[r][k].sign() != 0) a[i][k] -= f * a[r][k];
      }
    }
    pivot_col.push_back(c);
    ++r;
  }
  if (cols - pivot_col.size() != 1) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, i = 0; c < cols; ++c) {
    if (i < pivot_col.size() && pivot_col[i] == c) {
      ++i;
    } else {
      free_col = c;
    }
  }
  std::vector<QuadraticNumber> x(cols, QuadraticNumber(0));
  x[free_col] = QuadraticNumber(1);
  for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = -a[i][free_col];
  return x;
}

struct Component {
  std::vector<Presentation::State> states;
  std::vector<std::vector<BigInt>> matrix;  // restricted adjacency
};

std::size_t component_period(const Presentation& pres, const std::vector<Presentation::State>& c) {
  std::vector<long> level(pres.num_states(), -1);
  std::vector<char> inside(pres.num_states(), 0);
  for (auto s : c) inside[s] = 1;
  std::vector<Presentation::State> queue{c.front()};
  level[c.front()] = 0;
  std::size_t g = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto s = queue[head];
    for (Symbol a = 0; a < pres.alphabet_size(); ++a) {
      auto t = pres.next(s, a);
      if (t == Presentation::npos || !inside[t]) continue;
      if (level[t] < 0) {
        level[t] = level[s] + 1;
        queue.push_back(t);
      } else {
        g = std::gcd(g, static_cast<std::size_t>(std::labs(level[s] + 1 - level[t])));
      }
    }
  }
  return g;
}

Component dominant_component(const Presentation& pres, const SpectralEstimate& est) {
  Component c;
  for (std::size_t s = 0; s < pres.num_states(); ++s) {
    if (est.eigenvector[s] > 0) c.states.push_back(s);
  }
  if (c.states.empty()) throw InputError("parry_measure: the presentation has no cycle");
  auto adjacency = pres.adjacency();
  for (auto s : c.states) {
    std::vector<BigInt> row;
    for (auto t : c.states) row.push_back(adjacency[s][t]);
    c.matrix.push_back(std::move(row));
  }
  return c;
}

std::vector<std::vector<BigInt>> transpose(const std::vector<std::vector<BigInt>>& m) {
  std::vector<std::vector<BigInt>> t(m.size(), std::vector<BigInt>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

std::optional<std::vector<QuadraticNumber>> exact_eigenvector(
    const std::vector<std::vector<BigInt>>& a, const QuadraticNumber& lambda) {
  QMatrix q(a.size(), std::vector<QuadraticNumber>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) q[i][j] = QuadraticNumber(Rational(a[i][j]));
    q[i][i] -= lambda;
  }
  auto x = kernel_vector(std::move(q));
  if (!x) return std::nullopt;
  // Perron vectors have one sign; normalize to positive entries.
  int sign = (*x)[0].sign();
  for (const auto& v : *x) {
    if (v.sign() == 0 || v.sign() != sign) return std::nullopt;
  }
  if (sign < 0) {
    for (auto& v : *x) v = -v;
  }
  return x;
}

}  // namespace

CylinderMeasure parry_measure(const Language& lang, std::size_t depth,
                              const std::optional<QuadraticNumber>& lambda) {
  lang.require_within_horizon(depth, "Parry measure");
  PrecisionGuard guard(256);
  const Presentation& pres = lang.presentation();
  SpectralEstimate est = spectral_radius(pres.adjacency(), HighFloat("1e-60"));
  Component comp = dominant_component(pres, est);
  if (component_period(pres, comp.states) != 1) {
    throw InputError("non-mixing presentation: the dominant component is periodic");
  }
  const std::size_t m = comp.states.size();
  std::vector<std::size_t> index(pres.num_states(), m);
  for (std::size_t i = 0; i < m; ++i) index[comp.states[i]] = i;

  std::optional<std::vector<QuadraticNumber>> right;
  std::optional<std::vector<QuadraticNumber>> left;
  if (lambda) {
    right = exact_eigenvector(comp.matrix, *lambda);
    left = exact_eigenvector(transpose(comp.matrix), *lambda);
  }
  const bool exact = right && left;

  std::vector<HighFloat> r(m);
  std::vector<HighFloat> l(m);
  HighFloat radius;
  if (exact) {
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (*right)[i].to_high();
      l[i] = (*left)[i].to_high();
    }
    radius = lambda->to_high();
  } else {
    SpectralEstimate rs = spectral_radius(comp.matrix, HighFloat("1e-60"));
    SpectralEstimate ls = spectral_radius(transpose(comp.matrix), HighFloat("1e-60"));
    r = rs.eigenvector;
    l = ls.eigenvector;
    radius = (rs.lower + rs.upper) / 2;
  }
  QuadraticNumber exact_norm(0);
  HighFloat norm = 0;
  for (std::size_t i = 0; i < m; ++i) {
    norm += l[i] * r[i];
    if (exact) exact_norm += (*left)[i] * (*right)[i];
  }

  CylinderMeasure out(lang.alphabet_size(), depth, MeasureProvenance::parry_exact);
  std::vector<Word> cylinders;
  for (std::size_t n = 0; n <= depth; ++n) {
    for (Word& u : lang.enumerate(n)) cylinders.push_back(std::move(u));
  }
  std::vector<Mass> masses(cylinders.size());
  // Powers are shared across words of equal length.
  std::vector<QuadraticNumber> exact_scale;
  std::vector<HighFloat> scale;
  for (std::size_t n = 0; n <= depth; ++n) {
    scale.push_back(HighFloat(1) / (mp::pow(radius, static_cast<long>(n)) * norm));
    if (exact) exact_scale.push_back((lambda->pow(static_cast<long long>(n)) * exact_norm).inverse());
  }
  parallel_for(cylinders.size(), [&](std::size_t i) {
    const Word& u = cylinders[i];
    HighFloat total = 0;
    QuadraticNumber exact_total(0);
    for (std::size_t si = 0; si < m; ++si) {
      auto t = pres.run(u, comp.states[si]);
      if (t == Presentation::npos || index[t] == m) continue;
      total += l[si] * r[index[t]];
      if (exact) exact_total += (*left)[si] * (*right)[index[t]];
    }
    Mass mass;
    if (exact) {
      mass.exact = exact_total * exact_scale[u.size()];
      mass.value = mass.exact->to_double();
    } else {
      mass.value = (total * scale[u.size()]).convert_to<double>();
    }
    masses[i] = std::move(mass);
  });
  for (std::size_t i = 0; i < cylinders.size(); ++i) {
    if (masses[i].value > 0 || (masses[i].exact && masses[i].exact->sign() > 0)) {
      out.set(std::move(cylinders[i]), std::move(masses[i]));
    }
  }
  return out;
}

CylinderMeasure parry_measure(const BetaSystem& sys, std::size_t depth) {
  if (!sys.is_truncated()) {
    std::optional<QuadraticNumber> lambda = sys.exact_beta();
    return parry_measure(static_cast<const Language&>(sys), depth, lambda);
  }
  CylinderMeasure base = parry_measure(static_cast<const Language&>(sys), depth);
  PrecisionGuard guard(256);
  SpectralEstimate est = spectral_radius(sys.presentation().adjacency(), HighFloat("1e-60"));
  HighFloat defect = mp::abs(HighFloat((est.lower + est.upper) / 2) - HighFloat(sys.beta_value()));
  CylinderMeasure out(base.alphabet_size(), depth, MeasureProvenance::parry_truncated);
  for (const auto& [w, mass] : base.entries()) out.set(w, mass);
  out.set_error_bound(defect.convert_to<double>());
  return out;
}

double measure_entropy(const CylinderMeasure& m, std::size_t n) {
  if (n == 0) return 0;
  double h = 0;
  for (const auto& [w, mass] : m.level(n)) {
    if (mass.value > 0) h -= mass.value * std::log(mass.value);
  }
  return h / static_cast<double>(n);
}

double max_cylinder_difference(const CylinderMeasure& a, const CylinderMeasure& b,
                               std::size_t length) {
  std::set<Word> words;
  for (const auto& [w, mass] : a.level(length)) words.insert(w);
  for (const auto& [w, mass] : b.level(length)) words.insert(w);
  double worst = 0;
  for (const Word& w : words) worst = std::max(worst, std::abs(a.mass(w) - b.mass(w)));
  return worst;
}

// ---------------------------------------------------------------------------

GrowthBase GrowthBase::of(const BetaSystem& sys) {
  GrowthBase g;
  g.exact = sys.exact_beta();
  g.value = sys.beta_value();
  return g;
}

double GrowthBase::log() const { return std::log(to_double()); }

std::optional<QuadraticNumber> GrowthBase::exact_power(long e) const {
  if (!exact) return std::nullopt;
  return exact->pow(e);
}

HighFloat GrowthBase::power(long e) const {
  PrecisionGuard guard(256);
  return mp::pow(HighFloat(value), e);
}

int GrowthBase::compare_power(const BigInt& c, long e) const {
  if (exact) return (QuadraticNumber(Rational(c)) - exact->pow(e)).sign();
  PrecisionGuard guard(256);
  HighFloat diff = HighFloat(c) - mp::pow(HighFloat(value), e);
  return diff > 0 ? 1 : (diff < 0 ? -1 : 0);
}

double GibbsReport::window_minimum(std::size_t lo, std::size_t hi) const {
  double best = 0;
  bool any = false;
  for (const auto& [n, v] : per_length) {
    if (n < lo || n > hi) continue;
    best = any ? std::min(best, v) : v;
    any = true;
  }
  return best;
}

double gibbs_proof_constant(double c1, std::size_t tau, double h) {
  return std::exp(-2.0 * static_cast<double>(tau) * h) / (4.0 * c1);
}

double mixing_proof_constant(double c1, std::size_t tau, double h) {
  return std::exp(-4.0 * static_cast<double>(tau) * h) / (8.0 * c1);
}

GibbsReport gibbs_check(const CylinderMeasure& m, const GrowthBase& base,
                        const OrbitCollection& collection, std::size_t n_min, std::size_t n_max,
                        ScaleIndex depth) {
  if (n_min == 0 || n_min > n_max) throw InputError("gibbs_check: empty length range");
  if (n_max + depth.j > m.depth()) {
    throw InputError("gibbs_check: measure depth " + std::to_string(m.depth()) +
                     " is below n + j = " + std::to_string(n_max + depth.j));
  }
  GibbsReport rep;
  rep.tested_class = collection.label();
  rep.depth_offset = depth.j;
  rep.n_min = n_min;
  rep.n_max = n_max;
  const bool exact = m.is_exact() && base.exact.has_value();
  bool first = true;
  for (std::size_t n = n_min; n <= n_max; ++n) {
    auto exact_scale = base.exact_power(static_cast<long>(n));
    double scale = base.power(static_cast<long>(n)).convert_to<double>();
    double level_min = 0;
    bool level_any = false;
    for (const Word& u : collection.cylinders(n, depth)) {
      ++rep.tested;
      double ratio = m.mass(u) * scale;
      std::optional<QuadraticNumber> exact_ratio;
      if (exact) {
        exact_ratio = *m.exact_mass(u) * *exact_scale;
        ratio = exact_ratio->to_double();
      }
      if (ratio <= 0) rep.violations.push_back(u);
      bool better = first || (exact ? *exact_ratio < *rep.constant_exact : ratio < rep.constant);
      if (better) {
        rep.constant = ratio;
        rep.constant_exact = exact_ratio;
        rep.argmin = u;
        rep.argmin_n = n;
        first = false;
      }
      level_min = level_any ? std::min(level_min, ratio) : ratio;
      level_any = true;
    }
    if (level_any) rep.per_length.emplace_back(n, level_min);
  }
  if (rep.tested == 0) rep.note = "no cylinders of the class in the tested range";
  return rep;
}

namespace {

template <typename F>
void for_each_joint_word(const CylinderMeasure& m, const Word& u, std::size_t shift, const Word& v,
                         F&& visit) {
  std::size_t length = std::max(u.size(), shift + v.size());
  if (length > m.depth()) {
    throw InputError("measure depth " + std::to_string(m.depth()) + " is below " +
                     std::to_string(length) + " needed for the joint cylinder");
  }
  const auto& table = m.entries();
  for (auto it = table.lower_bound(u); it != table.end(); ++it) {
    const auto& [w, mass] = *it;
    if (w.size() < u.size() || !std::equal(u.begin(), u.end(), w.begin())) break;
    if (w.size() != length) continue;
    if (!std::equal(v.begin(), v.end(), w.begin() + static_cast<std::ptrdiff_t>(shift))) continue;
    visit(mass);
  }
}

}  // namespace

double joint_mass(const CylinderMeasure& m, const Word& u, std::size_t shift, const Word& v) {
  double total = 0;
  for_each_joint_word(m, u, shift, v, [&](const Mass& mass) { total += mass.value; });
  return total;
}

std::optional<QuadraticNumber> joint_mass_exact(const CylinderMeasure& m, const Word& u,
                                                std::size_t shift, const Word& v) {
  if (!m.is_exact()) return std::nullopt;
  QuadraticNumber total(0);
  for_each_joint_word(m, u, shift, v, [&](const Mass& mass) { total += *mass.exact; });
  return total;
}

MixingReport mixing_check(const CylinderMeasure& m, const GrowthBase& base,
                          const std::vector<std::pair<Word, Word>>& pairs, std::size_t gap_min,
                          std::size_t gap_max, std::size_t tau) {
  MixingReport rep;
  rep.tau = tau;
  const bool exact = m.is_exact() && base.exact.has_value();
  bool first = true;
  for (const auto& [u, v] : pairs) {
    long e = static_cast<long>(u.size() + v.size());
    double scale = base.power(e).convert_to<double>();
    auto exact_scale = base.exact_power(e);
    for (std::size_t q = gap_min; q <= gap_max; ++q) {
      MixingEntry entry{u, v, q, 0, 0, q < 2 * tau};
      std::optional<QuadraticNumber> exact_scaled;
      if (exact) {
        QuadraticNumber mass = *joint_mass_exact(m, u, u.size() + q, v);
        entry.mass = mass.to_double();
        exact_scaled = mass * *exact_scale;
        entry.scaled = exact_scaled->to_double();
      } else {
        entry.mass = joint_mass(m, u, u.size() + q, v);
        entry.scaled = entry.mass * scale;
      }
      if (entry.below_precondition) {
        if (entry.mass <= 0) ++rep.expected_failures;
      } else {
        bool better =
            first || (exact ? *exact_scaled < *rep.constant_exact : entry.scaled < rep.constant);
        if (better) {
          rep.constant = entry.scaled;
          rep.constant_exact = exact_scaled;
          rep.argmin = entry;
          first = false;
        }
      }
      rep.entries.push_back(std::move(entry));
    }
  }
  return rep;
}

std::vector<ProbeRow> mixing_liminf_probe(const CylinderMeasure& m, const std::vector<Word>& U,
                                          const std::vector<Word>& V, std::size_t m_min,
                                          std::size_t m_max) {
  auto check_antichain = [](const std::vector<Word>& set, const char* name) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      for (std::size_t k = 0; k < set.size(); ++k) {
        if (i == k || set[i].size() > set[k].size()) continue;
        if (std::equal(set[i].begin(), set[i].end(), set[k].begin())) {
          throw InputError(std::string("mixing probe: cylinders of ") + name + " overlap");
        }
      }
    }
  };
  check_antichain(U, "U");
  check_antichain(V, "V");
  std::vector<ProbeRow> rows;
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t shift = m_min; shift <= m_max; ++shift) {
    double total = 0;
    for (const Word& u : U) {
      for (const Word& v : V) total += joint_mass(m, u, shift, v);
    }
    inf = std::min(inf, total);
    rows.push_back({shift, total, inf});
  }
  return rows;
}

std::size_t positive_mass_count(const CylinderMeasure& m, const Rational& gamma, std::size_t n) {
  if (gamma <= 0 || gamma >= 1) throw InputError("positive_mass_count needs 0 < gamma < 1");
  if (n > m.depth()) throw InputError("positive_mass_count: n exceeds the measure depth");
  auto cyl = m.level(n);
  const bool exact = m.is_exact();
  std::sort(cyl.begin(), cyl.end(), [&](const auto& x, const auto& y) {
    double a = x.second.value;
    double b = y.second.value;
    if (exact && std::abs(a - b) <= 1e-9 * std::max(a, b)) {
      if (*x.second.exact != *y.second.exact) return *x.second.exact > *y.second.exact;
      return x.first < y.first;
    }
    if (a != b) return a > b;
    return x.first < y.first;
  });
  QuadraticNumber exact_total(0);
  const QuadraticNumber exact_gamma(gamma);
  double total = 0;
  const double g = to_double(gamma);
  for (std::size_t i = 0; i < cyl.size(); ++i) {
    if (exact) {
      exact_total += *cyl[i].second.exact;
      if (exact_total >= exact_gamma) return i + 1;
    } else {
      total += cyl[i].second.value;
      if (total >= g) return i + 1;
    }
  }
  return cyl.size();
}

// ---------------------------------------------------------------------------

bool CountingReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const LemmaCheck& c) { return c.pass || c.skipped; });
}

namespace {

std::string big(const BigInt& x) { return x.str(); }

}  // namespace

CountingReport counting_suite(const DecompositionScheme& scheme, const GrowthBase& base,
                              std::size_t n_max, ScaleIndex depth, std::size_t tau) {
  if (n_max < 8) throw InputError("counting_suite needs n_max >= 8");
  const Language& lang = *scheme.language();
  lang.require_within_horizon(n_max + depth.j, "counting suite");
  PrecisionGuard guard(256);

  CountingReport rep;
  rep.n_max = n_max;
  rep.depth = depth;
  rep.tau = tau;

  std::vector<BigInt> full(n_max + 1);
  std::vector<BigInt> good(n_max + 1);
  std::vector<BigInt> obstruction(n_max + 1);
  parallel_for(n_max + 1, [&](std::size_t n) {
    full[n] = lang.count(n + depth.j);
    good[n] = scheme.count_good(n, depth);
    obstruction[n] = scheme.count_obstruction(n, depth);
  });

  // (a) Lambda(m+n) <= Lambda(m) Lambda(n).
  {
    LemmaCheck c;
    c.id = "a";
    c.lemma = "ssum: submultiplicativity";
    for (std::size_t m = 1; m < n_max && c.pass; ++m) {
      for (std::size_t n = 1; m + n <= n_max; ++n) {
        ++c.checked;
        if (full[m + n] > full[m] * full[n]) {
          c.pass = false;
          c.witness = "m=" + std::to_string(m) + " n=" + std::to_string(n) + ": " +
                      big(full[m + n]) + " > " + big(full[m]) + "*" + big(full[n]);
          break;
        }
      }
    }
    rep.checks.push_back(std::move(c));
  }
  // (b) Lambda(n) >= beta^n.
  {
    LemmaCheck c;
    c.id = "b";
    c.lemma = "sgeq: Lambda(n) >= e^{n h}";
    for (std::size_t n = 0; n <= n_max; ++n) {
      ++c.checked;
      if (base.compare_power(full[n], static_cast<long>(n)) < 0) {
        c.pass = false;
        c.witness = "n=" + std::to_string(n) + ": " + big(full[n]) + " < beta^n";
        break;
      }
    }
    rep.checks.push_back(std::move(c));
  }
  // (c) Lambda(sum n_i + (k-1) tau) >= prod Lambda(G, n_i), k <= 3.
  {
    LemmaCheck c;
    c.id = "c";
    c.lemma = "ssumspec: specification lower bound";
    std::vector<std::size_t> parts;
    std::function<void(std::size_t)> rec = [&](std::size_t used) {
      if (!c.pass) return;
      if (!parts.empty()) {
        std::size_t total = used + (parts.size() - 1) * tau;
        BigInt product = 1;
        for (std::size_t p : parts) product *= good[p];
        ++c.checked;
        if (full[total] < product) {
          c.pass = false;
          std::ostringstream w;
          w << "lengths";
          for (std::size_t p : parts) w << ' ' << p;
          w << ": " << big(full[total]) << " < " << big(product);
          c.witness = w.str();
          return;
        }
      }
      if (parts.size() == 3) return;
      for (std::size_t n = 1; used + n + parts.size() * tau <= n_max; ++n) {
        parts.push_back(n);
        rec(used + n);
        parts.pop_back();
      }
    };
    rec(0);
    c.detail = "tau=" + std::to_string(tau);
    rep.checks.push_back(std::move(c));
  }
  // (d) Lambda(G, n) <= beta^{n + tau}.
  {
    LemmaCheck c;
    c.id = "d";
    c.lemma = "sleq: Lambda(G, n) <= e^{(n+tau) h}";
    for (std::size_t n = 0; n <= n_max; ++n) {
      ++c.checked;
      if (base.compare_power(good[n], static_cast<long>(n + tau)) > 0) {
        c.pass = false;
        c.witness = "n=" + std::to_string(n) + ": " + big(good[n]) + " > beta^(n+tau)";
        break;
      }
    }
    rep.checks.push_back(std::move(c));
  }
  // (e) b_M = sum_{i >= M} Lambda(P ∪ S, i) beta^{-i}.
  {
    LemmaCheck c;
    c.id = "e";
    c.lemma = "summability: b_M decreases to 0";
    const bool exact = base.exact.has_value();
    std::vector<QuadraticNumber> a_exact;
    std::vector<HighFloat> a;
    for (std::size_t i = 0; i <= n_max; ++i) {
      a.push_back(HighFloat(obstruction[i]) / base.power(static_cast<long>(i)));
      if (exact) a_exact.push_back(QuadraticNumber(Rational(obstruction[i])) * *base.exact_power(-static_cast<long>(i)));
    }
    // Counts constant over the last quarter close the tail geometrically.
    std::size_t quarter = n_max - n_max / 4;
    rep.tail_closed = std::all_of(obstruction.begin() + static_cast<std::ptrdiff_t>(quarter),
                                  obstruction.end(), [&](const BigInt& x) { return x == obstruction[n_max]; });
    HighFloat tail = 0;
    QuadraticNumber tail_exact(0);
    if (rep.tail_closed) {
      tail = HighFloat(obstruction[n_max]) / (base.power(static_cast<long>(n_max)) * (HighFloat(base.value) - 1));
      if (exact) {
        tail_exact = QuadraticNumber(Rational(obstruction[n_max])) *
                     (base.exact_power(static_cast<long>(n_max)).value() * (*base.exact - QuadraticNumber(1))).inverse();
      }
    }
    rep.tails.resize(n_max + 1);
    HighFloat running = tail;
    QuadraticNumber running_exact = tail_exact;
    for (std::size_t i = n_max + 1; i-- > 0;) {
      running += a[i];
      if (exact) running_exact += a_exact[i];
      rep.tails[i].level = i;
      rep.tails[i].value = running.convert_to<double>();
      if (exact) rep.tails[i].exact = running_exact;
    }
    c.checked = rep.tails.size();
    double ratio = rep.tails.back().value / rep.tails.front().value;
    rep.hypotheses_met = rep.tail_closed && ratio < 1e-3;
    std::ostringstream d;
    d << "b_0=" << rep.tails.front().value << " b_" << n_max << "=" << rep.tails.back().value
      << (rep.tail_closed ? " (geometric tail closure)" : " (partial sums only)");
    c.detail = d.str();
    if (!rep.hypotheses_met) {
      c.skipped = true;
      c.detail += "; obstruction growth is not below h(X), hypothesis unmet";
    }
    rep.checks.push_back(std::move(c));
  }
  // (f) C1 = max Lambda(n) / beta^n over the tail window.
  {
    LemmaCheck c;
    c.id = "f";
    c.lemma = "sleq2: Lambda(n) <= C1 e^{n h}";
    const std::size_t start = (n_max + 1) / 2;
    const std::size_t late = (3 * n_max + 3) / 4;
    double late_max = 0;
    std::optional<QuadraticNumber> best;
    for (std::size_t n = 1; n <= n_max; ++n) {
      double ratio = (HighFloat(full[n]) / base.power(static_cast<long>(n))).convert_to<double>();
      rep.c1_all = std::max(rep.c1_all, ratio);
      if (n >= late) late_max = std::max(late_max, ratio);
      if (n < start) continue;
      ++c.checked;
      if (base.exact) {
        QuadraticNumber q = QuadraticNumber(Rational(full[n])) * *base.exact_power(-static_cast<long>(n));
        if (!best || q > *best) best = q;
      }
      rep.c1 = std::max(rep.c1, ratio);
    }
    if (best) {
      rep.c1_exact = best;
      rep.c1 = best->to_double();
    }
    rep.c2 = std::log(rep.c1) + std::log(2.0);
    double drift = std::abs(rep.c1 - late_max) / rep.c1;
    std::ostringstream d;
    d << "C1=" << rep.c1 << " over n in [" << start << "," << n_max << "], drift to [" << late
      << "," << n_max << "] " << drift;
    c.detail = d.str();
    if (drift >= 1e-3) {
      c.pass = false;
      c.witness = "C1 not stable across the tail window";
    }
    rep.checks.push_back(std::move(c));
  }
  // (g) Lambda(G^M, n) >= (1 - gamma) Lambda(n) for all n once M is large.
  {
    LemmaCheck c;
    c.id = "g";
    c.lemma = "lotsinG2: filtration covers most of X";
    if (!rep.hypotheses_met) {
      c.skipped = true;
      c.detail = "summability hypothesis unmet";
    } else {
      std::vector<std::vector<BigInt>> cover(n_max + 1, std::vector<BigInt>(n_max + 1));
      parallel_for(n_max + 1, [&](std::size_t level) {
        for (std::size_t n = 1; n <= n_max; ++n) cover[level][n] = scheme.count_filtration(level, n, depth);
      });
      auto holds = [&](std::size_t level, const Rational& gamma) {
        Rational keep = Rational(1) - gamma;
        for (std::size_t n = 1; n <= n_max; ++n) {
          if (Rational(cover[level][n]) < keep * Rational(full[n])) return false;
        }
        return true;
      };
      const double growth_tau = base.power(static_cast<long>(tau)).convert_to<double>();
      for (Rational gamma : {Rational(1, 2), Rational(1, 4), Rational(1, 10)}) {
        CoverageRow row;
        row.gamma = gamma;
        for (std::size_t level = 0; level <= n_max; ++level) {
          if (holds(level, gamma)) {
            row.level_found = level;
            break;
          }
        }
        for (std::size_t level = 0; level <= n_max; ++level) {
          bool small = false;
          if (rep.tails[level].exact && base.exact) {
            QuadraticNumber lhs = *base.exact_power(static_cast<long>(tau)) * *rep.tails[level].exact *
                                  *rep.tails[level].exact;
            small = lhs < QuadraticNumber(gamma);
          } else {
            small = growth_tau * rep.tails[level].value * rep.tails[level].value < to_double(gamma);
          }
          if (small) {
            row.level_proof = level;
            break;
          }
        }
        row.holds = row.level_proof && holds(*row.level_proof, gamma);
        ++c.checked;
        if (!row.holds) {
          c.pass = false;
          c.witness = "gamma=" + gamma.str();
        }
        rep.coverage.push_back(std::move(row));
      }
    }
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

}  // namespace obstruct
