#include "obstruct/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "obstruct/errors.hpp"

namespace obstruct {

OrbitCollection::OrbitCollection(std::string label, std::shared_ptr<const Language> ambient,
                                 Membership member, Counter counter)
    : label_(std::move(label)),
      ambient_(std::move(ambient)),
      member_(std::move(member)),
      counter_(std::move(counter)) {
  if (!ambient_) throw std::invalid_argument("OrbitCollection needs an ambient language");
  if (!member_) throw std::invalid_argument("OrbitCollection needs a membership predicate");
}

std::vector<Word> OrbitCollection::cylinders(std::size_t n, ScaleIndex depth,
                                             std::size_t cap) const {
  std::vector<Word> out;
  for (Word& u : ambient_->enumerate(n + depth.j, cap)) {
    if (member_(WordView(u).first(n))) out.push_back(std::move(u));
  }
  return out;
}

OrbitCollection whole_space(std::shared_ptr<const Language> ambient) {
  const Language* lang = ambient.get();
  return OrbitCollection(
      "X", std::move(ambient), [](WordView) { return true; },
      [lang](std::size_t n, ScaleIndex depth) { return lang->count(n + depth.j); });
}

SeparatedCount count_separated(const OrbitCollection& d, std::size_t n, ScaleIndex depth) {
  SeparatedCount out;
  if (d.has_counter()) {
    out.count = d.counter()(n, depth);
  } else {
    out.count = static_cast<long long>(d.cylinders(n, depth).size());
  }
  out.empty = out.count == 0;
  return out;
}

std::string to_string(EntropyMethod m) {
  return m == EntropyMethod::regression ? "regression" : "limsup-tail";
}

namespace {

struct Collected {
  std::vector<EntropySample> samples;
  std::vector<std::size_t> empty;
};

Collected collect(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max) {
  if (n_max < 8) throw InputError("entropy estimation needs n_max >= 8");
  Collected c;
  for (std::size_t n = 1; n <= n_max; ++n) {
    SeparatedCount sc = count_separated(d, n, depth);
    if (sc.empty) {
      c.empty.push_back(n);
    } else {
      c.samples.push_back({n, log_of(sc.count)});
    }
  }
  if (c.samples.empty()) {
    throw InputError("empty collection: " + d.label() + " has no points up to n = " +
                     std::to_string(n_max));
  }
  return c;
}

double slope(const std::vector<EntropySample>& s) {
  if (s.size() < 2) return 0;
  double mean_n = 0;
  double mean_y = 0;
  for (const auto& p : s) {
    mean_n += static_cast<double>(p.n);
    mean_y += p.log_count;
  }
  mean_n /= static_cast<double>(s.size());
  mean_y /= static_cast<double>(s.size());
  double sxy = 0;
  double sxx = 0;
  for (const auto& p : s) {
    double dx = static_cast<double>(p.n) - mean_n;
    sxy += dx * (p.log_count - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

EntropyEstimate estimate(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max,
                         EntropyMethod method, bool upper) {
  Collected c = collect(d, depth, n_max);
  EntropyEstimate e;
  e.method = method;
  e.depth = depth;
  e.tail_start = (n_max + 1) / 2;
  e.samples = std::move(c.samples);
  e.empty_lengths = std::move(c.empty);

  std::vector<EntropySample> tail;
  for (const auto& s : e.samples) {
    if (s.n >= e.tail_start) tail.push_back(s);
  }
  bool tail_has_empty = std::any_of(e.empty_lengths.begin(), e.empty_lengths.end(),
                                    [&](std::size_t n) { return n >= e.tail_start; });
  e.regression = slope(tail);
  if (upper) {
    e.tail_value = tail_supremum(e, e.tail_start);
  } else {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& s : tail) inf = std::min(inf, s.log_count / static_cast<double>(s.n));
    e.tail_value = tail_has_empty || tail.empty() ? 0.0 : inf;
  }
  double chosen = 0;
  if (method == EntropyMethod::limsup_tail) {
    chosen = e.tail_value;
  } else if (!upper && tail_has_empty) {
    chosen = 0;
  } else {
    chosen = e.regression;
  }
  e.rate = std::max(0.0, chosen);
  return e;
}

}  // namespace

EntropyEstimate upper_entropy(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max,
                              EntropyMethod method) {
  return estimate(d, depth, n_max, method, true);
}

EntropyEstimate lower_entropy(const OrbitCollection& d, ScaleIndex depth, std::size_t n_max,
                              EntropyMethod method) {
  return estimate(d, depth, n_max, method, false);
}

double tail_supremum(const EntropyEstimate& e, std::size_t start) {
  double sup = 0;
  bool any = false;
  for (const auto& s : e.samples) {
    if (s.n < start) continue;
    double v = s.log_count / static_cast<double>(s.n);
    sup = any ? std::max(sup, v) : v;
    any = true;
  }
  return std::max(0.0, sup);
}

}  // namespace obstruct
