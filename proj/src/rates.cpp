// SPDX-License-Identifier: Apache-2.0

#include "opm/rates.hpp"

#include <algorithm>
#include <stdexcept>

#include "opm/error.hpp"

namespace opm {

MeanTime::MeanTime(Rational value) : value_(std::move(value)) {
  if (*value_ <= 0) throw std::invalid_argument("mean time must be positive");
}

const Rational& MeanTime::value() const {
  if (!value_) throw std::logic_error("mean time is infinite");
  return *value_;
}

Rate::Rate(Rational value) : value_(std::move(value)) {
  if (value_ < 0) throw std::invalid_argument("rate must be nonnegative");
}

std::string to_string(const MeanTime& t) {
  return t.is_infinite() ? std::string("inf") : to_string(t.value());
}

Rate invert(const MeanTime& t) {
  if (t.is_infinite()) return Rate(0);
  return Rate(1 / t.value());
}

MeanTime invert(const Rate& r) {
  if (r.value() == 0) return MeanTime::infinite();
  return MeanTime(1 / r.value());
}

MeanTime combine_meantime(std::span<const MeanTime> times) {
  if (times.empty()) throw std::invalid_argument("combine_meantime: empty list");
  Rational total = 0;
  for (const MeanTime& t : times) total += invert(t).value();
  return invert(Rate(total));
}

Distribution normalize(const std::vector<std::pair<std::string, Rate>>& rates) {
  Rational total = 0;
  for (const auto& [label, r] : rates) total += r.value();
  if (total == 0) throw ModelError("zero total rate");
  std::vector<std::pair<std::string, Probability>> out;
  for (const auto& [label, r] : rates) out.emplace_back(label, Probability(r.value() / total));
  return Distribution(std::move(out));
}

FailureHistory::FailureHistory(Rational start, Rational end, std::vector<Rational> timestamps)
    : start_(std::move(start)), end_(std::move(end)), timestamps_(std::move(timestamps)) {
  if (!(start_ < end_)) throw ModelError("history interval must have start < end");
  for (const Rational& t : timestamps_) {
    if (t < start_ || t > end_) {
      throw ModelError("timestamp " + to_string(t) + " outside [" + to_string(start_) + ", " +
                       to_string(end_) + "]");
    }
  }
}

MeanTime history_stats(const FailureHistory& h) {
  if (h.timestamps().empty()) return MeanTime::infinite();
  return MeanTime((h.end() - h.start()) / static_cast<long>(h.timestamps().size()));
}

FailureHistory merge(const FailureHistory& a, const FailureHistory& b) {
  if (a.start() != b.start() || a.end() != b.end()) {
    throw ModelError("merged histories must share their interval");
  }
  std::vector<Rational> ts = a.timestamps();
  ts.insert(ts.end(), b.timestamps().begin(), b.timestamps().end());
  std::sort(ts.begin(), ts.end());
  return FailureHistory(a.start(), a.end(), std::move(ts));
}

namespace {

Rate fold(const OperadPresentation& p, const Term& term, const std::string& prefix,
          const std::map<std::string, FailureHistory>& histories, ProbFunctor& out) {
  const Architecture& arch = p.generator(term.generator);
  std::vector<std::pair<std::string, Rate>> rates;
  for (const Slot& s : arch.inputs()) {
    std::string path = join_label(prefix, s.label);
    if (const Term* c = term.child(s.label)) {
      rates.emplace_back(s.label, fold(p, *c, path, histories, out));
      continue;
    }
    auto it = histories.find(path);
    if (it == histories.end()) throw ModelError("missing history for leaf " + path);
    rates.emplace_back(s.label, invert(history_stats(it->second)));
  }
  Distribution d = normalize(rates);
  if (auto existing = out.values().find(term.generator); existing != out.values().end()) {
    if (!(existing->second == d)) {
      throw ModelError("histories give generator " + term.generator + " two different distributions: " +
                       to_string(existing->second) + " and " + to_string(d));
    }
  } else {
    out.set(term.generator, d);
  }
  Rational total = 0;
  for (const auto& [label, r] : rates) total += r.value();
  return Rate(total);
}

}  // namespace

ProbFunctor pipeline_check(const OperadPresentation& p, const std::vector<Term>& terms,
                           const std::map<std::string, FailureHistory>& histories,
                           std::string name) {
  ProbFunctor out(std::move(name));
  for (const Term& t : terms) {
    leaves(p, t);  // type-checks the term
    fold(p, t, "", histories, out);
  }
  return out;
}

}  // namespace opm
