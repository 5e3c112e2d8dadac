#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "shiftdg/error.hpp"

namespace shiftdg {

/// An eventually periodic sequence: a finite preamble followed by a nonempty
/// period repeated forever.
template <class T>
struct EventuallyPeriodic {
  std::vector<T> preamble;
  std::vector<T> period;

  const T& at(std::size_t n) const {
    if (n < preamble.size()) return preamble[n];
    return period[(n - preamble.size()) % period.size()];
  }

  std::size_t tail_start() const { return preamble.size(); }

  /// Shortest representation of the same infinite sequence: primitive
  /// period, and the preamble shortened by rotating the period.
  EventuallyPeriodic normalized() const {
    EventuallyPeriodic out = *this;
    const std::size_t p = out.period.size();
    for (std::size_t d = 1; d <= p; ++d) {
      if (p % d != 0) continue;
      bool ok = true;
      for (std::size_t i = d; i < p && ok; ++i) ok = out.period[i] == out.period[i - d];
      if (ok) {
        out.period.resize(d);
        break;
      }
    }
    while (!out.preamble.empty() && out.preamble.back() == out.period.back()) {
      out.preamble.pop_back();
      std::rotate(out.period.rbegin(), out.period.rbegin() + 1, out.period.rend());
    }
    return out;
  }

  friend bool operator==(const EventuallyPeriodic&, const EventuallyPeriodic&) = default;
};

/// Number of positions after which two eventually periodic sequences are both
/// periodic, and the length of a common period.
template <class T, class U>
std::pair<std::size_t, std::size_t> common_window(const EventuallyPeriodic<T>& a,
                                                  const EventuallyPeriodic<U>& b) {
  return {std::max(a.preamble.size(), b.preamble.size()),
          std::lcm(a.period.size(), b.period.size())};
}

/// True iff the two sequences agree at every position n >= from.
template <class T, class U, class Eq>
bool agree_from(const EventuallyPeriodic<T>& a, const EventuallyPeriodic<U>& b, std::size_t from,
                Eq eq) {
  auto [start, len] = common_window(a, b);
  const std::size_t stop = std::max(start, from) + len;
  for (std::size_t n = from; n < stop; ++n)
    if (!eq(a.at(n), b.at(n))) return false;
  return true;
}

template <class T>
bool same_sequence(const EventuallyPeriodic<T>& a, const EventuallyPeriodic<T>& b) {
  return agree_from(a, b, 0, [](const T& x, const T& y) { return x == y; });
}

template <class T, class F>
auto map_sequence(const EventuallyPeriodic<T>& s, F f) {
  using R = decltype(f(s.period.front()));
  EventuallyPeriodic<R> out;
  out.preamble.reserve(s.preamble.size());
  out.period.reserve(s.period.size());
  for (const T& x : s.preamble) out.preamble.push_back(f(x));
  for (const T& x : s.period) out.period.push_back(f(x));
  return out;
}

}  // namespace shiftdg
