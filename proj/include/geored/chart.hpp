#pragma once

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "geored/errors.hpp"

namespace geored {

// Open sampling interval for one coordinate. Endpoints are excluded so a
// chart can butt against a coordinate singularity (r = 0, sin(theta) = 0)
// without ever sampling it.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// A coordinate chart: n distinct coordinate names plus a per-coordinate
// open box on which all field expressions must be defined.
class Chart {
public:
  Chart(std::vector<std::string> coords, std::vector<Interval> domain)
      : coords_(std::move(coords)), domain_(std::move(domain)) {
    if (coords_.empty()) throw InvalidArgument("chart needs at least one coordinate");
    if (coords_.size() != domain_.size())
      throw InvalidArgument("chart: one domain interval per coordinate required");
    for (const auto& c : coords_) {
      if (!valid_identifier(c)) throw InvalidArgument("chart: invalid coordinate name '" + c + "'");
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      for (std::size_t j = i + 1; j < coords_.size(); ++j) {
        if (coords_[i] == coords_[j])
          throw InvalidArgument("chart: duplicate coordinate '" + coords_[i] + "'");
      }
      if (!(domain_[i].lo < domain_[i].hi))
        throw InvalidArgument("chart: empty domain interval for '" + coords_[i] + "'");
    }
  }

  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<Interval>& domain() const { return domain_; }

  bool has_coord(const std::string& name) const {
    for (const auto& c : coords_)
      if (c == name) return true;
    return false;
  }

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return static_cast<int>(i);
    throw InvalidArgument("chart has no coordinate '" + name + "'");
  }

  friend bool operator==(const Chart& a, const Chart& b) {
    if (a.coords_ != b.coords_) return false;
    for (std::size_t i = 0; i < a.domain_.size(); ++i) {
      if (a.domain_[i].lo != b.domain_[i].lo || a.domain_[i].hi != b.domain_[i].hi) return false;
    }
    return true;
  }
  friend bool operator!=(const Chart& a, const Chart& b) { return !(a == b); }

  static bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    const unsigned char c0 = static_cast<unsigned char>(s[0]);
    if (!std::isalpha(c0) && s[0] != '_') return false;
    for (char ch : s) {
      const unsigned char c = static_cast<unsigned char>(ch);
      if (!std::isalnum(c) && ch != '_') return false;
    }
    return true;
  }

private:
  std::vector<std::string> coords_;
  std::vector<Interval> domain_;
};

inline void require_same_chart(const Chart& a, const Chart& b, const char* what) {
  if (a != b) throw ChartMismatch(std::string(what) + ": objects live on different charts");
}

}  // namespace geored
