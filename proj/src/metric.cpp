#include "snacert/metric.hpp"

#include "snacert/error.hpp"
#include "snacert/json_util.hpp"
#include "snacert/rng.hpp"

#include <array>
#include <set>
#include <sstream>

namespace snacert {

std::string_view to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::shape: return "shape";
    case Violation::Kind::diagonal: return "diagonal";
    case Violation::Kind::symmetry: return "symmetry";
    case Violation::Kind::positivity: return "positivity";
    case Violation::Kind::triangle: return "triangle";
  }
  return "unknown";
}

std::vector<Violation> validate(const RationalMatrix& dist) {
  std::vector<Violation> out;
  const std::size_t n = dist.size();
  if (n < 2) {
    out.push_back({Violation::Kind::shape, {}, "a pointed metric space needs at least 2 points"});
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dist[i].size() != n) {
      std::ostringstream msg;
      msg << "row " << i << " has " << dist[i].size() << " entries, expected " << n;
      out.push_back({Violation::Kind::shape, {i}, msg.str()});
    }
  }
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (!dist[i][i].is_zero()) {
      out.push_back({Violation::Kind::diagonal, {i, i}, "d(" + std::to_string(i) + "," + std::to_string(i) + ") = " + dist[i][i].str() + " != 0"});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[i][j] != dist[j][i]) {
        std::ostringstream msg;
        msg << "d(" << i << "," << j << ") = " << dist[i][j] << " != d(" << j << "," << i << ") = " << dist[j][i];
        out.push_back({Violation::Kind::symmetry, {i, j}, msg.str()});
      }
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        if (dist[a][b].sign() <= 0) {
          std::ostringstream msg;
          msg << "d(" << a << "," << b << ") = " << dist[a][b] << " is not positive";
          out.push_back({Violation::Kind::positivity, {a, b}, msg.str()});
        }
      }
    }
  }
  // Reported as (i, j, k) with d(i,k) > d(i,j) + d(j,k).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (i == k) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const Rational via = dist[i][j] + dist[j][k];
        if (dist[i][k] > via) {
          std::ostringstream msg;
          msg << "triangle inequality fails for (" << i << "," << j << "," << k << "): d(" << i << "," << k
              << ") = " << dist[i][k] << " > d(" << i << "," << j << ") + d(" << j << "," << k << ") = " << via;
          out.push_back({Violation::Kind::triangle, {i, j, k}, msg.str()});
        }
      }
    }
  }
  return out;
}

PointedMetricSpace::PointedMetricSpace(RationalMatrix dist, std::vector<std::string> labels)
    : dist_(std::move(dist)), labels_(std::move(labels)) {
  const auto violations = validate(dist_);
  if (!violations.empty()) throw InputError("metric violation: " + violations.front().message);
  if (!labels_.empty() && labels_.size() != dist_.size()) {
    throw InputError("label count " + std::to_string(labels_.size()) + " does not match point count " + std::to_string(dist_.size()));
  }
}

PointedMetricSpace PointedMetricSpace::equilateral(std::size_t n, const Rational& d) {
  RationalMatrix m(n, RationalVector(n, d));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
  return PointedMetricSpace(std::move(m));
}

PointedMetricSpace PointedMetricSpace::scaled(const Rational& c) const {
  if (c.sign() <= 0) throw PreconditionError("scale factor must be positive");
  RationalMatrix m = dist_;
  for (auto& row : m) {
    for (auto& x : row) x *= c;
  }
  return PointedMetricSpace(std::move(m), labels_);
}

Subspace restrict(const PointedMetricSpace& space, std::span<const std::size_t> indices) {
  if (indices.size() < 2) throw PreconditionError("restrict needs at least two indices");
  std::set<std::size_t> seen;
  for (std::size_t i : indices) {
    if (i >= space.size()) throw PreconditionError("restrict: index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw PreconditionError("restrict: duplicate index " + std::to_string(i));
  }
  RationalMatrix m(indices.size(), RationalVector(indices.size()));
  for (std::size_t a = 0; a < indices.size(); ++a) {
    for (std::size_t b = 0; b < indices.size(); ++b) m[a][b] = space(indices[a], indices[b]);
  }
  std::vector<std::string> labels;
  if (!space.labels().empty()) {
    for (std::size_t i : indices) labels.push_back(space.labels()[i]);
  }
  return Subspace{PointedMetricSpace(std::move(m), std::move(labels)),
                  std::vector<std::size_t>(indices.begin(), indices.end())};
}

PointedMetricSpace random_space(std::size_t n, std::uint64_t seed, RandomMethod method) {
  if (n < 2) throw PreconditionError("random_space needs n >= 2");
  Rng rng(seed ^ (method == RandomMethod::range ? 0x52414e4745ULL : 0x45554355ULL));
  RationalMatrix m(n, RationalVector(n));
  if (method == RandomMethod::range) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        m[i][j] = m[j][i] = Rational(64 + static_cast<long>(rng.uniform(0, 64)), 64);
      }
    }
  } else {
    std::set<std::array<long, 3>> used;
    std::vector<std::array<long, 3>> pts;
    while (pts.size() < n) {
      std::array<long, 3> p{};
      for (auto& c : p) c = static_cast<long>(rng.uniform(0, 32));
      if (used.insert(p).second) pts.push_back(p);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        long s = 0;
        for (int c = 0; c < 3; ++c) s += std::labs(pts[i][c] - pts[j][c]);
        m[i][j] = m[j][i] = Rational(s, 16);
      }
    }
  }
  return PointedMetricSpace(std::move(m));
}

PointedMetricSpace parse_space(std::string_view text) {
  using json_util::json;
  const json doc = json_util::parse_document(text);
  if (!doc.is_object() || !doc.contains("dist")) throw InputError("metric space document needs a \"dist\" matrix");
  RationalMatrix dist = json_util::to_matrix(doc.at("dist"));
  std::vector<std::string> labels;
  if (doc.contains("points")) {
    if (!doc.at("points").is_array()) throw InputError("\"points\" must be an array of labels");
    for (const auto& p : doc.at("points")) labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
  }
  return PointedMetricSpace(std::move(dist), std::move(labels));
}

std::string serialize_space(const PointedMetricSpace& space) {
  json_util::json doc;
  if (!space.labels().empty()) doc["points"] = space.labels();
  doc["dist"] = json_util::from_matrix(space.matrix());
  return doc.dump();
}

}  // namespace snacert
