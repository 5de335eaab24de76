#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "tsw/point_set.hpp"

namespace tsw {

// Rescales nonnegative weights onto the probability simplex.
// Throws ValidationError on negative, non-finite or all-zero input.
std::vector<double> normalize(std::span<const double> weights);

// Weighted support points in R^d with weights on the simplex. Raw weights
// (counts, frequencies) are accepted and normalized on construction.
// Duplicate supports are kept as separate atoms.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointSet supports, std::span<const double> raw_weights);
  // Uniform weights over the supports.
  static DiscreteMeasure uniform(PointSet supports);

  const PointSet& supports() const { return supports_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return supports_.dim(); }

 private:
  PointSet supports_;
  std::vector<double> weights_;
};

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;
  bool operator==(const DiagramPoint&) const = default;
};

class PersistenceDiagram {
 public:
  PersistenceDiagram() = default;
  // Rejects non-finite coordinates (essential classes must be truncated by
  // the caller) and points below the diagonal.
  explicit PersistenceDiagram(std::vector<DiagramPoint> points);

  const std::vector<DiagramPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<DiagramPoint> points_;
};

// Orthogonal projection onto the diagonal {(a, a)}.
DiagramPoint project_diagonal(DiagramPoint p);

// Builds the pair of uniform measures over n+m points used to compare two
// diagrams: A together with B's diagonal projections, and B together with
// A's diagonal projections.
std::pair<DiscreteMeasure, DiscreteMeasure> augment_pair(
    const PersistenceDiagram& a, const PersistenceDiagram& b);

// Plain text, one "birth death" pair per line. Blank lines and lines
// starting with '#' are skipped.
PersistenceDiagram load_diagram(const std::filesystem::path& path);
PersistenceDiagram parse_diagram(std::string_view text);

// Measure files: JSON array of {"point": [...], "weight": w}. A dataset is a
// JSON array of such arrays. Dataset files of the form
// [{"label": ..., "points": [[...], ...]}, ...] are also accepted and read as
// uniform measures.
std::vector<DiscreteMeasure> load_measures(const std::filesystem::path& path);
std::vector<DiscreteMeasure> parse_measures(std::string_view json_text);
std::string dump_measures(std::span<const DiscreteMeasure> measures);

}  // namespace tsw
