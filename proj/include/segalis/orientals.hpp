#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "segalis/complexes.hpp"

namespace segalis {

/// Result of the surface computation for K inside C([n],d).
///
/// The d-simplices are peeled from the top in decreasing epsilon order; each
/// peel removes the faces lying strictly inside its upper hemisphere. What
/// remains must embed in R^{d-1} and is the lower surface; replaying the
/// stack from the bottom yields the upper surface.
struct SurfaceAnalysis {
  bool admissible = false;
  std::string reason;
  Complex lower;
  Complex upper;
  std::vector<Simplex> stacking;  // d-simplices, bottom first
};

SurfaceAnalysis analyze_surfaces(const Complex& K, int d);

bool is_d_admissible(const Complex& K, int d);
/// d-admissible with admissible surfaces, recursively down to a single vertex.
bool is_admissible(const Complex& K, int d);

struct Surfaces {
  Complex lower;
  Complex upper;
};
/// Throws NotAdmissible unless K is d-admissible.
Surfaces surfaces(const Complex& K, int d);

/// Faces of I lying in its upper hemisphere but not its lower one, I included.
std::vector<Simplex> upper_interior_faces(Simplex I);
std::vector<Simplex> lower_interior_faces(Simplex I);

/// A cell of the oriental in G_dim: an admissible complex with its chain of
/// sources and targets. Cells of lower geometric dimension are identities.
class AdmissibleCell {
 public:
  /// Throws NotAdmissible.
  AdmissibleCell(Complex K, int dim);

  const Complex& complex() const noexcept { return complex_; }
  int dim() const noexcept { return dim_; }
  int ambient_n() const noexcept { return complex_.ambient_n(); }
  /// s_k for k < dim; the complex itself for k >= dim.
  const Complex& source(int k) const;
  const Complex& target(int k) const;
  const Complex& lower() const { return source(dim_ - 1); }
  const Complex& upper() const { return target(dim_ - 1); }
  /// Same complex regarded in G_{dim+1}.
  AdmissibleCell promoted(int new_dim) const;
  /// Number of simplices of cardinality dim+1.
  int top_simplex_count() const;

  bool operator==(const AdmissibleCell& o) const { return dim_ == o.dim_ && complex_ == o.complex_; }
  bool operator<(const AdmissibleCell& o) const {
    return dim_ != o.dim_ ? dim_ < o.dim_ : complex_ < o.complex_;
  }

 private:
  Complex complex_;
  int dim_ = 0;
  std::vector<Complex> sources_;  // index k = level k
  std::vector<Complex> targets_;
};

/// K *_level L: requires source_level(K) == target_level(L).
AdmissibleCell compose(const AdmissibleCell& K, const AdmissibleCell& L, int level);

struct Excision {
  AdmissibleCell rest;
  Simplex top;
};
/// Removes the epsilon-maximal top simplex. Throws FlatCell when K has none.
Excision excise_top(const AdmissibleCell& K);

/// Cells with one top simplex each, bottom first; folding compose at level
/// dim-1 from the left reproduces K. Empty for a flat cell.
std::vector<AdmissibleCell> atomic_decomposition(const AdmissibleCell& K);

struct OrientalGuards {
  int max_n = 5;
};

/// All cells of G_d for C([n],d), canonically ordered.
std::vector<AdmissibleCell> cells(int n, int d, const OrientalGuards& guards = {});

struct OmegaReport {
  int n = 0;
  int max_dim = 0;
  std::size_t cells = 0;
  std::size_t globularity_checks = 0;
  std::size_t unit_checks = 0;
  std::size_t associativity_checks = 0;
  std::size_t interchange_checks = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

OmegaReport check_omega_axioms(int n, int max_dim);

nlohmann::json to_json(const AdmissibleCell& cell);
nlohmann::json to_json(const OmegaReport& report);
/// Stacking structure of G_d: an edge L -> L u I for every stacking step.
std::string cells_dot(const std::vector<AdmissibleCell>& cells);

}  // namespace segalis
