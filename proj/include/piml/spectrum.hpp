#pragma once
// Ordered positive operator spectra with provenance.
//
// Eigenvalue lists come from two producers - the transcendental
// quantization solve (exact, 1D) and the Galerkin eigendecomposition
// (approximate, any supported config) - and are consumed by the effective
// dimension and the CSV interfaces.  Provenance records which route (and,
// for quantization, which parity branch and root index) produced each
// entry; the tail-bound formulas differ per route.

#include <string>
#include <vector>

namespace piml {

enum class EigSource {
  quant_symmetric,
  quant_antisymmetric,
  galerkin,
};

struct EigProvenance {
  EigSource source = EigSource::galerkin;
  int branch_index = 0;  // root index within the parity branch, or rank
};

std::string provenance_label(const EigProvenance& p);
EigProvenance parse_provenance(const std::string& label);

struct SpectrumParams {
  double lambda = 1.0;
  double mu = 0.0;
  double L = 1.0;
  int s = 1;
  int d = 1;
  bool known = true;  // false when read from a CSV without metadata
};

struct Spectrum {
  std::vector<double> eigenvalues;       // strictly positive, non-increasing
  std::vector<EigProvenance> provenance; // same length
  SpectrumParams params;

  std::size_t size() const { return eigenvalues.size(); }
  void validate() const;  // positivity + ordering
};

// CSV with columns m,a_m,provenance and one leading metadata comment line
// carrying the parameters needed for tail bounds.
std::string spectrum_to_csv(const Spectrum& spec);
Spectrum spectrum_from_csv(const std::string& text);

}  // namespace piml
