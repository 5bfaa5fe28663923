#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "horoct/slice.hpp"

namespace horoct {

// Exterior horocycle data: g(eta', r) for a family of sphere horocycles
// lying outside the plane x_n = 1 (2r <= 1), one complex value per
// (frequency, radius).
struct ExteriorDataset {
    enum class Provenance { SynthesizedFromF, LoadedFromFile };

    int n = 2;
    std::vector<Vec> eta_list;                 // each of length n-1
    std::vector<double> r_grid;                // increasing, 2 max(r) <= 1
    std::vector<std::vector<Complex>> g;       // [eta_index][r_index]
    Provenance provenance = Provenance::SynthesizedFromF;

    void validate() const;
    double max_magnitude() const;
};

struct SynthesisOptions {
    int u_nodes = 512;       // internal slice grid for the F interpolant
    int theta_nodes = 96;    // angle quadrature per radius
    int threads = 1;
};

// Synthesizes exterior data from f through the Fourier-slice route: f~ is
// sampled on a u-grid per frequency and the one-dimensional kernel
// integral produces g(eta', r).  (The direct route, exterior_data(), is
// quadratic in cost and serves as the independent check of this one.)
ExteriorDataset synthesize_exterior(const DecayFunction& f, std::vector<Vec> eta_list,
                                    std::vector<double> r_grid, const QuadratureSpec& q,
                                    const SynthesisOptions& opt = {});

// Axis-aligned default frequency sample with |eta'| <= eta_max.
std::vector<Vec> default_frequencies(int n, double eta_max = 8.0);

// Recovers the Fourier slice f~(eta', .) on u in (0, 2 max r] from exterior
// data by solving the assembled kernel equation.
//   n = 3: first-kind Volterra, diagonal H(0) = |S_1|.
//   n = 2: generalized Abel with alpha = 1/2.
// Refuses grids with fewer than 16 nodes.
SliceData reconstruct_slice(const ExteriorDataset& data, size_t eta_index);

// Reduction routes:
//   n = 4: one even step down to the n = 2 Abel equation (one numerical
//          s-derivative of the data; needs >= 128 nodes).
//   n = 5: diagonal-vanishing reduction with m = 2 (two derivatives).
SliceData reconstruct_slice_reduced(const ExteriorDataset& data, size_t eta_index);

// Dispatches on data.n in {2, 3, 4, 5}.
SliceData reconstruct(const ExteriorDataset& data, size_t eta_index);

struct SupportReport {
    double max_data_magnitude = 0.0;    // forward side: max |f^| over the family
    double max_slice_magnitude = 0.0;   // inverse side: max |reconstructed f~|
    std::vector<double> per_frequency_max;
    double data_tolerance = 1e-8;
    double slice_tolerance = 1e-6;
    bool consistent_with_zero = false;
};

struct VerifySupportOptions {
    double data_tolerance = 1e-8;
    double slice_tolerance = 1e-6;
    int contact_samples = 9;     // forward family contacts per axis pattern
    int radius_samples = 8;
    double eta_max = 4.0;
    SynthesisOptions synthesis;
};

// Desk-scale check of the support theorem for f supported in
// {x_n >= 1 + delta}: (i) the forward transform vanishes on the exterior
// family 2r <= 1, and (ii) reconstruction from the (numerically zero)
// synthesized data returns zero slices.  The support claim is spot-checked
// by sampling below height 1 + delta/2 and violations are input errors.
SupportReport verify_support(const DecayFunction& f, double delta, const QuadratureSpec& q,
                             const VerifySupportOptions& opt = {});

// Plain-text dataset serialization (17 significant digits).
void write_dataset(std::ostream& os, const ExteriorDataset& d);
void write_dataset_file(const std::string& path, const ExteriorDataset& d);
ExteriorDataset read_dataset(std::istream& is);
ExteriorDataset read_dataset_file(const std::string& path);

}  // namespace horoct
