#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "rng.hpp"

namespace creditdiv::corrmat {

enum class Regime { Low, High };

const char* regime_name(Regime r);
std::optional<Regime> parse_regime(const std::string& s);

// Magnitude band for off-diagonal entries. A point band (rho_min == rho_max)
// is allowed and disables the noise stage.
struct NoiseBand {
    double rho_min;
    double rho_max;
    Regime regime;

    NoiseBand(double lo, double hi, Regime r);
    static NoiseBand low() { return NoiseBand(0.1, 0.4, Regime::Low); }
    static NoiseBand high() { return NoiseBand(0.8, 0.99, Regime::High); }

    double midpoint() const { return 0.5 * (rho_min + rho_max); }
    double half_width() const { return 0.5 * (rho_max - rho_min); }
};

struct SignPattern {
    std::vector<int> signs; // entries are +1 or -1

    static SignPattern all_positive(std::size_t dim);
    static SignPattern random(std::size_t dim, Rng& rng);
};

// Symmetric positive definite matrix with exact unit diagonal whose
// off-diagonal magnitudes sit in a signed band.
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(SquareMatrix m);

    std::size_t dim() const { return m_.dim(); }
    double entry(std::size_t i, std::size_t j) const { return m_.at(i, j); }
    const SquareMatrix& matrix() const { return m_; }

private:
    SquareMatrix m_;
};

// One-factor Gram base: every off-diagonal equals the band midpoint, so the
// spectrum is {1 - mid (x dim-1), 1 + (dim-1) mid} and the matrix is PD by
// construction. Deterministic.
CorrelationMatrix generate_base_matrix(std::size_t dim, const NoiseBand& band);

// Hardin-style PD-preserving perturbation: delta_ij = eps * <q_i, q_j> with
// q_i random unit vectors in R^noise_dim. Requires eps < lambda_min(base);
// entries leaving the band by more than a rounding tolerance raise
// band_infeasible naming the entry, otherwise they are clamped exactly onto
// the band edge.
CorrelationMatrix apply_banded_noise(const CorrelationMatrix& base, const NoiseBand& band, Rng& rng,
                                     double epsilon, std::size_t noise_dim = 3);

// Variant that measures lambda_min(base) numerically and picks a safe
// epsilon = min(distance to band edges, 0.95 * lambda_min).
CorrelationMatrix apply_banded_noise(const CorrelationMatrix& base, const NoiseBand& band, Rng& rng);

// Conjugation by diag(signs): entry(i,j) -> signs[i]*signs[j]*entry(i,j).
// Spectrum-preserving.
CorrelationMatrix apply_sign_pattern(const CorrelationMatrix& s, const SignPattern& pattern);

// Full pipeline: midpoint base -> banded noise (eps from the closed-form
// base spectrum) -> random sign conjugation.
CorrelationMatrix generate_correlation_matrix(std::size_t dim, const NoiseBand& band, Rng& rng,
                                              std::size_t noise_dim = 3);

// Row-major CSV dump, 17 significant digits.
std::string to_csv(const CorrelationMatrix& m);

} // namespace creditdiv::corrmat
