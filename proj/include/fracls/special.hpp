#pragma once

namespace fracls {

/// Euler gamma function for real z in (0, 171]. Relative error stays below
/// 1e-13 on (0, 20]. Throws DomainError for z <= 0 or NaN.
double gamma(double z);

/// 1/Γ(z) for z > -1, extended by continuity: zero at z = 0.
/// Used by the power rules where β − α may reach (-1, 0].
double reciprocal_gamma(double z);

namespace testing {
/// Corrupts one Lanczos coefficient while set; lets the validation command
/// prove it detects a broken gamma implementation.
void inject_gamma_fault(bool enabled);
} // namespace testing

} // namespace fracls
