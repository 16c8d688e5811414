#pragma once

namespace gyrosim {

// Spin-l degree of freedom. l may be half-integral, so it is stored as the
// integer 2l; the Hilbert space dimension is d = 2l+1.
class SpinSystem {
 public:
  explicit SpinSystem(int two_ell);

  static SpinSystem from_ell(double ell);
  static SpinSystem from_dim(int dim);

  int two_ell() const { return two_ell_; }
  double ell() const { return 0.5 * two_ell_; }
  int dim() const { return two_ell_ + 1; }

  // l(l+1), exact in double for all supported sizes.
  double casimir() const { return 0.25 * two_ell_ * (two_ell_ + 2); }

  bool operator==(const SpinSystem&) const = default;

 private:
  int two_ell_;
};

}  // namespace gyrosim
