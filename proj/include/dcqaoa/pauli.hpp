#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace dcqaoa {

using complex = std::complex<double>;

/// Single-qubit Pauli letter.
enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Unit phase i^k, k in {0,1,2,3}.
class Phase {
 public:
  constexpr Phase() = default;
  constexpr explicit Phase(int exponent) : k_(((exponent % 4) + 4) % 4) {}

  static constexpr Phase one() { return Phase(0); }
  static constexpr Phase i() { return Phase(1); }
  static constexpr Phase minus_one() { return Phase(2); }
  static constexpr Phase minus_i() { return Phase(3); }

  constexpr int exponent() const { return k_; }
  complex value() const;

  constexpr Phase operator*(Phase other) const { return Phase(k_ + other.k_); }
  constexpr bool operator==(const Phase&) const = default;

 private:
  int k_ = 0;
};

/// Phase-tracked tensor product of Pauli letters on `length` qubits.
///
/// Qubit q is stored in bit q of the x/z masks: X -> x, Z -> z, Y -> x and z.
/// With phase +1 the represented operator is the plain Kronecker product of
/// the letters, which is Hermitian. Lengths above 64 are rejected.
class PauliString {
 public:
  static constexpr std::size_t kMaxLength = 64;

  PauliString() = default;
  explicit PauliString(std::size_t length);

  /// Parses letters with qubit 0 first, e.g. "ZYI" is Z0 Y1 on 3 qubits.
  static PauliString parse(std::string_view letters);
  static PauliString single(std::size_t length, std::size_t site, Pauli p);
  static PauliString pair(std::size_t length, std::size_t site_a, Pauli a,
                          std::size_t site_b, Pauli b);

  std::size_t length() const { return length_; }
  Pauli at(std::size_t site) const;
  void set(std::size_t site, Pauli p);

  Phase phase() const { return phase_; }
  void set_phase(Phase phase) { phase_ = phase; }
  PauliString without_phase() const;

  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  std::size_t weight() const;
  std::size_t y_count() const;
  bool is_diagonal() const { return x_ == 0; }

  /// Letters with qubit 0 first; the phase is not included.
  std::string letters() const;
  /// Non-identity letters in ascending site order, e.g. Z0 I1 Y2 -> "ZY".
  std::string shape() const;

  bool commutes_with(const PauliString& other) const;

  /// Ordering and equality look at the letters only, never the phase.
  bool operator<(const PauliString& other) const;
  bool same_letters(const PauliString& other) const {
    return length_ == other.length_ && x_ == other.x_ && z_ == other.z_;
  }
  bool operator==(const PauliString& other) const {
    return same_letters(other) && phase_ == other.phase_;
  }

 private:
  friend PauliString multiply(const PauliString& a, const PauliString& b);

  std::size_t length_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  Phase phase_;
};

/// Pauli group product a*b with accumulated phase.
PauliString multiply(const PauliString& a, const PauliString& b);
inline PauliString operator*(const PauliString& a, const PauliString& b) {
  return multiply(a, b);
}

/// Weighted sum of phase-free Pauli strings kept in canonical form: sorted by
/// letters, duplicates merged, terms below `kZeroTolerance` dropped. Phases of
/// incoming strings are folded into the coefficients.
class PauliSum {
 public:
  struct Term {
    complex coefficient;
    PauliString string;
  };

  static constexpr double kZeroTolerance = 1e-12;
  static constexpr double kHermitianTolerance = 1e-12;

  PauliSum() = default;
  explicit PauliSum(std::size_t length) : length_(length) {}
  PauliSum(std::size_t length, std::vector<Term> terms);

  static PauliSum from_string(const PauliString& s, complex coefficient = 1.0);
  static PauliSum identity(std::size_t length, double coefficient = 1.0);

  std::size_t length() const { return length_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// True when every imaginary part is within kHermitianTolerance.
  bool is_hermitian() const;
  /// Drops imaginary residue up to kHermitianTolerance; throws above it.
  PauliSum hermitian() const;
  bool is_diagonal() const;

  /// Splits into the I/Z-only part and the remainder.
  std::pair<PauliSum, PauliSum> split_diagonal() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(complex scale);
  friend PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
  friend PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
  friend PauliSum operator*(PauliSum a, complex s) { return a *= s; }
  friend PauliSum operator*(complex s, PauliSum a) { return a *= s; }
  friend PauliSum operator*(const PauliSum& a, const PauliSum& b);

  bool operator==(const PauliSum& other) const;

  /// One line per term: `<coeff> <letters>`. Real coefficients print as a
  /// plain number, complex ones as `(re,im)`.
  std::string to_text() const;
  static PauliSum parse_text(std::string_view text);

 private:
  void canonicalize();

  std::size_t length_ = 0;
  std::vector<Term> terms_;
};

/// Re-sorts and merges; exposed for idempotence checks.
PauliSum simplify(const PauliSum& s);

/// [a, b] = ab - ba.
PauliSum commutator(const PauliSum& a, const PauliSum& b);

/// Dense 2^L x 2^L matrix, qubit 0 as the lowest index bit. L <= 10.
Eigen::MatrixXcd to_dense(const PauliSum& s);
Eigen::MatrixXcd to_dense(const PauliString& s);

inline constexpr std::size_t kMaxDenseQubits = 10;

/// Counterdiabatic operator pool extracted from a nested-commutator
/// expansion of the adiabatic gauge potential.
struct OperatorPool {
  /// Translation-invariant patterns (see PauliString::shape), sorted.
  std::vector<std::string> shapes;
  /// Concrete phase-free strings that survived the weight cut, sorted.
  std::vector<PauliString> strings;
};

struct PoolOptions {
  int order = 2;
  /// Strings with more non-identity letters are left out of the pool.
  std::size_t max_weight = 2;
  std::vector<double> lambdas = {0.25, 0.5, 0.75};
};

/// Collects the Pauli strings of i[H,[H,...,[H, dH]]] for 1, 3, ..., 2l-1
/// nested commutators, with H = (1-l)h_mixer + l h_prob evaluated at each
/// schedule value and dH = h_prob - h_mixer.
OperatorPool agp_pool(const PauliSum& h_mixer, const PauliSum& h_prob,
                      const PoolOptions& options = {});

}  // namespace dcqaoa
