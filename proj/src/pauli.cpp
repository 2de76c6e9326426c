#include "dcqaoa/pauli.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dcqaoa {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

// Phase exponent picked up by the single-site product a*b.
int site_product_phase(Pauli a, Pauli b) {
  if (a == Pauli::I || b == Pauli::I || a == b) return 0;
  // XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  return ((ib - ia + 3) % 3 == 1) ? 1 : 3;
}

Eigen::Matrix2cd letter_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I:
      m << 1, 0, 0, 1;
      break;
    case Pauli::X:
      m << 0, 1, 1, 0;
      break;
    case Pauli::Y:
      m << 0, complex(0, -1), complex(0, 1), 0;
      break;
    case Pauli::Z:
      m << 1, 0, 0, -1;
      break;
  }
  return m;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("PauliSum text: bad number '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw std::invalid_argument(std::string("not a Pauli letter: '") + c +
                                  "'");
  }
}

complex Phase::value() const {
  static const complex kValues[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kValues[k_];
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(std::size_t length) : length_(length) {
  if (length > kMaxLength) {
    throw std::invalid_argument("PauliString: length " +
                                std::to_string(length) + " exceeds 64");
  }
}

PauliString PauliString::parse(std::string_view letters) {
  PauliString s(letters.size());
  for (std::size_t q = 0; q < letters.size(); ++q) {
    s.set(q, pauli_from_char(letters[q]));
  }
  return s;
}

PauliString PauliString::single(std::size_t length, std::size_t site,
                                Pauli p) {
  PauliString s(length);
  s.set(site, p);
  return s;
}

PauliString PauliString::pair(std::size_t length, std::size_t site_a, Pauli a,
                              std::size_t site_b, Pauli b) {
  if (site_a == site_b) {
    throw std::invalid_argument("PauliString::pair: sites coincide");
  }
  PauliString s(length);
  s.set(site_a, a);
  s.set(site_b, b);
  return s;
}

Pauli PauliString::at(std::size_t site) const {
  if (site >= length_) throw std::out_of_range("PauliString::at");
  const bool x = (x_ >> site) & 1U;
  const bool z = (z_ >> site) & 1U;
  if (x && z) return Pauli::Y;
  if (x) return Pauli::X;
  if (z) return Pauli::Z;
  return Pauli::I;
}

void PauliString::set(std::size_t site, Pauli p) {
  if (site >= length_) throw std::out_of_range("PauliString::set");
  const std::uint64_t bit = std::uint64_t{1} << site;
  x_ &= ~bit;
  z_ &= ~bit;
  if (p == Pauli::X || p == Pauli::Y) x_ |= bit;
  if (p == Pauli::Z || p == Pauli::Y) z_ |= bit;
}

PauliString PauliString::without_phase() const {
  PauliString s = *this;
  s.phase_ = Phase::one();
  return s;
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(std::popcount(x_ | z_));
}

std::size_t PauliString::y_count() const {
  return static_cast<std::size_t>(std::popcount(x_ & z_));
}

std::string PauliString::letters() const {
  std::string out(length_, 'I');
  for (std::size_t q = 0; q < length_; ++q) out[q] = to_char(at(q));
  return out;
}

std::string PauliString::shape() const {
  std::string out;
  for (std::size_t q = 0; q < length_; ++q) {
    if (const Pauli p = at(q); p != Pauli::I) out.push_back(to_char(p));
  }
  return out;
}

bool PauliString::commutes_with(const PauliString& other) const {
  require_same_length(length_, other.length_, "commutes_with");
  // Symplectic form: count sites where the letters anticommute.
  const auto clash = (x_ & other.z_) ^ (z_ & other.x_);
  return std::popcount(clash) % 2 == 0;
}

bool PauliString::operator<(const PauliString& other) const {
  if (length_ != other.length_) return length_ < other.length_;
  for (std::size_t q = 0; q < length_; ++q) {
    const auto a = at(q);
    const auto b = other.at(q);
    if (a != b) return a < b;
  }
  return false;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  require_same_length(a.length(), b.length(), "multiply");
  int k = a.phase().exponent() + b.phase().exponent();
  const std::uint64_t support = (a.x_ | a.z_) & (b.x_ | b.z_);
  for (std::size_t q = 0; q < a.length(); ++q) {
    if ((support >> q) & 1U) k += site_product_phase(a.at(q), b.at(q));
  }
  PauliString out(a.length());
  out.x_ = a.x_ ^ b.x_;
  out.z_ = a.z_ ^ b.z_;
  out.phase_ = Phase(k);
  return out;
}

// ---------------------------------------------------------------------------
// PauliSum

PauliSum::PauliSum(std::size_t length, std::vector<Term> terms)
    : length_(length), terms_(std::move(terms)) {
  canonicalize();
}

PauliSum PauliSum::from_string(const PauliString& s, complex coefficient) {
  return PauliSum(s.length(), {{coefficient, s}});
}

PauliSum PauliSum::identity(std::size_t length, double coefficient) {
  return PauliSum(length, {{coefficient, PauliString(length)}});
}

void PauliSum::canonicalize() {
  for (auto& t : terms_) {
    require_same_length(length_, t.string.length(), "PauliSum");
    t.coefficient *= t.string.phase().value();
    t.string.set_phase(Phase::one());
  }
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.string < b.string; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().string.same_letters(t.string)) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) {
    return std::abs(t.coefficient) <= kZeroTolerance;
  });
  terms_ = std::move(merged);
}

bool PauliSum::is_hermitian() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return std::abs(t.coefficient.imag()) <= kHermitianTolerance;
  });
}

PauliSum PauliSum::hermitian() const {
  PauliSum out = *this;
  for (auto& t : out.terms_) {
    if (std::abs(t.coefficient.imag()) > kHermitianTolerance) {
      throw std::domain_error("PauliSum: imaginary coefficient " +
                              format_double(t.coefficient.imag()) + " on " +
                              t.string.letters() + " in a Hermitian context");
    }
    t.coefficient = t.coefficient.real();
  }
  out.canonicalize();
  return out;
}

bool PauliSum::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.string.is_diagonal(); });
}

std::pair<PauliSum, PauliSum> PauliSum::split_diagonal() const {
  PauliSum diag(length_), rest(length_);
  for (const auto& t : terms_) {
    (t.string.is_diagonal() ? diag : rest).terms_.push_back(t);
  }
  return {diag, rest};
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (length_ == 0 && terms_.empty()) length_ = other.length_;
  require_same_length(length_, other.length_, "PauliSum +");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  return *this += other * complex(-1.0);
}

PauliSum& PauliSum::operator*=(complex scale) {
  for (auto& t : terms_) t.coefficient *= scale;
  canonicalize();
  return *this;
}

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  require_same_length(a.length(), b.length(), "PauliSum *");
  std::vector<PauliSum::Term> terms;
  terms.reserve(a.size() * b.size());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      terms.push_back(
          {ta.coefficient * tb.coefficient, multiply(ta.string, tb.string)});
    }
  }
  return PauliSum(a.length(), std::move(terms));
}

bool PauliSum::operator==(const PauliSum& other) const {
  if (length_ != other.length_ || terms_.size() != other.terms_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    if (!terms_[k].string.same_letters(other.terms_[k].string) ||
        terms_[k].coefficient != other.terms_[k].coefficient) {
      return false;
    }
  }
  return true;
}

std::string PauliSum::to_text() const {
  std::string out;
  for (const auto& t : terms_) {
    const auto c = t.coefficient;
    if (c.imag() == 0.0) {
      out += format_double(c.real());
    } else {
      out += "(" + format_double(c.real()) + "," + format_double(c.imag()) +
             ")";
    }
    out += ' ';
    out += t.string.letters();
    out += '\n';
  }
  return out;
}

PauliSum PauliSum::parse_text(std::string_view text) {
  std::vector<Term> terms;
  std::size_t length = 0;
  bool have_length = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string coeff_tok, letters;
    if (!(fields >> coeff_tok >> letters)) {
      throw std::invalid_argument("PauliSum text: malformed line '" + line +
                                  "'");
    }
    complex c;
    if (coeff_tok.front() == '(') {
      const auto comma = coeff_tok.find(',');
      if (comma == std::string::npos || coeff_tok.back() != ')') {
        throw std::invalid_argument("PauliSum text: bad complex '" +
                                    coeff_tok + "'");
      }
      c = {parse_double(std::string_view(coeff_tok).substr(1, comma - 1)),
           parse_double(std::string_view(coeff_tok)
                            .substr(comma + 1, coeff_tok.size() - comma - 2))};
    } else {
      c = parse_double(coeff_tok);
    }
    auto s = PauliString::parse(letters);
    if (have_length) {
      require_same_length(length, s.length(), "PauliSum text");
    }
    length = s.length();
    have_length = true;
    terms.push_back({c, s});
  }
  return PauliSum(length, std::move(terms));
}

PauliSum simplify(const PauliSum& s) { return PauliSum(s.length(), s.terms()); }

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  require_same_length(a.length(), b.length(), "commutator");
  std::vector<PauliSum::Term> terms;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (ta.string.commutes_with(tb.string)) continue;
      terms.push_back({2.0 * ta.coefficient * tb.coefficient,
                       multiply(ta.string, tb.string)});
    }
  }
  return PauliSum(a.length(), std::move(terms));
}

Eigen::MatrixXcd to_dense(const PauliString& s) {
  if (s.length() > kMaxDenseQubits) {
    throw std::invalid_argument("to_dense: " + std::to_string(s.length()) +
                                " qubits exceeds the dense limit of 10");
  }
  // Qubit 0 is the lowest bit, so it is the rightmost Kronecker factor.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < s.length(); ++q) {
    const Eigen::Matrix2cd f = letter_matrix(s.at(q));
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        next.block(r * m.rows(), c * m.cols(), m.rows(), m.cols()) =
            f(r, c) * m;
      }
    }
    m = std::move(next);
  }
  return s.phase().value() * m;
}

Eigen::MatrixXcd to_dense(const PauliSum& s) {
  if (s.length() > kMaxDenseQubits) {
    throw std::invalid_argument("to_dense: " + std::to_string(s.length()) +
                                " qubits exceeds the dense limit of 10");
  }
  const Eigen::Index dim = Eigen::Index{1} << s.length();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : s.terms()) m += t.coefficient * to_dense(t.string);
  return m;
}

// ---------------------------------------------------------------------------
// Operator pool

OperatorPool agp_pool(const PauliSum& h_mixer, const PauliSum& h_prob,
                      const PoolOptions& options) {
  require_same_length(h_mixer.length(), h_prob.length(), "agp_pool");
  if (options.order < 1) {
    throw std::invalid_argument("agp_pool: order must be >= 1");
  }
  const PauliSum derivative = h_prob - h_mixer;
  std::set<PauliString> found;
  if (!derivative.empty()) {
    for (const double lambda : options.lambdas) {
      const PauliSum h_a = h_mixer * complex(1.0 - lambda) +
                           h_prob * complex(lambda);
      PauliSum nested = derivative;
      for (int k = 1; k <= options.order; ++k) {
        // 2k-1 commutators in total: one for k = 1, two more per order.
        const int extra = (k == 1) ? 1 : 2;
        for (int c = 0; c < extra; ++c) nested = commutator(h_a, nested);
        const PauliSum gauge_term = (nested * complex(0.0, 1.0)).hermitian();
        for (const auto& t : gauge_term.terms()) {
          if (t.string.weight() <= options.max_weight) found.insert(t.string);
        }
      }
    }
  }

  OperatorPool pool;
  std::set<std::string> shapes;
  for (const auto& s : found) {
    if (s.y_count() % 2 != 1) {
      throw std::logic_error("agp_pool: string " + s.letters() +
                             " has an even number of Y letters");
    }
    pool.strings.push_back(s);
    shapes.insert(s.shape());
  }
  pool.shapes.assign(shapes.begin(), shapes.end());
  return pool;
}

}  // namespace dcqaoa
