#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gaborlab/gabor.hpp"
#include "gaborlab/group.hpp"

namespace gaborlab::exact {

/// Integer coefficients of the M-th cyclotomic polynomial (ascending degree).
std::vector<long long> cyclotomic_polynomial(int m);

class CycInt;

/// The ring Z[zeta_M], elements stored as integer polynomials reduced mod the
/// M-th cyclotomic polynomial. Zero tests are exact; conjugation is root
/// inversion zeta -> zeta^{M-1}.
class CycRing : public std::enable_shared_from_this<CycRing> {
  public:
    static std::shared_ptr<const CycRing> create(int order);

    int order() const { return order_; }
    int degree() const { return degree_; }

    CycInt zero() const;
    CycInt one() const;
    CycInt from_int(long long v) const;
    /// zeta^k (any integer k, reduced mod order)
    CycInt root_power(long long k) const;
    /// re + im*zeta^{M/4}; requires 4 | order.
    CycInt gaussian(long long re, long long im) const;

    const std::vector<long long>& modulus_polynomial() const { return phi_; }

  private:
    explicit CycRing(int order);
    friend class CycInt;
    int order_, degree_;
    std::vector<long long> phi_;
    // x^e mod Phi_M for e in [0, order + degree): covers products and
    // conjugation exponents.
    std::vector<std::vector<long long>> xpow_;
};

/// Element of Z[zeta_M]. Arithmetic throws std::overflow_error if any
/// coefficient leaves the int64 range.
class CycInt {
  public:
    CycInt() = default;

    const std::shared_ptr<const CycRing>& ring() const { return ring_; }
    bool is_zero() const;
    bool operator==(const CycInt& o) const;

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& o) const;
    CycInt& operator+=(const CycInt& o);
    CycInt& operator-=(const CycInt& o);

    /// Complex conjugate (zeta -> zeta^{-1}).
    CycInt conj() const;
    CycInt scaled(long long k) const;

    const std::vector<long long>& coefficients() const { return c_; }
    std::string to_string() const;

  private:
    friend class CycRing;
    CycInt(std::shared_ptr<const CycRing> ring, std::vector<long long> c);
    std::shared_ptr<const CycRing> ring_;
    std::vector<long long> c_;
};

/// Exact determinant by Laplace expansion; n <= 6 (factorial growth).
CycInt det_laplace(const std::vector<CycInt>& colmajor, int n);

/// The cyclotomic order used for exact work over a group with Gaussian-integer
/// windows: lcm(4, 2*lcm(moduli)).
int exact_order_for(const FiniteAbelianGroup& g);

/// True if every entry of f is a Gaussian integer up to 1e-12.
bool is_gaussian_integer_window(const Window& f);

/// Exact column pi(lambda) f of a Gaussian-integer window.
std::vector<CycInt> exact_tf_column(const std::shared_ptr<const CycRing>& ring, const Window& f,
                                    int shift_index, int freq_index);

/// Exact inner product sum_g xi(g) f(g-x) w(g) of a tf-shifted window against
/// the plain (unconjugated) values of w; this is <pi(lambda) f, conj(w)>.
CycInt exact_shift_bracket(const std::shared_ptr<const CycRing>& ring, const Window& f,
                           const Window& w, int shift_index, int freq_index);

}  // namespace gaborlab::exact
