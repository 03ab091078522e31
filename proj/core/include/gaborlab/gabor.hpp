#pragma once

#include <span>
#include <vector>

#include "gaborlab/group.hpp"
#include "gaborlab/linalg.hpp"

namespace gaborlab {

/// A complex vector indexed by the elements of a finite abelian group.
struct Window {
    FiniteAbelianGroup group;
    std::vector<cplx> values;

    Window(FiniteAbelianGroup g, std::vector<cplx> v);
    cplx& operator[](int i) { return values[i]; }
    const cplx& operator[](int i) const { return values[i]; }
    int size() const { return (int)values.size(); }
};

Window delta_window(const FiniteAbelianGroup& g, int at = 0);
Window constant_window(const FiniteAbelianGroup& g, cplx value = 1.0);

/// A point lambda = (x, xi) of G x G^.
struct TimeFrequencyPoint {
    GroupElement shift;
    Character freq;
    bool operator==(const TimeFrequencyPoint&) const = default;
};

/// G x G^ enumeration order is shift-major, then frequency, both
/// lexicographic; every matrix and STFT table in the toolkit uses it.
std::vector<TimeFrequencyPoint> all_tf_points(const FiniteAbelianGroup& g);
int tf_point_index(const FiniteAbelianGroup& g, const TimeFrequencyPoint& p);
TimeFrequencyPoint tf_point_at(const FiniteAbelianGroup& g, int index);

/// T_x f(g) = f(g - x)
Window translate(const Window& f, const GroupElement& x);
/// M_xi f(g) = xi(g) f(g)
Window modulate(const Window& f, const Character& xi);
/// pi(lambda) = M_xi T_x
Window tf_shift(const Window& f, const TimeFrequencyPoint& lambda);

/// A window together with an ordered set of time-frequency points.
struct GaborSystem {
    Window window;
    std::vector<TimeFrequencyPoint> points;
    GaborSystem(Window w, std::vector<TimeFrequencyPoint> pts);  // validates
};

/// N x |points| matrix whose j-th column is pi(points[j]) f.
/// Throws std::invalid_argument on duplicate points.
CMat gabor_matrix(const Window& f, std::span<const TimeFrequencyPoint> points);

/// Writes pi(lambda) f into out (length N); index-table fast path.
void tf_shift_column(const Window& f, int shift_index, int freq_index, cplx* out);

/// Unnormalized Fourier transform: fhat(xi) = sum_g xi(g) f(g), indexed by
/// character order. For cyclic groups this is W_N = (omega^{ij}).
Window fourier(const Window& f);

/// Short-time Fourier transform table: entry at (x, xi) is
/// sum_g xi(g) phi(g-x) f(g), in shift-major order of G x G^.
std::vector<cplx> stft(const Window& phi, const Window& f);

/// Entries with |v_i| > rel_tol * max_j |v_j|; zero vector counts 0.
int support_count(std::span<const cplx> v, double rel_tol = 1e-9);
int support_count(const Window& f, double rel_tol = 1e-9);
/// True if some entry has relative magnitude inside (lo, hi): the support
/// count is then not decisive at the default threshold.
bool has_borderline_entries(std::span<const cplx> v, double lo = 1e-12, double hi = 1e-6);

/// Displacement operator over Z/nZ, n odd:
/// D_lambda = tau^{l1*l2} T^{l1} M^{l2} with tau = -e^{i*pi/n}.
CMat displacement(long long n, long long l1, long long l2);

}  // namespace gaborlab
