#include "gaborlab/spark.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "gaborlab/exact.hpp"
#include "gaborlab/parallel.hpp"
#include "gaborlab/rng.hpp"

namespace gaborlab {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (unsigned)(n - k + i) / (unsigned)i;
        if (r > (unsigned __int128)UINT64_MAX) return UINT64_MAX;
    }
    return (std::uint64_t)r;
}

std::uint64_t colex_rank(const int* comb, int k) {
    std::uint64_t r = 0;
    for (int i = 0; i < k; ++i) r += binomial(comb[i], i + 1);
    return r;
}

void colex_unrank(std::uint64_t rank, int k, int* comb) {
    for (int i = k; i >= 1; --i) {
        // largest c with C(c, i) <= rank
        int c = i - 1;
        while (true) {
            std::uint64_t nxt = binomial(c + 1, i);
            if (nxt > rank || nxt == UINT64_MAX) break;
            ++c;
        }
        comb[i - 1] = c;
        rank -= binomial(c, i);
    }
}

int colex_next(int* comb, int k, int n) {
    for (int i = 0; i < k; ++i) {
        int limit = (i + 1 < k) ? comb[i + 1] : n;
        if (comb[i] + 1 < limit) {
            ++comb[i];
            for (int j = 0; j < i; ++j) comb[j] = j;
            return i;
        }
    }
    return -1;
}

int SparkReport::spark() const {
    if (!decided) throw std::logic_error("spark value undecided");
    return spark_upper;
}

namespace {

struct ColumnSet {
    int rows = 0, count = 0;
    CMat raw;                    // rows x count
    CMat unit;                   // columns normalized to unit length
    std::vector<double> norms;
};

ColumnSet build_tf_columns(const Window& f) {
    const auto& g = f.group;
    const int n = g.order();
    ColumnSet cs;
    cs.rows = n;
    cs.count = n * n;
    cs.raw = CMat(n, n * n);
    for (int x = 0; x < n; ++x)
        for (int c = 0; c < n; ++c)
            tf_shift_column(f, x, c, cs.raw.col(x * n + c));
    cs.unit = cs.raw;
    cs.norms.resize(cs.count);
    for (int j = 0; j < cs.count; ++j) {
        double nj = column_norm(cs.raw, j);
        cs.norms[j] = nj;
        if (nj > 0) {
            cplx* p = cs.unit.col(j);
            for (int r = 0; r < n; ++r) p[r] /= nj;
        }
    }
    return cs;
}

ColumnSet wrap_columns(const CMat& m) {
    ColumnSet cs;
    cs.rows = m.rows;
    cs.count = m.cols;
    cs.raw = m;
    cs.unit = m;
    cs.norms.resize(cs.count);
    for (int j = 0; j < cs.count; ++j) {
        double nj = column_norm(m, j);
        cs.norms[j] = nj;
        if (nj > 0) {
            cplx* p = cs.unit.col(j);
            for (int r = 0; r < m.rows; ++r) p[r] /= nj;
        }
    }
    return cs;
}

/// Confirmation test at the pinned thresholds, on the raw columns.
bool confirmed_dependent(const ColumnSet& cs, const int* comb, int k, bool det_mode,
                         double det_tol, double rank_tol) {
    if (det_mode) {
        CMat a(cs.rows, k);
        double norm_prod = 1;
        for (int j = 0; j < k; ++j) {
            std::copy_n(cs.raw.col(comb[j]), cs.rows, a.col(j));
            norm_prod *= cs.norms[comb[j]];
        }
        if (norm_prod == 0) return true;
        return std::abs(det_in_place(a)) <= det_tol * norm_prod;
    }
    CMat a(cs.rows, k);
    for (int j = 0; j < k; ++j) std::copy_n(cs.raw.col(comb[j]), cs.rows, a.col(j));
    return numerical_rank(a, rank_tol) < k;
}

/// Incremental modified-Gram-Schmidt evaluator over the colex enumeration.
/// Level L holds the column at combination position k-1-L, so advancing the
/// odometer at position i only rebuilds the bottom i+1 levels (amortized ~1.3
/// column updates per subset). The product of step residuals equals the
/// Hadamard-normalized |det| for k = rows and upper-bounds sigma_min for
/// k < rows; anything below a loose trigger is re-confirmed exactly at the
/// pinned thresholds before counting as a failure.
class MgsScanner {
  public:
    MgsScanner(const ColumnSet& cs, int k, bool det_mode, double det_tol, double rank_tol)
        : cs_(cs), k_(k), rows_(cs.rows), det_mode_(det_mode), det_tol_(det_tol),
          rank_tol_(rank_tol) {
        q_.resize((size_t)k * rows_);
        ratio_.resize(k);
        prod_.resize(k);
        if (det_mode_) {
            trigger_ = std::max(det_tol * 1e3, 1e-12);
        } else {
            trigger_ = std::min(1e-2, std::max(1e-6, 10.0 * rank_tol * std::pow((double)k, k / 2.0)));
        }
    }

    void push(int level, int col_index) {
        const cplx* src = cs_.unit.col(col_index);
        cplx* v = q_.data() + (size_t)level * rows_;
        std::copy_n(src, rows_, v);
        for (int l = 0; l < level; ++l) {
            const cplx* q = q_.data() + (size_t)l * rows_;
            cplx dot = 0;
            for (int r = 0; r < rows_; ++r) dot += std::conj(q[r]) * v[r];
            for (int r = 0; r < rows_; ++r) v[r] -= dot * q[r];
        }
        double nrm = 0;
        for (int r = 0; r < rows_; ++r) nrm += std::norm(v[r]);
        nrm = std::sqrt(nrm);
        ratio_[level] = nrm;
        if (nrm > 1e-290) {
            const double inv = 1.0 / nrm;
            for (int r = 0; r < rows_; ++r) v[r] *= inv;
        } else {
            std::fill_n(v, rows_, cplx{});
        }
        prod_[level] = (level ? prod_[level - 1] : 1.0) * ratio_[level];
    }

    /// Rebuild levels for combination positions pos..0.
    void rebuild_from(const int* comb, int pos) {
        for (int p = pos; p >= 0; --p) push(k_ - 1 - p, comb[p]);
    }

    bool leaf_suspicious() const { return prod_[k_ - 1] <= trigger_; }

    bool leaf_confirmed(const int* comb) const {
        return confirmed_dependent(cs_, comb, k_, det_mode_, det_tol_, rank_tol_);
    }

  private:
    const ColumnSet& cs_;
    int k_, rows_;
    bool det_mode_;
    double det_tol_, rank_tol_, trigger_;
    std::vector<cplx> q_;
    std::vector<double> ratio_;
    std::vector<double> prod_;
};

struct ScanOutcome {
    std::optional<std::uint64_t> first_fail;
    std::uint64_t covered = 0;  // leaves in [0, stop) under canonical sequential order
};

/// Scans colex ranks [0, total) over k-subsets of cs columns, in parallel
/// deterministic chunks, returning the smallest failing rank if any.
ScanOutcome scan_first_dependent(const ColumnSet& cs, int k, std::uint64_t total, int workers,
                                 bool det_mode, double det_tol, double rank_tol) {
    std::atomic<std::uint64_t> best{UINT64_MAX};
    workers = resolve_workers(workers);
    run_chunked(total, workers, [&](int, std::uint64_t begin, std::uint64_t end) {
        std::vector<int> comb(k);
        colex_unrank(begin, k, comb.data());
        MgsScanner scanner(cs, k, det_mode, det_tol, rank_tol);
        scanner.rebuild_from(comb.data(), k - 1);
        std::uint64_t rank = begin;
        std::uint64_t check_countdown = 8192;
        while (rank < end) {
            if (scanner.leaf_suspicious() && scanner.leaf_confirmed(comb.data())) {
                // First confirmed failure in this chunk; chunks are scanned
                // ascending so this is the chunk minimum.
                std::uint64_t cur = best.load(std::memory_order_relaxed);
                while (rank < cur &&
                       !best.compare_exchange_weak(cur, rank, std::memory_order_relaxed)) {
                }
                break;
            }
            ++rank;
            if (rank >= end) break;
            int pos = colex_next(comb.data(), k, cs.count);
            if (pos < 0) break;
            scanner.rebuild_from(comb.data(), pos);
            if (--check_countdown == 0) {
                check_countdown = 8192;
                if (best.load(std::memory_order_relaxed) < begin) break;
            }
        }
    });
    ScanOutcome out;
    std::uint64_t b = best.load();
    if (b != UINT64_MAX) {
        out.first_fail = b;
        out.covered = b + 1;
    } else {
        out.covered = total;
    }
    return out;
}

std::vector<int> subset_at(std::uint64_t rank, int k) {
    std::vector<int> comb(k);
    colex_unrank(rank, k, comb.data());
    return comb;
}

bool window_is_zero(const Window& f) {
    for (const cplx& z : f.values)
        if (z != cplx{}) return false;
    return true;
}

// --- exact-mode support ------------------------------------------------------

struct ExactColumns {
    std::shared_ptr<const exact::CycRing> ring;
    std::vector<std::vector<exact::CycInt>> cols;
};

ExactColumns build_exact_columns(const Window& f) {
    if (!exact::is_gaussian_integer_window(f))
        throw std::invalid_argument("exact mode requires Gaussian-integer window entries");
    ExactColumns ec;
    ec.ring = exact::CycRing::create(exact::exact_order_for(f.group));
    const int n = f.group.order();
    ec.cols.reserve((size_t)n * n);
    for (int x = 0; x < n; ++x)
        for (int c = 0; c < n; ++c)
            ec.cols.push_back(exact::exact_tf_column(ec.ring, f, x, c));
    return ec;
}

bool exact_dependent(const ExactColumns& ec, const int* comb, int k, int rows) {
    // rank < k over the cyclotomic field: every k x k minor vanishes
    std::vector<int> rowsel(k);
    for (int i = 0; i < k; ++i) rowsel[i] = i;
    std::vector<exact::CycInt> minor((size_t)k * k);
    while (true) {
        for (int c = 0; c < k; ++c)
            for (int r = 0; r < k; ++r)
                minor[(size_t)c * k + r] = ec.cols[comb[c]][rowsel[r]];
        if (!exact::det_laplace(minor, k).is_zero()) return false;
        int pos = colex_next(rowsel.data(), k, rows);
        if (pos < 0) break;
    }
    return true;
}

}  // namespace

cplx p_lambda(const Window& f, std::span<const TimeFrequencyPoint> points) {
    const int n = f.group.order();
    if ((int)points.size() != n)
        throw std::invalid_argument("p_lambda: exactly N points required");
    CMat m = gabor_matrix(f, points);
    return det_in_place(m);
}

double p_lambda_hadamard_ratio(const Window& f, std::span<const TimeFrequencyPoint> points) {
    const int n = f.group.order();
    if ((int)points.size() != n)
        throw std::invalid_argument("p_lambda: exactly N points required");
    CMat m = gabor_matrix(f, points);
    double norm_prod = 1;
    for (int j = 0; j < m.cols; ++j) norm_prod *= column_norm(m, j);
    if (norm_prod == 0) return 0;
    return std::abs(det_in_place(m)) / norm_prod;
}

SparkReport is_full_spark(const Window& f, const SparkOptions& opt) {
    if (window_is_zero(f)) throw std::invalid_argument("is_full_spark: zero window");
    const auto t0 = std::chrono::steady_clock::now();
    const int n = f.group.order();
    const int m = n * n;
    const std::uint64_t total = binomial(m, n);
    if (total > opt.budget)
        throw std::length_error("is_full_spark: C(N^2, N) exceeds the subset budget");
    SparkReport rep;
    rep.n = n;
    rep.num_points = (std::uint64_t)m;
    rep.exact = opt.exact;
    if (opt.exact) {
        ExactColumns ec = build_exact_columns(f);
        if (total > 2'000'000 || n > 6)
            throw std::length_error("is_full_spark: exact mode capped at small groups");
        std::vector<int> comb(n);
        for (int i = 0; i < n; ++i) comb[i] = i;
        std::uint64_t rank = 0;
        std::optional<std::uint64_t> fail;
        std::vector<exact::CycInt> mat((size_t)n * n);
        while (true) {
            for (int c = 0; c < n; ++c)
                for (int r = 0; r < n; ++r) mat[(size_t)c * n + r] = ec.cols[comb[c]][r];
            if (exact::det_laplace(mat, n).is_zero()) {
                fail = rank;
                break;
            }
            ++rank;
            if (colex_next(comb.data(), n, m) < 0) break;
        }
        rep.subsets_checked = fail ? *fail + 1 : total;
        if (fail) {
            rep.spark_upper = n;
            rep.witness = subset_at(*fail, n);
        } else {
            rep.spark_lower = rep.spark_upper = n + 1;
            rep.decided = true;
            rep.full_spark = true;
        }
    } else {
        ColumnSet cs = build_tf_columns(f);
        ScanOutcome sc = scan_first_dependent(cs, n, total, opt.workers, true, opt.det_rel_tol,
                                              opt.rank_ratio_tol);
        rep.subsets_checked = sc.covered;
        if (sc.first_fail) {
            rep.spark_upper = n;
            rep.witness = subset_at(*sc.first_fail, n);
        } else {
            rep.spark_lower = rep.spark_upper = n + 1;
            rep.decided = true;
            rep.full_spark = true;
        }
    }
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SparkReport spark(const Window& f, const SparkOptions& opt) {
    if (window_is_zero(f)) throw std::invalid_argument("spark: zero window");
    const auto t0 = std::chrono::steady_clock::now();
    const int n = f.group.order();
    const int m = n * n;
    SparkReport rep;
    rep.n = n;
    rep.num_points = (std::uint64_t)m;
    rep.exact = opt.exact;

    ColumnSet cs;
    ExactColumns ec;
    if (opt.exact) {
        ec = build_exact_columns(f);
        if (n > 6) throw std::length_error("spark: exact mode capped at |G| <= 6");
    } else {
        cs = build_tf_columns(f);
    }

    auto scan_level = [&](int k, std::uint64_t total) -> std::optional<std::uint64_t> {
        if (opt.exact) {
            std::vector<int> comb(k);
            for (int i = 0; i < k; ++i) comb[i] = i;
            std::uint64_t rank = 0;
            while (true) {
                if (exact_dependent(ec, comb.data(), k, n)) return rank;
                ++rank;
                if (colex_next(comb.data(), k, m) < 0) break;
            }
            rep.subsets_checked += total;
            return std::nullopt;
        }
        ScanOutcome sc = scan_first_dependent(cs, k, total, opt.workers, k == n,
                                              opt.det_rel_tol, opt.rank_ratio_tol);
        rep.subsets_checked += sc.covered;
        return sc.first_fail;
    };

    for (int k = 2; k <= n; ++k) {
        std::uint64_t total = binomial(m, k);
        if (total > opt.budget || (opt.exact && total > 2'000'000)) {
            rep.budget_exhausted = true;
            rep.spark_lower = k;
            // Upper-bound attempt: first dependent N-subset within budget.
            std::uint64_t full_total = binomial(m, n);
            std::uint64_t cap = std::min(full_total, opt.budget);
            if (!opt.exact) {
                ScanOutcome sc = scan_first_dependent(cs, n, cap, opt.workers, true,
                                                      opt.det_rel_tol, opt.rank_ratio_tol);
                rep.subsets_checked += sc.covered;
                if (sc.first_fail) {
                    rep.spark_upper = n;
                    rep.witness = subset_at(*sc.first_fail, n);
                }
            }
            rep.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return rep;
        }
        auto fail = scan_level(k, total);
        if (fail) {
            rep.subsets_checked += (opt.exact ? *fail + 1 : 0);
            rep.spark_lower = rep.spark_upper = k;
            rep.decided = true;
            rep.witness = subset_at(*fail, k);
            rep.elapsed_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return rep;
        }
        rep.spark_lower = k + 1;
    }
    rep.spark_upper = n + 1;
    rep.decided = true;
    rep.full_spark = true;
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SubsetSearchResult rank_deficient_subset_search(const CMat& m, int k, SearchStrategy strategy,
                                                const SubsetSearchOptions& opt) {
    if (k < 1 || k > m.rows)
        throw std::invalid_argument("rank_deficient_subset_search: need 1 <= k <= rows");
    SubsetSearchResult res;
    if (strategy == SearchStrategy::exhaustive) {
        ColumnSet cs = wrap_columns(m);
        std::uint64_t total = binomial(m.cols, k);
        std::uint64_t cap = std::min(total, opt.budget);
        ScanOutcome sc = scan_first_dependent(cs, k, cap, opt.workers, k == m.rows,
                                              opt.det_rel_tol, opt.rank_ratio_tol);
        res.subsets_checked = sc.covered;
        res.exhausted = !sc.first_fail && cap == total;
        if (sc.first_fail) res.witness = subset_at(*sc.first_fail, k);
        return res;
    }
    if (strategy == SearchStrategy::orbit_guided) {
        if (opt.orbits.empty())
            throw std::invalid_argument("orbit_guided search requires orbit partition");
        // Deterministic DFS over orbit unions of total size k; orbits ordered
        // by smallest member.
        std::vector<std::vector<int>> orbits = opt.orbits;
        for (auto& o : orbits) std::sort(o.begin(), o.end());
        std::sort(orbits.begin(), orbits.end());
        std::vector<int> chosen;
        std::vector<int> cols;
        std::uint64_t checked = 0;
        std::optional<std::vector<int>> found;
        std::function<bool(size_t, int)> dfs = [&](size_t next, int remaining) -> bool {
            if (remaining == 0) {
                cols.clear();
                for (int oi : chosen)
                    cols.insert(cols.end(), orbits[oi].begin(), orbits[oi].end());
                std::sort(cols.begin(), cols.end());
                CMat sub(m.rows, (int)cols.size());
                for (size_t j = 0; j < cols.size(); ++j)
                    std::copy_n(m.col(cols[j]), m.rows, sub.col((int)j));
                ++checked;
                if (numerical_rank(sub, opt.rank_ratio_tol) < (int)cols.size()) {
                    found = cols;
                    return true;
                }
                return checked < opt.budget ? false : true;
            }
            for (size_t i = next; i < orbits.size(); ++i) {
                if ((int)orbits[i].size() > remaining) continue;
                chosen.push_back((int)i);
                if (dfs(i + 1, remaining - (int)orbits[i].size())) return true;
                chosen.pop_back();
            }
            return false;
        };
        dfs(0, k);
        res.witness = found;
        res.subsets_checked = checked;
        res.exhausted = false;
        return res;
    }
    // randomized
    GaussianStream gs(opt.seed);
    std::vector<int> all(m.cols);
    for (int i = 0; i < m.cols; ++i) all[i] = i;
    for (int t = 0; t < opt.trials; ++t) {
        for (int i = 0; i < k; ++i) {
            int j = i + (int)(gs.next_u64() % (std::uint64_t)(m.cols - i));
            std::swap(all[i], all[j]);
        }
        std::vector<int> pick(all.begin(), all.begin() + k);
        std::sort(pick.begin(), pick.end());
        CMat sub(m.rows, k);
        for (int j = 0; j < k; ++j) std::copy_n(m.col(pick[j]), m.rows, sub.col(j));
        ++res.subsets_checked;
        if (numerical_rank(sub, opt.rank_ratio_tol) < k) {
            res.witness = pick;
            return res;
        }
    }
    return res;
}

}  // namespace gaborlab
