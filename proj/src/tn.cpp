#include "signreg/tn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "signreg/errors.hpp"

namespace signreg {

namespace {

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// determinant of a dense k x k matrix by LU with partial pivoting
MinorValue lu_determinant(std::vector<double> a, int k) {
    MinorValue mv;
    double det = 1.0;
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int i = col + 1; i < k; ++i)
            if (std::abs(a[i * k + col]) > std::abs(a[piv * k + col])) piv = i;
        if (piv != col) {
            for (int j = 0; j < k; ++j) std::swap(a[col * k + j], a[piv * k + j]);
            det = -det;
        }
        double d = a[col * k + col];
        pmax = std::max(pmax, std::abs(d));
        pmin = std::min(pmin, std::abs(d));
        if (d == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
        det *= d;
        for (int i = col + 1; i < k; ++i) {
            double f = a[i * k + col] / d;
            for (int j = col; j < k; ++j) a[i * k + j] -= f * a[col * k + j];
        }
    }
    mv.value = det;
    mv.condition_estimate = pmin > 0.0 ? pmax / pmin : std::numeric_limits<double>::infinity();
    return mv;
}

bool next_combination(std::vector<int>& c, int n) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> random_combination(int n, int k, std::mt19937_64& rng) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(n - i));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> c(pool.begin(), pool.begin() + k);
    std::sort(c.begin(), c.end());
    return c;
}

}  // namespace

MinorValue compound_minor(const GreenKernel& kernel, const MinorSelection& sel) {
    const int k = static_cast<int>(sel.rows.size());
    if (k == 0 || sel.cols.size() != sel.rows.size())
        throw Error("minor selection must have equal, nonzero lengths");
    for (int i = 1; i < k; ++i)
        if (sel.rows[i] <= sel.rows[i - 1] || sel.cols[i] <= sel.cols[i - 1])
            throw Error("minor selection indices must be strictly increasing");
    std::vector<double> a(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) a[i * k + j] = kernel.values[sel.rows[i]][sel.cols[j]];
    return lu_determinant(std::move(a), k);
}

namespace {

// tol_rel times the product of row maxima: determinant roundoff scales with
// the entry magnitudes
double minor_tolerance(const GreenKernel& kernel, const MinorSelection& sel, double tol_rel) {
    double p = 1.0;
    for (int i : sel.rows) {
        double rmax = 0.0;
        for (int j : sel.cols) rmax = std::max(rmax, std::abs(kernel.values[i][j]));
        p *= std::max(rmax, 1e-300);
    }
    return tol_rel * p;
}

}  // namespace

bool TNReport::any_violation() const {
    for (const auto& [order, st] : orders)
        if (!st.violations.empty()) return true;
    return false;
}

TNReport tn_report(const GreenKernel& kernel, int max_order, double tol_rel,
                   std::uint64_t sample_seed, long long sample_count) {
    const int nt = static_cast<int>(kernel.t_grid.size());
    const int ns = static_cast<int>(kernel.s_grid.size());
    if (max_order > std::min(nt, ns)) throw Error("tn_report: order exceeds grid size");

    TNReport rep;
    rep.max_order = max_order;
    rep.tol_rel = tol_rel;
    rep.sample_seed = sample_seed;
    const long long budget = binomial(14, 4);  // exhaustive cap per index side

    for (int order = 1; order <= max_order; ++order) {
        TNOrderStats st;
        st.min_minor = std::numeric_limits<double>::infinity();
        st.min_diagonal = std::numeric_limits<double>::quiet_NaN();
        const bool diag_possible = nt == ns;
        bool exhaustive = binomial(nt, order) <= budget && binomial(ns, order) <= budget;

        auto visit = [&](const MinorSelection& sel) {
            MinorValue mv = compound_minor(kernel, sel);
            ++st.checked;
            if (mv.value < st.min_minor) {
                st.min_minor = mv.value;
                st.argmin = sel;
            }
            if (diag_possible && sel.rows == sel.cols) {
                if (std::isnan(st.min_diagonal) || mv.value < st.min_diagonal)
                    st.min_diagonal = mv.value;
            }
            if (mv.value < -minor_tolerance(kernel, sel, tol_rel) &&
                st.violations.size() < 64)
                st.violations.push_back({sel.rows, sel.cols, mv.value});
        };

        if (exhaustive) {
            std::vector<int> rows(order);
            for (int i = 0; i < order; ++i) rows[i] = i;
            do {
                std::vector<int> cols(order);
                for (int i = 0; i < order; ++i) cols[i] = i;
                do {
                    visit({rows, cols});
                } while (next_combination(cols, ns));
            } while (next_combination(rows, nt));
        } else {
            rep.exhaustive = false;
            rep.sample_count = sample_count;
            std::mt19937_64 rng(sample_seed + static_cast<std::uint64_t>(order));
            for (long long it = 0; it < sample_count; ++it)
                visit({random_combination(nt, order, rng),
                       random_combination(ns, order, rng)});
            if (diag_possible) {
                // diagonal minors sampled separately so the diagonal verdict
                // is always populated
                for (long long it = 0; it < sample_count / 4; ++it) {
                    auto rows = random_combination(nt, order, rng);
                    visit({rows, rows});
                }
            }
        }
        rep.orders.emplace(order, std::move(st));
    }
    return rep;
}

}  // namespace signreg
