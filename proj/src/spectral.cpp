#include "qwell/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qwell/errors.hpp"
#include "qwell/hash.hpp"

namespace qwell {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric tridiagonal matrix with a general off-diagonal; the parity
// blocks of a symmetric Hamiltonian need one modified coupling.
struct SymTridiag
{
    std::vector<double> d;
    std::vector<double> e;  // size n-1

    std::size_t size() const { return d.size(); }

    double norm_bound() const
    {
        double best = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
        {
            double row = std::abs(d[i]);
            if (i > 0)
                row += std::abs(e[i - 1]);
            if (i + 1 < d.size())
                row += std::abs(e[i]);
            best = std::max(best, row);
        }
        return best;
    }

    std::size_t count_below(double shift) const
    {
        double emax2 = 1.0;
        for (double v : e)
            emax2 = std::max(emax2, v * v);
        const double pivmin = std::numeric_limits<double>::min() * emax2;
        std::size_t count = 0;
        double q = d[0] - shift;
        if (std::abs(q) <= pivmin)
            q = -pivmin;
        if (q < 0.0)
            ++count;
        for (std::size_t i = 1; i < d.size(); ++i)
        {
            q = d[i] - shift - e[i - 1] * e[i - 1] / q;
            if (std::abs(q) <= pivmin)
                q = -pivmin;
            if (q < 0.0)
                ++count;
        }
        return count;
    }

    double residual(std::span<const double> v, double lambda) const
    {
        const std::size_t n = d.size();
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            double hv = (d[i] - lambda) * v[i];
            if (i > 0)
                hv += e[i - 1] * v[i - 1];
            if (i + 1 < n)
                hv += e[i] * v[i + 1];
            sum += hv * hv;
        }
        return std::sqrt(sum);
    }
};

// k-th (0-based) smallest eigenvalue by Sturm-count bisection.
double bisect_eigenvalue(const SymTridiag& t, std::size_t k, double lo, double hi, double rel_tol,
                         double abs_floor)
{
    for (int iter = 0; iter < 256; ++iter)
    {
        const double width = hi - lo;
        const double scale = std::max(std::abs(lo), std::abs(hi));
        if (width <= std::max(rel_tol * scale, abs_floor))
            break;
        const double mid = lo + 0.5 * width;
        if (mid <= lo || mid >= hi)
            break;
        if (t.count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return lo + 0.5 * (hi - lo);
}

// LU factorization with partial pivoting of (T - lambda I), LAPACK dgttrf layout.
class ShiftedLU
{
  public:
    ShiftedLU(const SymTridiag& t, double lambda, double tiny)
        : d_(t.d), du_(t.e), dl_(t.e), du2_(t.size() > 2 ? t.size() - 2 : 0, 0.0), swap_(t.size(), false)
    {
        const std::size_t n = d_.size();
        for (auto& v : d_)
            v -= lambda;
        for (std::size_t i = 0; i + 1 < n; ++i)
        {
            if (std::abs(d_[i]) >= std::abs(dl_[i]))
            {
                if (d_[i] != 0.0)
                {
                    const double fact = dl_[i] / d_[i];
                    dl_[i] = fact;
                    d_[i + 1] -= fact * du_[i];
                }
            }
            else
            {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n)
                {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swap_[i] = true;
            }
        }
        // The shift is an eigenvalue to working precision, so U is singular
        // up to rounding; perturb vanishing pivots.
        for (auto& v : d_)
        {
            if (std::abs(v) < tiny)
                v = std::signbit(v) ? -tiny : tiny;
        }
    }

    void solve(std::span<double> b) const
    {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
        {
            if (!swap_[i])
            {
                b[i + 1] -= dl_[i] * b[i];
            }
            else
            {
                const double temp = b[i] - dl_[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            }
        }
        b[n - 1] /= d_[n - 1];
        if (n > 1)
            b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t i = n >= 2 ? n - 2 : 0; i-- > 0;)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

  private:
    std::vector<double> d_, du_, dl_, du2_;
    std::vector<bool> swap_;
};

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

void scale(std::span<double> v, double f)
{
    for (auto& x : v)
        x *= f;
}

// Uniform in [-1, 1) from raw 64-bit draws; avoids implementation-defined
// distributions so starting vectors are identical across standard libraries.
double draw_symmetric(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

struct BlockPairs
{
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
    std::vector<double> residuals;
    std::vector<int> iterations;
};

// Lowest k eigenvalues of a symmetric tridiagonal block.
BlockPairs bisect_block(const SymTridiag& t, std::size_t k, const SolverOptions& opts)
{
    const std::size_t n = t.size();
    k = std::min(k, n);
    BlockPairs out;
    const double hnorm = t.norm_bound();
    const double abs_floor = 2.0 * kEps * hnorm;

    double lo = std::numeric_limits<double>::max();
    double hi = std::numeric_limits<double>::lowest();
    for (std::size_t i = 0; i < n; ++i)
    {
        double r = 0.0;
        if (i > 0)
            r += std::abs(t.e[i - 1]);
        if (i + 1 < n)
            r += std::abs(t.e[i]);
        lo = std::min(lo, t.d[i] - r);
        hi = std::max(hi, t.d[i] + r);
    }
    lo -= abs_floor + 1e-300;
    hi += abs_floor + 1e-300;

    for (std::size_t j = 0; j < k; ++j)
        out.values.push_back(bisect_eigenvalue(t, j, lo, hi, opts.bisection_rel_tol, abs_floor));
    return out;
}

// Euclidean-normalized eigenvectors for every value already in `pairs`.
void inverse_iterate(const SymTridiag& t, BlockPairs& pairs, const SolverOptions& opts, double target,
                     std::mt19937_64& rng)
{
    const std::size_t n = t.size();
    const double tiny = kEps * t.norm_bound();
    for (std::size_t j = 0; j < pairs.values.size(); ++j)
    {
        const double lambda = pairs.values[j];
        const ShiftedLU lu(t, lambda, tiny);
        std::vector<double> x(n);
        for (auto& v : x)
            v = draw_symmetric(rng);
        scale(x, 1.0 / std::sqrt(dot(x, x)));

        double res = std::numeric_limits<double>::infinity();
        int it = 0;
        while (it < opts.max_inverse_iterations)
        {
            ++it;
            lu.solve(x);
            // Two passes of classical Gram-Schmidt against converged vectors
            // keep near-degenerate multiplets from collapsing.
            for (int pass = 0; pass < 2; ++pass)
            {
                for (const auto& prev : pairs.vectors)
                {
                    const double c = dot(prev, x);
                    for (std::size_t i = 0; i < n; ++i)
                        x[i] -= c * prev[i];
                }
            }
            const double nx = std::sqrt(dot(x, x));
            if (!(nx > 0.0) || !std::isfinite(nx))
            {
                for (auto& v : x)
                    v = draw_symmetric(rng);
                scale(x, 1.0 / std::sqrt(dot(x, x)));
                continue;
            }
            scale(x, 1.0 / nx);
            res = t.residual(x, lambda);
            if (res < target)
                break;
        }
        if (!(res < target))
        {
            std::ostringstream msg;
            msg << "inverse iteration for eigenvalue " << j << " (" << lambda << " eV) stalled after " << it
                << " iterations; residual " << res << " > target " << target;
            throw ConvergenceError(msg.str(), res);
        }
        pairs.vectors.push_back(std::move(x));
        pairs.residuals.push_back(res);
        pairs.iterations.push_back(it);
    }
}

bool mirror_symmetric(std::span<const double> d)
{
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n / 2; ++i)
    {
        if (d[i] != d[n - 1 - i])
            return false;
    }
    return true;
}

struct Candidate
{
    double energy;
    std::vector<double> full;  // full-grid vector, unnormalized
    double residual;
    int iterations;
};

}  // namespace

double TridiagonalHamiltonian::norm_bound() const
{
    double dmax = 0.0;
    for (double v : diagonal)
        dmax = std::max(dmax, std::abs(v));
    return dmax + 2.0 * hopping;
}

void TridiagonalHamiltonian::apply(std::span<const double> x, std::span<double> y) const
{
    const std::size_t n = diagonal.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        double s = diagonal[i] * x[i];
        if (i > 0)
            s -= hopping * x[i - 1];
        if (i + 1 < n)
            s -= hopping * x[i + 1];
        y[i] = s;
    }
}

std::size_t TridiagonalHamiltonian::count_below(double shift) const
{
    SymTridiag t{diagonal, std::vector<double>(diagonal.size() - 1, -hopping)};
    return t.count_below(shift);
}

std::uint64_t TridiagonalHamiltonian::fingerprint() const
{
    Fnv1a h;
    h.str("qwell.hamiltonian.v1")
        .f64(grid.length())
        .u64(grid.points())
        .f64(units.hbar)
        .f64(units.hbar2_over_2me)
        .f64(units.effective_mass_ratio)
        .f64(hopping)
        .f64s(diagonal);
    return h.value();
}

TridiagonalHamiltonian assemble(std::span<const double> potential_eV, const Grid& grid, const UnitSystem& units)
{
    units.validate();
    if (potential_eV.size() != grid.points())
    {
        std::ostringstream msg;
        msg << "potential has " << potential_eV.size() << " samples but grid has " << grid.points() << " points";
        throw GridMismatchError(msg.str());
    }
    const double h = grid.spacing();
    const double t = units.kinetic_scale() / (h * h);
    TridiagonalHamiltonian out{grid, units, std::vector<double>(potential_eV.size()), t};
    for (std::size_t i = 0; i < potential_eV.size(); ++i)
        out.diagonal[i] = 2.0 * t + potential_eV[i];
    return out;
}

Wavefunction EigenSolution::state(std::size_t n) const
{
    if (n >= states.size())
        throw DomainError("eigenstate index out of range");
    return Wavefunction(grid, std::span<const double>(states[n]));
}

EigenSolution lowest_eigenpairs(const TridiagonalHamiltonian& h, std::size_t k, const SolverOptions& options)
{
    const std::size_t points = h.grid.points();
    if (k < 1 || k > points)
    {
        std::ostringstream msg;
        msg << "requested " << k << " eigenpairs; must be in [1, " << points << "]";
        throw DomainError(msg.str());
    }
    const double t = h.hopping;
    const double hnorm = h.norm_bound();
    std::mt19937_64 rng(options.seed);

    // Blocks to solve: the full matrix, or its even and odd parity halves.
    struct Block
    {
        SymTridiag matrix;
        int parity;  // 0 = no symmetry, +1 even, -1 odd
    };
    std::vector<Block> blocks;
    const bool split = options.exploit_parity && points >= 4 && mirror_symmetric(h.diagonal);
    if (!split)
    {
        blocks.push_back({SymTridiag{h.diagonal, std::vector<double>(points - 1, -t)}, 0});
    }
    else if (points % 2 == 0)
    {
        const std::size_t m = points / 2;
        SymTridiag even{std::vector<double>(h.diagonal.begin(), h.diagonal.begin() + m),
                        std::vector<double>(m - 1, -t)};
        SymTridiag odd = even;
        even.d[m - 1] -= t;
        odd.d[m - 1] += t;
        blocks.push_back({std::move(even), +1});
        blocks.push_back({std::move(odd), -1});
    }
    else
    {
        const std::size_t c = (points - 1) / 2;
        SymTridiag even{std::vector<double>(h.diagonal.begin(), h.diagonal.begin() + c + 1),
                        std::vector<double>(c, -t)};
        even.e[c - 1] = -std::sqrt(2.0) * t;
        SymTridiag odd{std::vector<double>(h.diagonal.begin(), h.diagonal.begin() + c),
                       std::vector<double>(c - 1, -t)};
        blocks.push_back({std::move(even), +1});
        blocks.push_back({std::move(odd), -1});
    }

    // Eigenvectors of a mirror-symmetric Jacobi matrix alternate even, odd,
    // even, ... in energy order, so the even block supplies ceil(k/2) states
    // and the odd block floor(k/2). Interleaving by index rather than by
    // computed value keeps the parity order even when a doublet splitting is
    // below roundoff.
    std::vector<BlockPairs> pairs;
    for (const auto& b : blocks)
    {
        const std::size_t count = b.parity == 0 ? k : b.parity > 0 ? (k + 1) / 2 : k / 2;
        pairs.push_back(bisect_block(b.matrix, count, options));
    }
    std::vector<double> all;
    for (const auto& p : pairs)
        all.insert(all.end(), p.values.begin(), p.values.end());
    std::sort(all.begin(), all.end());
    double ek = 0.0;
    for (double v : all)
        ek = std::max(ek, std::abs(v));
    const double target = std::max(options.residual_rel_tol * ek, 16.0 * kEps * hnorm);

    for (std::size_t b = 0; b < blocks.size(); ++b)
        inverse_iterate(blocks[b].matrix, pairs[b], options, target, rng);

    std::vector<std::vector<Candidate>> per_block(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
    {
        const auto& p = pairs[b];
        for (std::size_t j = 0; j < p.values.size(); ++j)
        {
            const auto& u = p.vectors[j];
            std::vector<double> full(points, 0.0);
            const int parity = blocks[b].parity;
            if (parity == 0)
            {
                full = u;
            }
            else if (points % 2 == 0)
            {
                const std::size_t m = points / 2;
                for (std::size_t i = 0; i < m; ++i)
                {
                    full[i] = u[i];
                    full[points - 1 - i] = parity * u[i];
                }
            }
            else
            {
                const std::size_t c = (points - 1) / 2;
                for (std::size_t i = 0; i < c; ++i)
                {
                    full[i] = u[i];
                    full[points - 1 - i] = parity * u[i];
                }
                full[c] = parity > 0 ? std::sqrt(2.0) * u[c] : 0.0;
            }
            per_block[b].push_back({p.values[j], std::move(full), p.residuals[j], p.iterations[j]});
        }
    }
    std::vector<Candidate> cands;
    for (std::size_t j = 0; j < k; ++j)
    {
        auto& src = blocks.size() == 1 ? per_block[0][j] : per_block[j % 2][j / 2];
        cands.push_back(std::move(src));
    }
    // Sorted values paired with parity-ordered vectors; any swap is within
    // the bisection accuracy.
    for (std::size_t j = 0; j < k; ++j)
        cands[j].energy = all[j];

    EigenSolution sol{h.grid, h.units, {}, {}, {}, {}, 0};
    const double spacing = h.grid.spacing();
    for (auto& c : cands)
    {
        auto& v = c.full;
        const double n2 = dot(v, v) * spacing;
        scale(v, 1.0 / std::sqrt(n2));
        for (double x : v)
        {
            if (std::abs(x) > 1e-12)
            {
                if (x < 0.0)
                    scale(v, -1.0);
                break;
            }
        }
        sol.energies.push_back(c.energy);
        sol.states.push_back(std::move(v));
        sol.iterations.push_back(c.iterations);
    }
    sol.hamiltonian_fingerprint = eigen_fingerprint(h, k);

    std::vector<double> hv(points);
    for (const auto& v : sol.states)
    {
        h.apply(v, hv);
        const double lambda = sol.energies[sol.residuals.size()];
        double s = 0.0;
        for (std::size_t i = 0; i < points; ++i)
        {
            const double r = hv[i] - lambda * v[i];
            s += r * r;
        }
        sol.residuals.push_back(std::sqrt(s * spacing));
    }
    verify_solution(h, sol, options);
    return sol;
}

std::uint64_t eigen_fingerprint(const TridiagonalHamiltonian& h, std::size_t k)
{
    Fnv1a fp;
    fp.u64(h.fingerprint()).u64(k);
    return fp.value();
}

double max_residual(const TridiagonalHamiltonian& h, const EigenSolution& solution)
{
    require_same_grid(h.grid, solution.grid);
    const std::size_t points = h.grid.points();
    std::vector<double> hv(points);
    double worst = 0.0;
    for (std::size_t n = 0; n < solution.size(); ++n)
    {
        const auto& v = solution.states[n];
        h.apply(v, hv);
        double s = 0.0;
        for (std::size_t i = 0; i < points; ++i)
        {
            const double r = hv[i] - solution.energies[n] * v[i];
            s += r * r;
        }
        worst = std::max(worst, std::sqrt(s * h.grid.spacing()));
    }
    return worst;
}

double orthonormality_defect(const EigenSolution& solution)
{
    double worst = 0.0;
    const double spacing = solution.grid.spacing();
    for (std::size_t a = 0; a < solution.size(); ++a)
    {
        for (std::size_t b = a; b < solution.size(); ++b)
        {
            const double g = dot(solution.states[a], solution.states[b]) * spacing;
            worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
        }
    }
    return worst;
}

void verify_solution(const TridiagonalHamiltonian& h, const EigenSolution& solution, const SolverOptions& options)
{
    if (solution.size() == 0 || solution.states.size() != solution.size())
        throw ConvergenceError("empty or inconsistent eigen-solution", 0.0);
    for (const auto& v : solution.states)
    {
        if (v.size() != h.grid.points())
            throw GridMismatchError("eigenvector length does not match grid");
    }
    double ek = 0.0;
    for (double e : solution.energies)
        ek = std::max(ek, std::abs(e));
    const double bound = std::max(options.acceptance_rel_tol * ek, 64.0 * kEps * h.norm_bound());
    const double worst = max_residual(h, solution);
    if (!(worst < bound))
    {
        std::ostringstream msg;
        msg << "eigen-residual " << worst << " exceeds bound " << bound;
        throw ConvergenceError(msg.str(), worst);
    }
    const double defect = orthonormality_defect(solution);
    if (!(defect < 1e-10))
    {
        std::ostringstream msg;
        msg << "eigenvectors not orthonormal: defect " << defect;
        throw ConvergenceError(msg.str(), worst);
    }
}

}  // namespace qwell
